from math import comb

import sympy
from hypothesis import given, settings, strategies as st

from ktorsion.chern import chern_class, chern_classes, first_chern_is_reduced_class, whitney_check
from ktorsion.kmodel import KGenerator
from ktorsion.truncring import RingSpec


@st.composite
def generator(draw, spec):
    size = draw(st.integers(1, 3))
    orbit = tuple(tuple(draw(st.integers(0, r - 1)) for r in spec.truncations) for _ in range(size))
    return KGenerator(draw(st.integers(1, 4)), orbit)


SPECS = [RingSpec((2, 2)), RingSpec((3, 3)), RingSpec((2, 2, 2)), RingSpec((3, 2))]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SPECS), st.data())
def test_whitney_on_random_orbits(spec, data):
    g1 = data.draw(generator(spec))
    g2 = data.draw(generator(spec))
    assert whitney_check(g1, g2, spec)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SPECS), st.data())
def test_first_class_and_vanishing(spec, data):
    g = data.draw(generator(spec))
    assert first_chern_is_reduced_class(g, spec)
    for atom in chern_classes(g, spec):
        assert atom.degree <= g.rank
    assert chern_class(g, spec, g.rank + 1) == spec.zero()


def _sympy_total(gen: KGenerator, spec: RingSpec, j: int) -> dict:
    """Coefficient of t^j in prod (1 + z_a t)^m, expanded with sympy and truncated."""
    ys = sympy.symbols(f"y1:{spec.n + 1}")
    t = sympy.Symbol("t")
    total = 1
    for a in gen.orbit:
        z = sympy.prod([(1 + y) ** e for y, e in zip(ys, a)]) - 1
        total *= (1 + z * t) ** gen.multiplier
    coeff = sympy.expand(total).coeff(t, j)
    out = {}
    for exps, c in sympy.Poly(coeff, *ys).terms():
        if all(e < r for e, r in zip(exps, spec.truncations)) and c:
            out[tuple(exps)] = int(c)
    return out


def test_chern_classes_match_symbolic_expansion():
    spec = RingSpec((3, 3))
    gen = KGenerator(3, ((1, 2), (2, 1)))
    for j in range(1, spec.dim + 1):
        assert chern_class(gen, spec, j).terms == _sympy_total(gen, spec, j)


def test_line_bundle_multiple():
    spec = RingSpec((2,))
    y = spec.variable(0)
    gen = KGenerator(4, ((1,),))
    # (1 + y t)^4 with y^2 = 0
    assert chern_class(gen, spec, 1) == y * 4
    assert chern_class(gen, spec, 2) == spec.zero()
    gen = KGenerator(3, ((1,),))
    spec3 = RingSpec((3,))
    z = spec3.variable(0)
    assert chern_class(gen, spec3, 2) == z * z * comb(3, 2)
