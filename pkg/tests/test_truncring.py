import pytest
import sympy
from hypothesis import given, settings, strategies as st

from ktorsion.truncring import RingSpec, TruncPoly, expand_line_bundle, monomial_key, render


def spec_strategy(max_vars=3, max_r=4):
    return st.lists(st.integers(2, max_r), min_size=1, max_size=max_vars).map(
        lambda rs: RingSpec(tuple(rs)))


@st.composite
def poly_pair(draw):
    spec = draw(spec_strategy())
    coeffs = st.integers(-20, 20)
    a = {m: draw(coeffs) for m in spec.monomials}
    b = {m: draw(coeffs) for m in spec.monomials}
    return spec, TruncPoly(spec, a), TruncPoly(spec, b)


def to_sympy(p: TruncPoly, ys):
    return sum((c * sympy.prod([y**e for y, e in zip(ys, m)]) for m, c in p.terms.items()),
               sympy.Integer(0))


def truncate(expr, spec, ys):
    """Dense oracle: expand in Z[y] and drop every monomial with y_i^{r_i}."""
    poly = sympy.Poly(sympy.expand(expr), *ys)
    out = {}
    for exps, c in poly.terms():
        if all(e < r for e, r in zip(exps, spec.truncations)) and c:
            out[tuple(exps)] = int(c)
    return out


@settings(max_examples=60, deadline=None)
@given(poly_pair())
def test_product_matches_dense_expansion(data):
    spec, a, b = data
    ys = sympy.symbols(f"y1:{spec.n + 1}")
    expected = truncate(to_sympy(a, ys) * to_sympy(b, ys), spec, ys)
    assert (a * b).terms == expected


@settings(max_examples=60, deadline=None)
@given(poly_pair())
def test_ring_axioms(data):
    spec, a, b = data
    c = a - b
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * spec.one() == a
    assert a + (-a) == spec.zero()


@settings(max_examples=40, deadline=None)
@given(spec_strategy(max_vars=3, max_r=3), st.data())
def test_line_bundle_roots_match_dense(spec, data):
    a = tuple(data.draw(st.integers(0, 4)) for _ in range(spec.n))
    ys = sympy.symbols(f"y1:{spec.n + 1}")
    expected = truncate(sympy.prod([(1 + y) ** e for y, e in zip(ys, a)]) - 1, spec, ys)
    assert expand_line_bundle(spec, a).terms == expected


def test_line_bundle_rejects_negative_exponents():
    with pytest.raises(ValueError):
        expand_line_bundle(RingSpec((3, 3)), (1, -2))


def test_monomial_order_is_degree_lex():
    spec = RingSpec((2, 3))
    degs = [sum(m) for m in spec.monomials]
    assert degs == sorted(degs)
    assert spec.monomials[0] == (0, 0)
    assert spec.rank == 6 and spec.dim == 3
    assert sorted(spec.monomials, key=monomial_key) == list(spec.monomials)


def test_vector_roundtrip_and_render():
    spec = RingSpec((2, 2, 2))
    p = TruncPoly(spec, {(1, 1, 0): 3, (0, 0, 1): -2})
    assert TruncPoly.from_vector(spec, p.to_vector()) == p
    assert render(p) in ("-2*y3 + 3*y1*y2", "3*y1*y2 - 2*y3")


def test_nilpotence():
    spec = RingSpec((2, 3))
    y1, y2 = spec.variable(0), spec.variable(1)
    assert y1**2 == spec.zero()
    assert y2**3 == spec.zero()
    assert (y1 + y2) ** (spec.dim + 1) == spec.zero()


def test_dense_oracle_at_rank_81():
    spec = RingSpec((3, 3, 3, 3))
    assert spec.rank == 81
    ys = sympy.symbols("y1:5")
    a = expand_line_bundle(spec, (1, 2, 0, 1))
    b = expand_line_bundle(spec, (2, 1, 1, 2))
    expected = truncate(to_sympy(a, ys) * to_sympy(b, ys), spec, ys)
    assert (a * b).terms == expected


def test_mismatched_rings_rejected():
    with pytest.raises(ValueError):
        RingSpec((2,)).variable(0) * RingSpec((3,)).variable(0)
