import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ktorsion.chern import chern_classes
from ktorsion.filtration import (
    Claim,
    Filtration,
    GammaTwoMismatch,
    ModelNotClosed,
    build_gamma,
    check_gammatwo,
    deepest_level,
    membership_suite,
    saturated_filtration,
    torsion_report,
    y_adic_layer,
)
from ktorsion.intlattice import IntegerLattice
from ktorsion.kmodel import IndexFunction, KGenerator, KLatticeModel, quillen_generators, uniform_index
from ktorsion.shorthand import evaluate
from ktorsion.truncring import RingSpec


def brute_gamma(model: KLatticeModel, d: int) -> IntegerLattice:
    """Span of every product of generator Chern classes of total degree >= d."""
    spec = model.spec
    atoms = [a for g in model.generators for a in chern_classes(g, spec) if a.value]
    vecs = []
    for k in range(1, spec.dim + 1):
        for combo in itertools.combinations_with_replacement(range(len(atoms)), k):
            if sum(atoms[i].degree for i in combo) < d:
                continue
            prod = spec.one()
            for i in combo:
                prod = prod * atoms[i].value
            if prod:
                vecs.append(prod.to_vector())
    if d == 0:
        return model.lattice
    return IntegerLattice(spec.rank, vecs)


CASES = {
    "three conics": uniform_index((2, 2, 2), 2),
    "two SB": uniform_index((3, 3), 3),
    "conics 2,2,4": IndexFunction.from_rule((2, 2), lambda t: {0: 1, 1: 2, 2: 4}[sum(t)]),
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_recurrence_matches_brute_force_products(name):
    _, model = quillen_generators(CASES[name])
    filt = build_gamma(model)
    for d in range(model.spec.dim + 2):
        assert filt.level(d) == brute_gamma(model, d), d


@st.composite
def small_conic_index(draw):
    n = draw(st.integers(2, 3))
    values = {}
    for t in itertools.product(range(2), repeat=n):
        values[t] = 1 if not any(t) else 2 if sum(t) == 1 else draw(st.sampled_from((2, 4)))
    return IndexFunction((2,) * n, values)


@settings(max_examples=15, deadline=None)
@given(small_conic_index())
def test_recurrence_matches_brute_force_random(idx):
    split, model = quillen_generators(idx)
    try:
        filt = build_gamma(model)
    except ModelNotClosed:
        return
    for d in range(model.spec.dim + 2):
        assert filt.level(d) == brute_gamma(model, d)
    check_gammatwo(filt, build_gamma(split))


def test_split_model_has_monomial_filtration():
    split, _ = quillen_generators(uniform_index((3, 3), 3))
    filt = build_gamma(split)
    sat = saturated_filtration(split)
    for d in range(split.spec.dim + 2):
        assert filt.level(d) == sat.level(d) == y_adic_layer(split.spec, d)


def test_three_conic_report():
    split, model = quillen_generators(uniform_index((2, 2, 2), 2))
    fx, fE = build_gamma(model), build_gamma(split)
    report = torsion_report(fx, fE)
    assert [q.torsion_str() for q in report.per_codim] == ["0", "0", "Z/2", "0"]
    assert report.alphalem == "verified"
    assert report.index == 2**7


def test_gammatwo_mismatch_detected():
    split, model = quillen_generators(uniform_index((2, 2), 2))
    fx, fE = build_gamma(model), build_gamma(split)
    levels = list(fx.levels)
    levels[2] = IntegerLattice.zero(model.spec.rank)
    with pytest.raises(GammaTwoMismatch):
        check_gammatwo(Filtration(model, tuple(levels), fx.atoms), fE)


def test_unclosed_model_rejected():
    spec = RingSpec((2, 2))
    # (2 x1)(2 x2) = 4 x12 is not in the span
    gens = [KGenerator(1, ((0, 0),)), KGenerator(2, ((1, 0),)), KGenerator(2, ((0, 1),)),
            KGenerator(8, ((1, 1),))]
    with pytest.raises(ModelNotClosed):
        build_gamma(KLatticeModel(spec, gens))


def test_membership_claims():
    split, model = quillen_generators(uniform_index((2, 2), 2))
    fx, fE = build_gamma(model), build_gamma(split)
    claims = [Claim("a", "2*y1", "gamma", 1), Claim("b", "y1", "gamma", 1),
              Claim("c", "4*y12", "gamma", 2), Claim("d", "2*y12", "image", 2),
              Claim("e", "y12", "gamma", 2, assumed_witness=True)]
    results = {r.claim.id: r for r in membership_suite(fx, claims, fE)}
    assert results["a"].status == "pass"
    assert results["b"].status == "fail" and results["b"].witness == "not in K(X)"
    assert results["c"].status == "pass"
    assert results["d"].status == "pass"
    assert results["e"].status == "unconfirmed"
    assert deepest_level(fx, evaluate("4*y12", model.spec).to_vector()) == 2


def test_claim_validation():
    with pytest.raises(ValueError):
        Claim("x", "y1", "bogus", 1)
