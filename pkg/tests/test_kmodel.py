import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from ktorsion.intlattice import index
from ktorsion.kmodel import (
    ConfigError,
    IndexFunction,
    KGenerator,
    KLatticeModel,
    QuadricConfig,
    galois_orbits,
    load_config,
    normalize_config,
    quadric_index_formula,
    quillen_generators,
    uniform_index,
    weil_generators,
)
from ktorsion.scenarios.quadrics import three_quadric_configs, two_quadric_configs
from ktorsion.truncring import RingSpec


@st.composite
def conic_index(draw, max_n=4):
    """Index data for up to four quaternion algebras, split factors allowed."""
    n = draw(st.integers(1, max_n))
    singles = [draw(st.sampled_from((1, 2))) for _ in range(n)]

    def rule(t):
        support = [i for i, x in enumerate(t) if x]
        if not support:
            return 1
        if len(support) == 1:
            return singles[support[0]]
        return draw(st.sampled_from((2, 4)))

    table = {}
    for t in itertools.product(range(2), repeat=n):
        table[t] = rule(t)
    return IndexFunction((2,) * n, table)


@settings(max_examples=50, deadline=None)
@given(conic_index())
def test_normalize_is_idempotent(idx):
    once = normalize_config(idx)
    assert normalize_config(once) == once
    assert all(once.single(i) > 1 for i in range(once.n))


def test_normalize_drops_split_factor():
    idx = IndexFunction((2, 2), {(0, 0): 1, (1, 0): 1, (0, 1): 2, (1, 1): 2})
    out = normalize_config(idx)
    assert out.degrees == (2,) and out.table == {(0,): 1, (1,): 2}


def test_quillen_index_is_product_of_indices():
    idx = uniform_index((3, 3), 3)
    split, twisted = quillen_generators(idx)
    assert index(twisted.lattice, split.lattice) == 3**8
    assert twisted.spec == RingSpec((3, 3))


def test_model_requires_unit():
    with pytest.raises(ValueError):
        KLatticeModel(RingSpec((2,)), [KGenerator(2, ((0,),))])


@pytest.mark.parametrize("cfg", list(two_quadric_configs()) + list(three_quadric_configs()),
                         ids=lambda c: c.label())
def test_quadric_index_formula_matches_lattice_index(cfg):
    _, over_e, twisted = weil_generators(cfg)
    assert index(twisted.lattice, over_e.lattice) == quadric_index_formula(cfg)


@pytest.mark.parametrize("case,count", [("TwoQuadricsBiquadratic", 4 * 4),
                                        ("TwoQuadricsSameField", None),
                                        ("TwoQuadricsOneTrivialDisc", None),
                                        ("ThreeQuadricsSameDisc", None)])
def test_galois_orbits_partition_monomials(case, count):
    orbits = galois_orbits(case)
    flat = [a for o in orbits for a in o]
    assert len(flat) == len(set(flat))
    n = len(flat[0])
    assert set(flat) == set(itertools.product(range(2), repeat=n))
    if count is not None:
        assert len(flat) == count


def test_index_function_validation():
    with pytest.raises(ConfigError) as err:
        IndexFunction((2,), {(0,): 1})
    assert err.value.path == "index_table"
    with pytest.raises(ConfigError):
        IndexFunction((2,), {(0,): 1, (1,): 3})


def test_quadric_config_validation():
    with pytest.raises(ConfigError) as err:
        QuadricConfig("TwoQuadricsBiquadratic", {"1": 3, "2": 2}, {"12": 2})
    assert err.value.path == "e.1"
    with pytest.raises(ConfigError):
        QuadricConfig("Nope", {}, {})


def test_config_roundtrip():
    idx = uniform_index((2, 2, 2), 2)
    back = load_config(json.dumps(idx.to_json()))
    assert (back.degrees, back.table) == (idx.degrees, idx.table)
    cfg = QuadricConfig("ThreeQuadricsSameDisc", {"12": 2, "34": 2, "56": 2},
                        {"12": 2, "34": 2, "56": 2}, 2, 4)
    assert load_config(json.dumps(cfg.to_json())) == cfg


def test_config_errors_carry_line_and_field():
    text = '{\n  "kind": "split",\n  "degrees": [2],\n  "index_table": {"0": 1,\n    "1": "two"}\n}'
    with pytest.raises(ConfigError) as err:
        load_config(text)
    assert err.value.path == "index_table.1" and err.value.line == 5
    with pytest.raises(ConfigError) as err:
        load_config('{"kind": "split",\n "degrees": [2, 2],')
    assert err.value.line == 2
