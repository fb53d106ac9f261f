import itertools
import math

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from ktorsion.intlattice import (
    IntegerLattice,
    NotASublattice,
    hnf_rows,
    index,
    intersect,
    lattice_sum,
    quotient_torsion,
    smith_decomposition,
    snf,
)


def matrices(max_rows=4, max_cols=4, bound=4):
    return st.integers(1, max_cols).flatmap(lambda c: st.lists(
        st.lists(st.integers(-bound, bound), min_size=c, max_size=c), min_size=1, max_size=max_rows
    ).map(lambda rows: (c, rows)))


def box(D, R):
    return itertools.product(range(-R, R + 1), repeat=D)


def brute_members(gens, D, R=3, coeff=6):
    """Every lattice point in the box [-R, R]^D reachable with small coefficients."""
    out = set()
    for cs in itertools.product(range(-coeff, coeff + 1), repeat=len(gens)):
        v = tuple(sum(c * g[i] for c, g in zip(cs, gens)) for i in range(D))
        if all(abs(x) <= R for x in v):
            out.add(v)
    return out


@settings(max_examples=40, deadline=None)
@given(matrices(max_rows=3, max_cols=3, bound=3))
def test_membership_matches_enumeration(data):
    D, gens = data
    L = IntegerLattice(D, gens)
    members = brute_members(gens, D, R=2)
    for v in box(D, 2):
        if v in members:
            assert list(v) in L
    for v in box(D, 2):
        if list(v) in L:
            # the HNF certificate must be an integral combination of the generators
            coords = L.coordinates(list(v))
            assert coords is not None
            back = [sum(c * row[i] for c, row in zip(coords, L.canonical)) for i in range(D)]
            assert back == list(v)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_snf_matches_sympy(data):
    D, rows = data
    ours = snf(rows, D)
    M = sympy.Matrix(rows)
    S = smith_normal_form(M, domain=sympy.ZZ)
    diag = [abs(int(S[i, i])) for i in range(min(S.shape))]
    nonzero = [d for d in diag if d]
    assert ours.free_rank == D - len(nonzero)
    assert list(ours.divisors) == [d for d in sorted(nonzero) if d > 1]


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_hnf_is_canonical(data):
    D, rows = data
    H = hnf_rows(rows, D)
    assert IntegerLattice(D, H) == IntegerLattice(D, rows)
    assert hnf_rows(H, D) == H
    assert len(H) == sympy.Matrix(rows).rank()


@settings(max_examples=30, deadline=None)
@given(matrices(max_rows=3, max_cols=3, bound=3), matrices(max_rows=3, max_cols=3, bound=3))
def test_intersection_and_sum(a, b):
    if a[0] != b[0]:
        return
    D = a[0]
    L1, L2 = IntegerLattice(D, a[1]), IntegerLattice(D, b[1])
    inter, tot = intersect(L1, L2), lattice_sum(L1, L2)
    assert L1.contains_lattice(inter) and L2.contains_lattice(inter)
    assert tot.contains_lattice(L1) and tot.contains_lattice(L2)
    for v in box(D, 2):
        v = list(v)
        assert (v in inter) == (v in L1 and v in L2)


def test_smith_decomposition_certificate():
    M = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    S, U, V = smith_decomposition(M)
    assert (sympy.Matrix(U) * sympy.Matrix(M) * sympy.Matrix(V)) == sympy.Matrix(S)
    assert abs(sympy.Matrix(U).det()) == 1 and abs(sympy.Matrix(V).det()) == 1
    oracle = smith_normal_form(sympy.Matrix(M), domain=sympy.ZZ)
    assert [abs(S[i][i]) for i in range(3)] == [abs(int(oracle[i, i])) for i in range(3)]


def test_quotient_and_index():
    sup = IntegerLattice.standard(3)
    sub = IntegerLattice(3, [[2, 0, 0], [0, 6, 0], [0, 0, 1]])
    q = quotient_torsion(sub, sup)
    assert q.divisors == (2, 6) and q.free_rank == 0
    assert q.torsion_str() == "Z/2 + Z/6"
    assert index(sub, sup) == 12
    assert index(IntegerLattice(3, [[1, 0, 0]]), sup) == math.inf
    with pytest.raises(NotASublattice):
        quotient_torsion(sup, sub)


def test_index_by_counting_cosets():
    gens = [[2, 1], [0, 3]]
    L = IntegerLattice(2, gens)
    # cosets of L in Z^2 inside a fundamental box of side det = 6
    reps = {_reduce(v, L) for v in itertools.product(range(6), repeat=2)}
    assert index(L, IntegerLattice.standard(2)) == len(reps) == 6


def _reduce(v, L):
    for w in itertools.product(range(6), repeat=2):
        if [a - b for a, b in zip(v, w)] in L:
            return w
