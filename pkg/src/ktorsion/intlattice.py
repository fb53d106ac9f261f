"""Exact integer lattices in Z^D: Hermite/Smith normal forms, membership,
sums, intersections, indices and quotient torsion.

The workhorse is :func:`hnf_rows`, a column-by-column Euclidean row reduction
vectorised with numpy.  It runs on ``int64`` while an a-priori bound shows no
intermediate can overflow and silently switches to Python integers
(``dtype=object``) otherwise, so results are always exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

_SAFE = 2**62


class NotASublattice(ValueError):
    """Raised when a claimed containment of lattices fails."""


class AmbientMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# Hermite normal form
# ---------------------------------------------------------------------------


def _as_matrix(rows, ncols: int) -> np.ndarray:
    if isinstance(rows, np.ndarray):
        A = rows
    else:
        rows = [list(r) for r in rows]
        if not rows:
            return np.zeros((0, ncols), dtype=np.int64)
        A = np.array(rows, dtype=object)
    if A.ndim != 2 or A.shape[1] != ncols:
        raise AmbientMismatch(f"expected rows of length {ncols}, got shape {A.shape}")
    if A.dtype == object:
        bound = max((abs(int(x)) for x in A.flat), default=0)
        if bound < 2**31:
            return A.astype(np.int64)
        return A.copy()
    if A.dtype != np.int64:
        A = A.astype(np.int64)
    return A.copy()


def _maxabs(A: np.ndarray) -> int:
    if A.size == 0:
        return 0
    if A.dtype == object:
        return max(abs(int(x)) for x in A.flat)
    return int(np.abs(A).max())


def hnf_rows(rows, ncols: int) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Pivots are strictly positive, entries above a pivot lie in ``[0, pivot)``
    and zero rows are dropped.  The result is canonical for the lattice.
    """
    A = _as_matrix(rows, ncols)
    if A.shape[0]:
        A = A[np.any(A != 0, axis=1)]
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r >= A.shape[0]:
            break
        while True:
            col = A[r:, c]
            nz = np.nonzero(col)[0]
            if len(nz) == 0:
                break
            if len(nz) == 1:
                k = r + int(nz[0])
                if k != r:
                    A[[r, k]] = A[[k, r]]
                break
            vals = np.abs(col[nz])
            k = r + int(nz[int(np.argmin(vals))])
            if k != r:
                A[[r, k]] = A[[k, r]]
            piv = A[r, c]
            rest = A[r + 1:, c]
            nzr = np.nonzero(rest)[0]
            q = rest[nzr] // piv
            if A.dtype != object:
                bound = _maxabs(q) * _maxabs(A[r]) + _maxabs(A[r + 1:])
                if bound >= _SAFE:
                    A = A.astype(object)
                    q = q.astype(object)
            rows_idx = r + 1 + nzr
            A[rows_idx] -= q[:, None] * A[r][None, :]
        if A[r, c] != 0:
            if A[r, c] < 0:
                A[r] = -A[r]
            pivots.append(c)
            r += 1
            if r < A.shape[0]:
                keep = np.any(A[r:] != 0, axis=1)
                if not keep.all():
                    A = np.concatenate([A[:r], A[r:][keep]])
    A = A[:r]
    if A.dtype != object and r:
        # back-reduction multiplies by quotients bounded by the entries themselves
        if _maxabs(A) ** 2 * (r + 1) >= _SAFE:
            A = A.astype(object)
    for i, c in enumerate(pivots):
        piv = A[i, c]
        if i:
            q = A[:i, c] // piv
            nzq = np.nonzero(q)[0]
            if len(nzq):
                A[nzq] -= q[nzq][:, None] * A[i][None, :]
    return [tuple(int(x) for x in row) for row in A]


def _pivot_columns(basis: Sequence[Sequence[int]]) -> list[int]:
    out = []
    for row in basis:
        for j, x in enumerate(row):
            if x:
                out.append(j)
                break
    return out


def solve_in_basis(basis: Sequence[Sequence[int]], pivots: Sequence[int],
                   vec: Sequence[int]) -> list[int] | None:
    """Coordinates of ``vec`` in an echelon basis, or ``None`` if not a member."""
    v = [int(x) for x in vec]
    coords = []
    for row, c in zip(basis, pivots):
        if any(v[j] for j in range(c)):
            return None
        a = row[c]
        if v[c] % a:
            return None
        q = v[c] // a
        coords.append(q)
        if q:
            for j in range(c, len(v)):
                if row[j]:
                    v[j] -= q * row[j]
    if any(v):
        return None
    return coords


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ElementaryDivisors:
    """Invariant factors (>= 2) of a finitely generated abelian group plus its free rank."""

    divisors: tuple[int, ...]
    free_rank: int

    def __post_init__(self):
        d = tuple(int(x) for x in self.divisors)
        if any(x < 2 for x in d):
            raise ValueError(f"torsion divisors must be >= 2: {d}")
        if any(b % a for a, b in zip(d, d[1:])):
            raise ValueError(f"divisors do not form a divisibility chain: {d}")
        object.__setattr__(self, "divisors", d)

    @property
    def torsion_order(self) -> int:
        return math.prod(self.divisors)

    @property
    def order(self) -> float:
        return self.torsion_order if self.free_rank == 0 else math.inf

    @property
    def is_trivial_torsion(self) -> bool:
        return not self.divisors

    def torsion_str(self) -> str:
        if not self.divisors:
            return "0"
        parts = []
        for d in sorted(set(self.divisors)):
            k = self.divisors.count(d)
            parts.append(f"(Z/{d})^{k}" if k > 1 else f"Z/{d}")
        return " + ".join(parts)

    def __str__(self):
        parts = [] if not self.divisors else [self.torsion_str()]
        if self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def _chain(diag: Iterable[int]) -> list[int]:
    """Turn a list of non-zero diagonal entries into a divisibility chain."""
    d = [abs(int(x)) for x in diag if x]
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                a, b = d[i], d[j]
                if b % a:
                    g = math.gcd(a, b)
                    d[i], d[j] = g, a // g * b
                    changed = True
    return sorted(d)


def snf(matrix: Sequence[Sequence[int]], ncols: int | None = None) -> ElementaryDivisors:
    """Smith invariants of the cokernel of ``matrix`` (rows are relations in Z^ncols).

    Computed by alternating HNF of the matrix and of its transpose until the
    result is diagonal.  ``free_rank`` is ``ncols - rank``.
    """
    rows = [list(map(int, r)) for r in matrix]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    M = hnf_rows(rows, ncols) if rows else []
    rank = len(M)
    while True:
        if all(M[i][j] == 0 for i in range(len(M)) for j in range(len(M[i])) if i != j):
            break
        T = [list(col) for col in zip(*M)]
        M = hnf_rows(T, len(M))
        if all(M[i][j] == 0 for i in range(len(M)) for j in range(len(M[i])) if i != j):
            break
        T = [list(col) for col in zip(*M)]
        M = hnf_rows(T, len(M))
    diag = [M[i][i] for i in range(len(M))]
    chain = _chain(diag)
    return ElementaryDivisors(tuple(x for x in chain if x > 1), ncols - rank)


def smith_decomposition(matrix: Sequence[Sequence[int]]):
    """Audit variant of :func:`snf`: returns ``(S, U, V)`` with ``U * M * V = S``.

    ``U`` and ``V`` are unimodular and ``S`` is diagonal with d_1 | d_2 | ...
    Pure Python; meant for the modest sizes used in audits and tests.
    """
    M = [list(map(int, r)) for r in matrix]
    m = len(M)
    n = len(M[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        M[dst] = [a + k * b for a, b in zip(M[dst], M[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in M:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        while True:
            entries = [(abs(M[i][j]), i, j) for i in range(t, m) for j in range(t, n) if M[i][j]]
            if not entries:
                return M, U, V
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            piv = M[t][t]
            for i in range(t + 1, m):
                if M[i][t]:
                    add_row(i, t, -(M[i][t] // piv))
            for j in range(t + 1, n):
                if M[t][j]:
                    add_col(j, t, -(M[t][j] // piv))
            if any(M[i][t] for i in range(t + 1, m)) or any(M[t][j] for j in range(t + 1, n)):
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(M[i][j] % piv for j in range(t + 1, n))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return M, U, V


# ---------------------------------------------------------------------------
# Lattices
# ---------------------------------------------------------------------------


class IntegerLattice:
    """A sublattice of Z^D given by generators; canonical HNF basis computed lazily.

    Instances are treated as immutable.  The cached canonical form is computed
    deterministically, so a race on first access only duplicates work.
    """

    __slots__ = ("ambient_rank", "generators", "_canonical", "_pivots")

    def __init__(self, ambient_rank: int, generators=()):
        self.ambient_rank = int(ambient_rank)
        if isinstance(generators, np.ndarray):
            if generators.size and generators.shape[1] != self.ambient_rank:
                raise AmbientMismatch(f"generator width {generators.shape[1]} != {ambient_rank}")
            self.generators = generators
        else:
            gens = tuple(tuple(int(x) for x in g) for g in generators)
            for g in gens:
                if len(g) != self.ambient_rank:
                    raise AmbientMismatch(f"generator of length {len(g)} in Z^{ambient_rank}")
            self.generators = gens
        self._canonical = None
        self._pivots = None

    @classmethod
    def from_basis(cls, ambient_rank: int, basis) -> "IntegerLattice":
        """Wrap rows already known to be in canonical HNF."""
        L = cls(ambient_rank, basis)
        L._canonical = L.generators
        L._pivots = _pivot_columns(L._canonical)
        return L

    @classmethod
    def zero(cls, ambient_rank: int) -> "IntegerLattice":
        return cls.from_basis(ambient_rank, ())

    @classmethod
    def standard(cls, ambient_rank: int, coords: Iterable[int] | None = None) -> "IntegerLattice":
        coords = range(ambient_rank) if coords is None else sorted(coords)
        basis = [tuple(int(i == j) for j in range(ambient_rank)) for i in coords]
        return cls.from_basis(ambient_rank, basis)

    @property
    def canonical(self) -> tuple[tuple[int, ...], ...]:
        if self._canonical is None:
            gens = self.generators
            if isinstance(gens, np.ndarray):
                basis = hnf_rows(gens, self.ambient_rank)
            else:
                basis = hnf_rows(list(gens), self.ambient_rank) if gens else []
            self._pivots = _pivot_columns(basis)
            self._canonical = tuple(basis)
        return self._canonical

    @property
    def pivots(self) -> list[int]:
        self.canonical
        return self._pivots

    @property
    def rank(self) -> int:
        return len(self.canonical)

    def basis_matrix(self) -> np.ndarray:
        B = self.canonical
        if not B:
            return np.zeros((0, self.ambient_rank), dtype=np.int64)
        bound = max(abs(x) for row in B for x in row)
        return np.array(B, dtype=np.int64 if bound < 2**62 else object)

    def coordinates(self, vec: Sequence[int]) -> list[int] | None:
        if len(vec) != self.ambient_rank:
            raise AmbientMismatch(f"vector of length {len(vec)} in Z^{self.ambient_rank}")
        return solve_in_basis(self.canonical, self.pivots, vec)

    def __contains__(self, vec) -> bool:
        return self.coordinates(vec) is not None

    def contains_lattice(self, other: "IntegerLattice") -> bool:
        _check_ambient(self, other)
        return all(row in self for row in other.canonical)

    def __eq__(self, other):
        if not isinstance(other, IntegerLattice):
            return NotImplemented
        return self.ambient_rank == other.ambient_rank and self.canonical == other.canonical

    def __hash__(self):
        return hash((self.ambient_rank, self.canonical))

    def __repr__(self):
        return f"IntegerLattice(D={self.ambient_rank}, rank={self.rank})"


def _check_ambient(a: IntegerLattice, b: IntegerLattice):
    if a.ambient_rank != b.ambient_rank:
        raise AmbientMismatch(f"Z^{a.ambient_rank} vs Z^{b.ambient_rank}")


def hnf(L: IntegerLattice) -> IntegerLattice:
    return IntegerLattice.from_basis(L.ambient_rank, L.canonical)


def lattice_sum(*lattices: IntegerLattice) -> IntegerLattice:
    if not lattices:
        raise ValueError("need at least one lattice")
    D = lattices[0].ambient_rank
    for L in lattices[1:]:
        _check_ambient(lattices[0], L)
    rows = [row for L in lattices for row in L.canonical]
    return IntegerLattice.from_basis(D, hnf_rows(rows, D) if rows else [])


def intersect(L1: IntegerLattice, L2: IntegerLattice) -> IntegerLattice:
    """Exact intersection via the kernel of the stacked bases.

    Reduces ``[[B1, B1], [B2, 0]]``: rows whose left block vanishes carry
    ``a*B1 = -b*B2`` in the right block and span ``L1 ∩ L2``.
    """
    _check_ambient(L1, L2)
    D = L1.ambient_rank
    B1, B2 = L1.canonical, L2.canonical
    if not B1 or not B2:
        return IntegerLattice.zero(D)
    rows = [list(r) + list(r) for r in B1] + [list(r) + [0] * D for r in B2]
    H = hnf_rows(rows, 2 * D)
    inter = [row[D:] for row in H if not any(row[:D])]
    return IntegerLattice.from_basis(D, hnf_rows(inter, D) if inter else [])


def quotient_torsion(sub: IntegerLattice, sup: IntegerLattice) -> ElementaryDivisors:
    """Structure of ``sup / sub``: torsion invariants and free rank."""
    _check_ambient(sub, sup)
    coords = []
    for row in sub.canonical:
        c = sup.coordinates(row)
        if c is None:
            raise NotASublattice(f"generator {row} of the sublattice is not in the superlattice")
        coords.append(c)
    r = sup.rank
    if not coords:
        return ElementaryDivisors((), r)
    return snf(coords, r)


def index(sub: IntegerLattice, sup: IntegerLattice) -> float:
    """Group index ``[sup : sub]``; ``inf`` when the ranks differ."""
    q = quotient_torsion(sub, sup)
    return q.order
