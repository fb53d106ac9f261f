"""The gamma filtration of a lattice model and the torsion of its quotients.

``levels[d]`` is built from Chern classes of the model's generators.  Products
of Chern classes of elements of Γ^1 reduce to products of Chern classes of
generators because the total Chern class is multiplicative; so Γ^d is spanned
by products of generator Chern classes of total degree >= d.  Sorting the
factors of such a product by degree gives the recurrence

    Γ^d = span( A_{>=d}  ∪  A_j·Γ^{d-j} (1 <= j < d)  ∪  A_j·Γ^1 (j >= d) )

where ``A_j`` is the span of all degree-j Chern classes.  By bilinearity the
atoms may be replaced by a basis of their span.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .chern import chern_classes
from .intlattice import (
    ElementaryDivisors,
    IntegerLattice,
    hnf_rows,
    index,
    intersect,
    lattice_sum,
    quotient_torsion,
)
from .kmodel import KLatticeModel
from .truncring import RingSpec, TruncPoly

_SAFE = 2**62


class ModelNotClosed(ValueError):
    """A Chern class of a generator falls outside the model lattice.

    Lattices of honest Grothendieck rings are closed under the gamma
    operations, so this signals index data that no variety can have.
    """


class GammaTwoMismatch(AssertionError):
    """Γ^d(X) differs from Γ^d(X_split) ∩ K(X) for d <= 2."""

    def __init__(self, d: int, witnesses: list[str]):
        self.d = d
        self.witnesses = witnesses
        super().__init__(f"level {d} mismatch; witnesses: {witnesses[:3]}")


# ---------------------------------------------------------------------------
# Batched products and spans
# ---------------------------------------------------------------------------


def _to_array(rows: Sequence[Sequence[int]], D: int) -> np.ndarray:
    if not rows:
        return np.zeros((0, D), dtype=np.int64)
    bound = max(abs(x) for r in rows for x in r)
    return np.array(rows, dtype=np.int64 if bound < _SAFE else object)


def _maxabs(A: np.ndarray) -> int:
    if A.size == 0:
        return 0
    if A.dtype == object:
        return max(abs(int(x)) for x in A.flat)
    return int(np.abs(A).max())


def product_rows(spec: RingSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """All pairwise ring products of the rows of ``A`` and ``B``, one per row."""
    D = spec.rank
    a, b = A.shape[0], B.shape[0]
    if a == 0 or b == 0:
        return np.zeros((0, D), dtype=np.int64)
    wide = _maxabs(A) * _maxabs(B) * D >= _SAFE
    if wide:
        A, B = A.astype(object), B.astype(object)
    out = np.zeros((a, b, D), dtype=object if wide else np.int64)
    for m, (ks, ls) in enumerate(spec.product_pairs):
        if len(ks):
            out[:, :, m] = A[:, ks] @ B[:, ls].T
    return out.reshape(a * b, D)


def span(D: int, blocks: Iterable[np.ndarray], chunk: int | None = None) -> IntegerLattice:
    """HNF span of many row blocks, reduced incrementally to bound the working size."""
    chunk = chunk or max(2 * D, 32)
    basis: list[tuple[int, ...]] = []
    for block in blocks:
        if block.shape[0] == 0:
            continue
        block = block[np.any(block != 0, axis=1)]
        if block.dtype != object and block.shape[0] > 1:
            block = np.unique(block, axis=0)
        for start in range(0, block.shape[0], chunk):
            part = block[start:start + chunk]
            cur = _to_array(basis, D)
            if cur.dtype == object or part.dtype == object:
                stacked = np.concatenate([cur.astype(object), part.astype(object)])
            else:
                stacked = np.concatenate([cur, part])
            basis = hnf_rows(stacked, D)
    return IntegerLattice.from_basis(D, basis)


# ---------------------------------------------------------------------------
# The filtration
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Filtration:
    """Γ^0 ⊇ Γ^1 ⊇ ... ⊇ Γ^{dim+1}; ``atoms[j]`` spans the degree-j Chern classes."""

    model: KLatticeModel
    levels: tuple[IntegerLattice, ...]
    atoms: dict[int, IntegerLattice] = field(repr=False)

    @property
    def spec(self) -> RingSpec:
        return self.model.spec

    @property
    def complete(self) -> bool:
        return len(self.levels) == self.spec.dim + 2

    def level(self, d: int) -> IntegerLattice:
        if d >= len(self.levels):
            if self.complete:
                return IntegerLattice.zero(self.spec.rank)
            raise IndexError(f"level {d} was not computed")
        return self.levels[d]

    def quotient(self, d: int) -> ElementaryDivisors:
        """Structure of Γ^{d/d+1}."""
        return quotient_torsion(self.level(d + 1), self.level(d))


def chern_atom_spans(model: KLatticeModel) -> dict[int, IntegerLattice]:
    spec = model.spec
    by_degree: dict[int, list[list[int]]] = {j: [] for j in range(1, spec.dim + 1)}
    for gen in model.generators:
        for atom in chern_classes(gen, spec):
            if atom.value:
                by_degree[atom.degree].append(atom.value.to_vector())
    return {j: span(spec.rank, [_to_array(v, spec.rank)]) for j, v in by_degree.items()}


def build_gamma(model: KLatticeModel, depth: int | None = None) -> Filtration:
    """Levels ``0 .. depth`` of the gamma filtration (default: through ``dim + 1``)."""
    spec = model.spec
    D, dim = spec.rank, spec.dim
    top = dim + 1 if depth is None else min(depth, dim + 1)
    basis = model.lattice.basis_matrix()
    if not model.lattice.contains_lattice(span(D, [product_rows(spec, basis, basis)])):
        raise ModelNotClosed(f"{model.name}: the lattice is not closed under multiplication")
    atoms = chern_atom_spans(model)
    for j, A in atoms.items():
        if not model.lattice.contains_lattice(A):
            raise ModelNotClosed(f"{model.name}: degree-{j} Chern classes leave the lattice")
    arrays = {j: atoms[j].basis_matrix() for j in atoms}
    levels = [model.lattice]
    if top >= 1:
        levels.append(atoms[1] if 1 in atoms else IntegerLattice.zero(D))
    for d in range(2, top + 1):
        blocks = [arrays[j] for j in arrays if j >= d]
        for j in range(1, d):
            if j in arrays:
                blocks.append(product_rows(spec, arrays[j], levels[d - j].basis_matrix()))
        lower = levels[1].basis_matrix()
        for j in range(d, dim + 1):
            blocks.append(product_rows(spec, arrays[j], lower))
        levels.append(span(D, blocks))
    for d in range(1, len(levels)):
        if not levels[d - 1].contains_lattice(levels[d]):
            raise AssertionError(f"level {d} is not contained in level {d - 1}")
    if top == dim + 1 and levels[-1].rank:
        raise AssertionError(f"level {dim + 1} should vanish, has rank {levels[-1].rank}")
    return Filtration(model, tuple(levels), atoms)


def augmentation_kernel(model: KLatticeModel) -> IntegerLattice:
    D = model.spec.rank
    return intersect(model.lattice, IntegerLattice.standard(D, range(1, D)))


def y_adic_layer(spec: RingSpec, d: int) -> IntegerLattice:
    """Span of the monomials of total degree >= d."""
    return IntegerLattice.standard(spec.rank, np.nonzero(spec.degrees >= d)[0].tolist())


def saturated_filtration(model: KLatticeModel) -> Filtration:
    """Levels ``K ∩ (monomials of degree >= d)``.

    This is the topological filtration of a variety whose Chow groups are
    torsion-free, such as a product of Weil restrictions of projective lines.
    """
    spec = model.spec
    levels = tuple(intersect(model.lattice, y_adic_layer(spec, d)) for d in range(spec.dim + 2))
    return Filtration(model, levels, {})


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorsionReport:
    name: str
    per_codim: tuple[ElementaryDivisors, ...]
    index: float
    alpha: tuple[float, ...]
    alphalem: str
    alphalem_reason: str = ""
    beta: tuple[Fraction, ...] | None = None
    note: str = ""

    def torsion(self, d: int) -> ElementaryDivisors:
        return self.per_codim[d]

    @property
    def total_torsion_order(self) -> int:
        return math.prod(q.torsion_order for q in self.per_codim)

    def to_json(self) -> dict:
        def num(x):
            return "inf" if x == math.inf else int(x)

        out = {
            "name": self.name,
            "per_codim": [
                {"d": d, "torsion": list(q.divisors), "free_rank": q.free_rank,
                 "group": q.torsion_str()}
                for d, q in enumerate(self.per_codim)
            ],
            "index": num(self.index),
            "alpha": [num(a) for a in self.alpha],
            "alphalem": self.alphalem,
        }
        if self.alphalem_reason:
            out["alphalem_reason"] = self.alphalem_reason
        if self.beta is not None:
            out["beta"] = [str(b) for b in self.beta]
        if self.note:
            out["note"] = self.note
        return out


def _orbit_degree(orbit) -> int:
    return sum(orbit[0])


def codim_index_factors(model_x: KLatticeModel, model_e: KLatticeModel) -> tuple[int, ...] | None:
    """``|K^i(X_E)/K^i(X)|`` per codimension i when both models share their orbits."""
    ox = [g.orbit for g in model_x.generators]
    oe = [g.orbit for g in model_e.generators]
    if ox != oe or any(g.multiplier % h.multiplier
                       for g, h in zip(model_x.generators, model_e.generators)):
        return None
    factors = [1] * (model_x.spec.dim + 1)
    for g, h in zip(model_x.generators, model_e.generators):
        factors[_orbit_degree(g.orbit)] *= g.multiplier // h.multiplier
    return tuple(factors)


def torsion_report(fx: Filtration, fE: Filtration, name: str = "", note: str = "") -> TorsionReport:
    """Torsion of each Γ^{d/d+1}(X), the index of K(X), restriction cokernels α_d,
    and the check ``|⊕ torsion| · [K_E : K_X] = ∏ α_d``."""
    if fx.spec != fE.spec:
        raise ValueError("filtrations live in different ambient rings")
    if not (fx.complete and fE.complete):
        raise ValueError("torsion reports need complete filtrations")
    dim = fx.spec.dim
    N = index(fx.model.lattice, fE.model.lattice)
    per_codim = tuple(fx.quotient(d) for d in range(dim + 1))
    alpha = []
    for d in range(dim + 1):
        image = lattice_sum(fx.level(d), fE.level(d + 1))
        alpha.append(index(image, fE.level(d)))
    bad = [d for d in range(dim + 1) if fE.quotient(d).divisors]
    beta = None
    factors = codim_index_factors(fx.model, fE.model)
    if factors is not None and all(a != math.inf for a in alpha):
        beta = tuple(Fraction(int(a), f) for a, f in zip(alpha, factors))
    if bad:
        status, reason = "skipped", f"splitting-side quotients have torsion at d={bad}"
    elif N == math.inf or any(a == math.inf for a in alpha):
        status, reason = "skipped", "restriction has infinite cokernel"
    else:
        lhs = math.prod(q.torsion_order for q in per_codim) * N
        rhs = math.prod(int(a) for a in alpha)
        status = "verified" if lhs == rhs else "failed"
        reason = "" if lhs == rhs else f"{lhs} != {rhs}"
    return TorsionReport(name or fx.model.name, per_codim, N, tuple(alpha), status, reason,
                         beta, note)


def gamma2_by_intersection(model_x: KLatticeModel, f_split: Filtration, d: int) -> IntegerLattice:
    """Γ^d(X_split) ∩ K(X) for d in {1, 2}."""
    if d not in (1, 2):
        raise ValueError("the intersection description holds for d = 1, 2 only")
    return intersect(f_split.level(d), model_x.lattice)


def check_gammatwo(fx: Filtration, f_split: Filtration) -> None:
    """Raise :class:`GammaTwoMismatch` unless Γ^d(X) = Γ^d(X_split) ∩ K(X) for d = 1, 2."""
    for d in (1, 2):
        expected = gamma2_by_intersection(fx.model, f_split, d)
        got = fx.level(d)
        if expected != got:
            spec = fx.spec
            missing = [TruncPoly.from_vector(spec, v) for v in expected.canonical if v not in got]
            extra = [TruncPoly.from_vector(spec, v) for v in got.canonical if v not in expected]
            raise GammaTwoMismatch(d, [f"missing {p}" for p in missing] +
                                   [f"unexpected {p}" for p in extra])


# ---------------------------------------------------------------------------
# Membership claims
# ---------------------------------------------------------------------------

CLAIM_KINDS = ("gamma", "quotient", "image")


@dataclass(frozen=True)
class Claim:
    """``expr`` lies in Γ^d (``gamma``), defines a class of Γ^{d/d+1}
    (``quotient``), or lies in the image of restriction to Γ^{d/d+1} of the
    splitting side (``image``).

    ``assumed_witness`` marks statements whose justification lives in the
    topological filtration (closed embeddings, transfers).  They are checked
    in Γ like the rest but a negative answer is not a failure.
    """

    id: str
    expr: str
    kind: str
    d: int
    reference: str = ""
    assumed_witness: bool = False

    def __post_init__(self):
        if self.kind not in CLAIM_KINDS:
            raise ValueError(f"claim kind must be one of {CLAIM_KINDS}, got {self.kind!r}")
        if self.d < 0:
            raise ValueError("claim degree must be non-negative")


@dataclass(frozen=True)
class ClaimResult:
    claim: Claim
    holds: bool
    witness: str

    @property
    def status(self) -> str:
        if self.holds:
            return "pass"
        return "unconfirmed" if self.claim.assumed_witness else "fail"


def deepest_level(filt: Filtration, vec: Sequence[int]) -> int:
    """Largest d with ``vec`` in Γ^d, or -1 if it is not in the model lattice."""
    deepest = -1
    for d, L in enumerate(filt.levels):
        if vec not in L:
            break
        deepest = d
    return deepest


def _class_order(vec: list[int], filt: Filtration, d: int, cap: int = 64) -> int | None:
    below = filt.level(d + 1)
    for k in range(1, cap + 1):
        if [k * x for x in vec] in below:
            return k
    return None


def membership_suite(fx: Filtration, claims: Iterable[Claim], fE: Filtration | None = None,
                     bindings: Mapping[str, TruncPoly] | None = None) -> list[ClaimResult]:
    """Check each claim by lattice membership; ``fE`` is needed for image claims."""
    from .shorthand import evaluate

    spec = fx.spec
    results = []
    for claim in claims:
        vec = evaluate(claim.expr, spec, bindings).to_vector()
        if claim.kind == "image":
            if fE is None:
                raise ValueError(f"claim {claim.id} needs the splitting-side filtration")
            target = lattice_sum(fx.level(claim.d), fE.level(claim.d + 1))
            holds = vec in target
            witness = "in image" if holds else f"outside image; split-side level {deepest_level(fE, vec)}"
        else:
            depth = deepest_level(fx, vec)
            holds = depth >= claim.d
            if claim.kind == "quotient" and holds:
                order = _class_order(vec, fx, claim.d)
                witness = f"class of order {order if order else 'inf'} in Γ^{claim.d}/Γ^{claim.d + 1}"
            elif depth < 0:
                witness = "not in K(X)"
            else:
                witness = f"deepest level {depth}"
        results.append(ClaimResult(claim, holds, witness))
    return results
