"""Products of four conics: derived index quantities and the triviality table.

Conics are numbered 1..4.  ``g[ij]`` is the index of ``Q_i ⊗ Q_j``,
``h[l]`` the index of the product of the three algebras other than ``Q_l``,
and ``d`` the index of the product of all four.  The derived sets are

* ``H_m = {i : h_i = m}``;
* ``G = {ij : g_ij = 2}``;
* the three perfect matchings ``J_1 = {12, 34}``, ``J_2 = {13, 24}``, ``J_3 = {14, 23}``;
* ``K_i`` = the three pairs avoiding ``i`` and ``L_i`` the three pairs containing it;
* ``H2' = {i in H_2 : K_i ⊆ G}``;
* ``G_n`` = the pairs of ``G`` lying in ``L_i`` for every ``i`` in ``H_n``.

``G_n`` is built from ``L_i``: the table's rules that use it (for instance
``|G| = |G_2| = |H_2| = 1`` forcing ``g_il = 2`` for the ``i`` in ``H_2``)
only make sense that way.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from ..intlattice import ElementaryDivisors
from ..kmodel import IndexFunction
from .models import Analysis, InadmissibleConfig, analyze_index, brauer_violations

CONICS = (1, 2, 3, 4)
PAIRS = tuple(itertools.combinations(CONICS, 2))
MATCHINGS = (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3)))


def pair_key(pair: tuple[int, int]) -> str:
    return "".join(map(str, sorted(pair)))


def K(i: int) -> frozenset[tuple[int, int]]:
    return frozenset(p for p in PAIRS if i not in p)


def L(i: int) -> frozenset[tuple[int, int]]:
    return frozenset(p for p in PAIRS if i in p)


@dataclass(frozen=True)
class FourConics:
    g: tuple[int, ...]  # in the order of PAIRS
    h: tuple[int, ...]  # h[l - 1]
    d: int

    def __post_init__(self):
        if len(self.g) != 6 or len(self.h) != 4:
            raise ValueError("need six pair indices and four triple indices")

    # construction ---------------------------------------------------------

    @classmethod
    def from_index(cls, idx: IndexFunction) -> "FourConics":
        if idx.degrees != (2, 2, 2, 2):
            raise InadmissibleConfig([f"four quaternion algebras expected, got degrees {idx.degrees}"])

        def at(conics):
            return idx(tuple(1 if c in conics else 0 for c in CONICS))

        singles = [at((c,)) for c in CONICS]
        if singles != [2, 2, 2, 2]:
            raise InadmissibleConfig([f"every conic must be non-split, got {singles}"])
        g = tuple(at(p) for p in PAIRS)
        h = tuple(at(tuple(c for c in CONICS if c != l)) for l in CONICS)
        return cls(g, h, at(CONICS))

    def ind(self, subset) -> int:
        s = tuple(sorted(subset))
        if not s:
            return 1
        if len(s) == 1:
            return 2
        if len(s) == 2:
            return self.g[PAIRS.index(s)]
        if len(s) == 3:
            (l,) = set(CONICS) - set(s)
            return self.h[l - 1]
        return self.d

    def index_function(self) -> IndexFunction:
        rule = lambda t: self.ind([c for c, x in zip(CONICS, t) if x])
        return IndexFunction.from_rule((2, 2, 2, 2), rule, ("four conics",))

    def violations(self) -> list[str]:
        problems = [f"{name} must be in {{2,4,8,16}}, got {v}"
                    for name, v in self._named() if v not in (2, 4, 8, 16)]
        return problems + brauer_violations(self.index_function())

    def _named(self):
        yield from ((f"g{pair_key(p)}", v) for p, v in zip(PAIRS, self.g))
        yield from ((f"h{l}", v) for l, v in zip(CONICS, self.h))
        yield "d", self.d

    def relabel(self, perm: tuple[int, ...]) -> "FourConics":
        """Conic ``c`` of the result is conic ``perm[c - 1]`` of ``self``."""
        g = tuple(self.ind((perm[a - 1], perm[b - 1])) for a, b in PAIRS)
        h = tuple(self.ind([perm[c - 1] for c in CONICS if c != l]) for l in CONICS)
        return FourConics(g, h, self.d)

    def canonical(self) -> "FourConics":
        return min((self.relabel(p) for p in itertools.permutations(CONICS)),
                   key=lambda c: (c.g, c.h))

    def label(self) -> str:
        g = ",".join(f"{pair_key(p)}:{v}" for p, v in zip(PAIRS, self.g))
        h = ",".join(map(str, self.h))
        return f"g=({g}) h=({h}) d={self.d}"

    def to_json(self) -> dict:
        return {"g": {pair_key(p): v for p, v in zip(PAIRS, self.g)},
                "h": {str(l): v for l, v in zip(CONICS, self.h)}, "d": self.d}

    # derived quantities ---------------------------------------------------

    def H(self, m: int) -> frozenset[int]:
        return frozenset(l for l, v in zip(CONICS, self.h) if v == m)

    @property
    def G(self) -> frozenset[tuple[int, int]]:
        return frozenset(p for p, v in zip(PAIRS, self.g) if v == 2)

    def G_J(self) -> list[int]:
        """``|G ∩ J_m|`` for m = 1, 2, 3."""
        return [len(self.G & set(m)) for m in MATCHINGS]

    def G_K(self) -> list[int]:
        """``|G ∩ K_i|`` for i = 1..4."""
        return [len(self.G & K(i)) for i in CONICS]

    def G_L(self) -> list[int]:
        return [len(self.G & L(i)) for i in CONICS]

    @property
    def H2_prime(self) -> frozenset[int]:
        return frozenset(i for i in self.H(2) if K(i) <= self.G)

    def G_n(self, n: int) -> frozenset[tuple[int, int]]:
        out = set(self.G)
        for i in self.H(n):
            out &= L(i)
        return frozenset(out)


def table_verdict(c: FourConics) -> tuple[bool, str]:
    """Whether the condition table declares the CH^2 torsion trivial, and which rule fired.

    Each rule is read inside the case of the ``h`` profile where it is stated.
    ``|G| >= |H2||H4| = 2`` is read as ``|H2|*|H4| = 2`` and ``|G| >= 2``.
    """
    h2, h4, h8 = len(c.H(2)), len(c.H(4)), len(c.H(8))
    G = len(c.G)
    gj2 = 2 in c.G_J()
    gk3 = 3 in c.G_K()
    h2p = len(c.H2_prime)
    d = c.d
    if d == 16:
        return True, "d=16"
    if h8 >= 3:
        return (h2 == 1 and h8 == 3), "H8>=3: |H2|=1, |H8|=3"
    if h8 == 2:
        hit = h2 == 2 or (G == 1 and h2 == 1) or (G == 1 and h2 == 0 and d == 8)
        return hit, "H8=2: |H2|=2 or |G|=|H2|=1 or |G|=1,|H2|=0,d=8"
    if h8 == 1:
        prod = h2 * h4
        hit = ((G >= 2 and h2 == 0 and d == 8) or (prod == 2 and G >= 2)
               or (prod == 2 and G == 1 and len(c.G_n(2)) == 1) or h2 == 3)
        return hit, "H8=1: |G|>=2,|H2|=0,d=8 or |G|>=|H2||H4|=2 or |H2||H4|=2,|G|=|G2|=1 or |H2|=3"
    if h4 == 4:
        hit = ((d == 2 and G != 6 and gj2) or (d == 4 and gj2) or (d == 8 and gk3))
        return hit, "H4=4: d=2,|G|!=6,|G∩Jm|=2 or d=4,|G∩Jm|=2 or d=8,|G∩Ki|=3"
    if h2 == 4:
        return False, "H2=4: never trivial"
    if h2 == 3 and h4 == 1:
        hit = (G == 2 and gj2) or (G == 3 and gj2 and d == 4)
        return hit, "H2=3,H4=1: |G|=2,|G∩Jm|=2 or |G|=3,|G∩Jm|=2,d=4"
    if h2 == 2 and h4 == 2:
        hit = ((G == 2 and gj2) or (G == 3 and gk3) or (G == 4 and h2p == 0 and d == 4))
        return hit, "H2=2,H4=2: |G|=|G∩Jm|=2 or |G|=|G∩Ki|=3 or |G|=4,|H2'|=0,d=4"
    if h2 == 1 and h4 == 3:
        hit = ((2 <= G <= 3 and gj2) or (G == 4 and h2p == 0) or (G == 5 and h2p == 0 and d == 4))
        return hit, "H2=1,H4=3: 2<=|G|<=3,|G∩Jm|=2 or |G|=4,|H2'|=0 or |G|=5,|H2'|=0,d=4"
    raise AssertionError(f"uncovered h profile {(h2, h4, h8)}")


@dataclass(frozen=True)
class FourConicsVerdict:
    config: FourConics
    table_trivial: bool
    rule: str
    analysis: Analysis

    @property
    def torsion(self) -> ElementaryDivisors:
        return self.analysis.torsion(2)

    @property
    def consistent(self) -> bool:
        """A computed non-trivial Γ^{2/3} torsion never meets a table-trivial verdict."""
        return not (self.table_trivial and self.torsion.divisors)

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "table": "Trivial" if self.table_trivial else "Nontrivial",
            "rule": self.rule,
            "gamma23_torsion": list(self.torsion.divisors),
            "torsion_by_codim": [q.torsion_str() for q in self.analysis.report.per_codim],
            "consistent": self.consistent,
        }


def four_conics_classify(idx: IndexFunction | FourConics) -> FourConicsVerdict:
    c = idx if isinstance(idx, FourConics) else FourConics.from_index(idx)
    problems = c.violations()
    if problems:
        raise InadmissibleConfig(problems)
    trivial, rule = table_verdict(c)
    analysis = analyze_index(c.index_function(), f"four conics {c.label()}")
    return FourConicsVerdict(c, trivial, rule, analysis)


def _submultiplicative(values: list[int]) -> bool:
    """``values[a ^ b] <= values[a] * values[b]`` over the group (Z/2)^4 as bitmasks."""
    for a in range(1, 16):
        va = values[a]
        for b in range(a + 1, 16):
            if values[a ^ b] > va * values[b]:
                return False
    return True


def admissible_four_conics(canonical_only: bool = True) -> Iterator[FourConics]:
    """Admissible index data with every index >= 2, one per relabelling class by default."""
    masks = {frozenset(c for c in CONICS if m >> (c - 1) & 1): m for m in range(16)}
    seen = set()
    for g in itertools.product((2, 4), repeat=6):
        for h in itertools.product((2, 4, 8), repeat=4):
            for d in (2, 4, 8, 16):
                c = FourConics(g, h, d)
                values = [0] * 16
                for subset, m in masks.items():
                    values[m] = c.ind(subset)
                if not _submultiplicative(values):
                    continue
                if canonical_only:
                    c = c.canonical()
                    if c in seen:
                        continue
                    seen.add(c)
                yield c


def enumerate_four_conics(limit: int | None = None) -> Iterator[FourConicsVerdict]:
    for k, c in enumerate(admissible_four_conics()):
        if limit is not None and k >= limit:
            return
        yield four_conics_classify(c)
