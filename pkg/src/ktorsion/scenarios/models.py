"""Running models end to end, with caching and admissibility checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from functools import lru_cache

from ..filtration import Filtration, TorsionReport, build_gamma, check_gammatwo, torsion_report
from ..intlattice import ElementaryDivisors
from ..truncring import monomial_key
from ..kmodel import (
    IndexFunction,
    QuadricConfig,
    normalize_config,
    quillen_generators,
    weil_generators,
)

GENERIC_NOTE = "for the generic variety with this index data, Γ^{2/3} torsion is the torsion of CH^2"


class InadmissibleConfig(ValueError):
    """Index data violating a necessary Brauer-class constraint."""

    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


@dataclass(frozen=True, eq=False)
class Analysis:
    """A torsion report together with the filtrations it came from."""

    name: str
    report: TorsionReport
    fx: Filtration | None
    fE: Filtration | None
    gammatwo: str

    def torsion(self, d: int) -> ElementaryDivisors:
        if d < len(self.report.per_codim):
            return self.report.per_codim[d]
        return ElementaryDivisors((), 0)

    def renamed(self, name: str) -> "Analysis":
        return replace(self, name=name, report=replace(self.report, name=name))


# ---------------------------------------------------------------------------
# Admissibility
# ---------------------------------------------------------------------------


def brauer_violations(idx: IndexFunction) -> list[str]:
    """Necessary conditions on indices of a subgroup of the Brauer group.

    Opposite algebras have equal index, and ``ind(AB) <= ind(A) ind(B)``; the
    lower bound ``ind(AB) >= ind(A)/ind(B)`` follows from these two.
    """
    problems = []
    tuples = idx.tuples()
    for s in tuples:
        neg = tuple(-x for x in s)
        if idx(neg) != idx(s):
            problems.append(f"ind{s} != ind{tuple(x % d for x, d in zip(neg, idx.degrees))}")
    for s, t in itertools.combinations_with_replacement(tuples, 2):
        u = tuple((a + b) % d for a, b, d in zip(s, t, idx.degrees))
        if idx(u) > idx(s) * idx(t):
            problems.append(f"ind{u}={idx(u)} exceeds ind{s}*ind{t}={idx(s) * idx(t)}")
    return problems


def quadric_l_index(cfg: QuadricConfig) -> IndexFunction:
    """Indices over the discriminant field as a function on the group of the algebras."""
    if cfg.is_three:
        e, f = cfg.e, cfg.f
        table = {
            (0, 0, 0): 1, (1, 0, 0): e["12"], (0, 1, 0): e["34"], (0, 0, 1): e["56"],
            (0, 1, 1): f["12"], (1, 0, 1): f["34"], (1, 1, 0): f["56"], (1, 1, 1): cfg.g,
        }
        return IndexFunction((2, 2, 2), table)
    table = {(0, 0): 1, (1, 0): cfg.e["1"], (0, 1): cfg.e["2"], (1, 1): cfg.f["12"]}
    return IndexFunction((2, 2), table)


def splitting_degrees(cfg: QuadricConfig) -> tuple[int, ...]:
    """Degrees ``d`` of the splitting field chosen for this index data."""
    e = list(cfg.e.values())
    if not cfg.is_three:
        f = cfg.f["12"]
        if min(e) == 1 or f == 1:
            return (2,)
        return (4,) if f == 4 else (2, 4)
    twos = [k for k, v in cfg.e.items() if v == 2]
    if len(twos) == 1:
        return (2,)
    if len(twos) == 2:
        (other,) = set(cfg.e) - set(twos)
        f = cfg.f[other]
        return (4,) if f == 4 else (2,) if f == 1 else (2, 4)
    if sum(v == 1 for v in cfg.f.values()) >= 2:
        return (2,)
    # the index over the base field is g or 2g
    return tuple(sorted({8 if h == 8 else 4 for h in (cfg.g, 2 * cfg.g) if h <= 8}))


def quadric_violations(cfg: QuadricConfig) -> list[str]:
    problems = brauer_violations(quadric_l_index(cfg))
    if max(cfg.e.values()) < 2:
        problems.append("every algebra splits over the discriminant field")
    if cfg.d not in splitting_degrees(cfg):
        problems.append(f"d={cfg.d} is not a splitting degree for this data "
                        f"(allowed {list(splitting_degrees(cfg))})")
    return problems


# ---------------------------------------------------------------------------
# Analyses
# ---------------------------------------------------------------------------


def _point_analysis(name: str) -> Analysis:
    report = TorsionReport(name, (ElementaryDivisors((), 1),), 1, (1,), "verified",
                           note="every factor is split")
    return Analysis(name, report, None, None, "n/a")


def _index_key(idx: IndexFunction) -> tuple:
    return idx.degrees, tuple(idx.table[t] for t in idx.tuples())


@lru_cache(maxsize=None)
def _analyze_key(key: tuple) -> Analysis:
    degrees, values = key
    tuples = sorted(itertools.product(*(range(d) for d in degrees)), key=monomial_key)
    idx = IndexFunction(degrees, dict(zip(tuples, values)))
    split, twisted = quillen_generators(idx)
    fE = build_gamma(split)
    fx = build_gamma(twisted)
    check_gammatwo(fx, fE)
    report = torsion_report(fx, fE, note=GENERIC_NOTE)
    return Analysis("", report, fx, fE, "verified")


def analyze_index(idx: IndexFunction, name: str = "", normalize: bool = True) -> Analysis:
    """Torsion report of a product of Severi-Brauer varieties."""
    if normalize:
        idx = normalize_config(idx)
    name = name or "index data " + ",".join(map(str, idx.degrees))
    if idx.n == 0:
        return _point_analysis(name)
    return _analyze_key(_index_key(idx)).renamed(name)


@lru_cache(maxsize=None)
def quadric_sides(case: str) -> tuple[Filtration, Filtration]:
    """Filtrations of the fully split model (levels <= 2) and of the orbit-sum model."""
    if case == "ThreeQuadricsSameDisc":
        probe = QuadricConfig(case, {"12": 2, "34": 2, "56": 2}, {"12": 2, "34": 2, "56": 2}, 2, 4)
    else:
        probe = QuadricConfig(case, {"1": 2, "2": 2}, {"12": 2}, None, 4)
    full, over_e, _ = weil_generators(probe)
    return build_gamma(full, depth=2), build_gamma(over_e)


@lru_cache(maxsize=None)
def _analyze_quadric_key(case: str, e: tuple, f: tuple, g) -> Analysis:
    keys_e = ("12", "34", "56") if case == "ThreeQuadricsSameDisc" else ("1", "2")
    keys_f = ("12", "34", "56") if case == "ThreeQuadricsSameDisc" else ("12",)
    cfg = QuadricConfig(case, dict(zip(keys_e, e)), dict(zip(keys_f, f)), g,
                        4 if g is None or g < 8 else 8)
    f_split, fE = quadric_sides(case)
    _, _, twisted = weil_generators(cfg)
    fx = build_gamma(twisted)
    check_gammatwo(fx, f_split)
    report = torsion_report(fx, fE, note=GENERIC_NOTE)
    return Analysis("", report, fx, fE, "verified")


def analyze_quadric(cfg: QuadricConfig, check: bool = True) -> Analysis:
    """Torsion report of a product of quadric surfaces.

    The splitting degree ``d`` does not enter the lattices, so results are
    shared between configurations differing only in ``d``.
    """
    if check:
        problems = quadric_violations(cfg)
        if problems:
            raise InadmissibleConfig(problems)
    analysis = _analyze_quadric_key(cfg.case, tuple(cfg.e.values()), tuple(cfg.f.values()), cfg.g)
    return analysis.renamed(cfg.label())
