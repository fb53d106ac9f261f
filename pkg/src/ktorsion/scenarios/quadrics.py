"""Enumeration of quadric-surface index data and the expected triviality flags."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from ..intlattice import ElementaryDivisors
from ..kmodel import QuadricConfig
from .models import Analysis, analyze_quadric, quadric_violations

TWO_QUADRIC_CASES = ("TwoQuadricsBiquadratic", "TwoQuadricsSameField", "TwoQuadricsOneTrivialDisc")
THREE_KEYS = ("12", "34", "56")
THREE_QUADRIC_BOUND = 7  # exponent of 2


def two_quadric_configs(case: str | None = None) -> Iterator[QuadricConfig]:
    """Every admissible (e1, e2, f, d) for the given case, or for all cases."""
    for c in ([case] if case else TWO_QUADRIC_CASES):
        for e1, e2, f, d in itertools.product((1, 2), (1, 2), (1, 2, 4), (2, 4)):
            cfg = QuadricConfig(c, {"1": e1, "2": e2}, {"12": f}, None, d)
            if not quadric_violations(cfg):
                yield cfg


def _permute_three(cfg: QuadricConfig, perm: tuple[int, int, int]) -> QuadricConfig:
    keys = [THREE_KEYS[i] for i in perm]
    e = {k: cfg.e[src] for k, src in zip(THREE_KEYS, keys)}
    f = {k: cfg.f[src] for k, src in zip(THREE_KEYS, keys)}
    return QuadricConfig(cfg.case, e, f, cfg.g, cfg.d)


def _sort_key(cfg: QuadricConfig) -> tuple:
    return tuple(cfg.e.values()), tuple(cfg.f.values()), cfg.g, cfg.d


def three_quadric_configs(canonical_only: bool = True) -> Iterator[QuadricConfig]:
    """Admissible index data for three quadrics with a common non-trivial discriminant.

    With ``canonical_only`` one representative per relabelling of the quadrics is kept.
    """
    seen = set()
    for e in itertools.product((1, 2), repeat=3):
        for f in itertools.product((1, 2, 4), repeat=3):
            for g, d in itertools.product((1, 2, 4, 8), (2, 4, 8)):
                cfg = QuadricConfig("ThreeQuadricsSameDisc", dict(zip(THREE_KEYS, e)),
                                    dict(zip(THREE_KEYS, f)), g, d)
                if quadric_violations(cfg):
                    continue
                if canonical_only:
                    rep = min((_permute_three(cfg, p) for p in itertools.permutations(range(3))),
                              key=_sort_key)
                    if _sort_key(rep) in seen:
                        continue
                    seen.add(_sort_key(rep))
                    cfg = rep
                yield cfg


def two_quadric_flag(cfg: QuadricConfig) -> tuple[bool, str]:
    """Whether the two-quadric theorem declares the CH^2 torsion trivial."""
    f, d = cfg.f["12"], cfg.d
    if cfg.case == "TwoQuadricsSameField":
        return True, "same discriminant field: always trivial"
    if cfg.case == "TwoQuadricsBiquadratic":
        return (f == 4 or (f == 2 and d == 2)), "f=4 or f=d=2"
    return (f in (1, 4) or (f == 2 and d == 2)), "f=1 or f=4 or f=d=2"


@dataclass(frozen=True)
class QuadricVerdict:
    config: QuadricConfig
    analysis: Analysis
    flagged_trivial: bool | None
    rule: str

    @property
    def torsion(self) -> ElementaryDivisors:
        return self.analysis.torsion(2)

    @property
    def consistent(self) -> bool:
        """A trivial flag is matched by trivial computed Γ^{2/3} torsion."""
        return not (self.flagged_trivial and self.torsion.divisors)

    @property
    def within_bound(self) -> bool:
        """Three quadrics: exponent at most 2 and order at most 2^7."""
        divs = self.torsion.divisors
        return all(v == 2 for v in divs) and len(divs) <= THREE_QUADRIC_BOUND

    def to_json(self) -> dict:
        out = {"config": self.config.to_json(),
               "gamma23_torsion": list(self.torsion.divisors),
               "torsion_by_codim": [q.torsion_str() for q in self.analysis.report.per_codim],
               "alphalem": self.analysis.report.alphalem}
        if self.flagged_trivial is not None:
            out.update(theorem="Trivial" if self.flagged_trivial else "open", rule=self.rule,
                       consistent=self.consistent)
        else:
            out["within_bound"] = self.within_bound
        return out


def classify_quadric(cfg: QuadricConfig) -> QuadricVerdict:
    analysis = analyze_quadric(cfg)
    if cfg.is_three:
        return QuadricVerdict(cfg, analysis, None, "(Z/2)^7 bound")
    flag, rule = two_quadric_flag(cfg)
    return QuadricVerdict(cfg, analysis, flag, rule)


def _limited(it, limit):
    return it if limit is None else itertools.islice(it, limit)


def enumerate_two_quadrics(limit: int | None = None) -> Iterator[QuadricVerdict]:
    return map(classify_quadric, _limited(two_quadric_configs(), limit))


def enumerate_three_quadrics(limit: int | None = None) -> Iterator[QuadricVerdict]:
    return map(classify_quadric, _limited(three_quadric_configs(), limit))
