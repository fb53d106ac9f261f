"""Regression suite over every scenario, with expected values and their sources.

An item either passes, fails, or is a documented discrepancy (``xfail``): the
computation disagrees with a stated value in a way that has been analysed.
A documented item only counts as ``xfail`` while it reproduces the recorded
computed value exactly; if it starts to pass, or fails differently, it is a
failure, so the report never hides a change.
"""

from __future__ import annotations

import fnmatch
import itertools
import json
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from ..filtration import Filtration
from ..kmodel import IndexFunction, uniform_index
from .bounds import conic_bound_N, sb_bound_N
from .claims import (
    four_conics_claim_results,
    independent_classes,
    sb_lower_bound_classes,
    three_quadric_claim_results,
    three_sb_claim_results,
)
from .displays import all_displays
from .four_conics import FourConics, admissible_four_conics, four_conics_classify
from .keysb import keysb_sweep
from .models import Analysis, analyze_index, brauer_violations
from .quadrics import classify_quadric, three_quadric_configs, two_quadric_configs

Outcome = tuple[str, bool]  # (computed value as text, holds)


@dataclass(frozen=True)
class Scenario:
    name: str
    reference: str
    expected: str
    check: Callable[[], Outcome] = field(repr=False, compare=False)
    known_computed: str | None = None  # recorded value of a documented discrepancy
    known_issue: str = ""


@dataclass(frozen=True)
class ScenarioResult:
    name: str
    reference: str
    expected: str
    computed: str
    status: str  # pass | fail | xfail
    detail: str = ""
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def to_json(self) -> dict:
        out = {"name": self.name, "reference": self.reference, "expected": self.expected,
               "computed": self.computed, "status": self.status}
        if self.detail:
            out["detail"] = self.detail
        return out


def run_scenario(s: Scenario) -> ScenarioResult:
    start = time.perf_counter()
    try:
        computed, holds = s.check()
    except Exception as exc:  # failures are data
        computed, holds = f"error: {type(exc).__name__}: {exc}", False
    elapsed = time.perf_counter() - start
    detail = ""
    if s.known_computed is None:
        status = "pass" if holds else "fail"
    elif holds:
        status, detail = "fail", "documented discrepancy no longer reproduces"
    elif computed == s.known_computed:
        status, detail = "xfail", s.known_issue
    else:
        status, detail = "fail", f"documented discrepancy changed; recorded {s.known_computed}"
    return ScenarioResult(s.name, s.reference, s.expected, computed, status, detail, elapsed)


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _groups(analysis: Analysis) -> list[str]:
    return [q.torsion_str() for q in analysis.report.per_codim]


def _torsion_item(name, ref, idx_factory, expected: dict[int, str], **kw) -> Scenario:
    """Γ^{d/d+1} torsion at the listed codimensions, every other one trivial."""

    def check():
        analysis = analyze_index(idx_factory(), name)
        got = _groups(analysis)
        want = [expected.get(d, "0") for d in range(len(got))]
        return "[" + ", ".join(got) + "]", got == want

    shown = ", ".join(f"d={d}: {g}" for d, g in sorted(expected.items())) or "all trivial"
    return Scenario(name, ref, shown, check, **kw)


def two_conic_index(a: int, b: int, c: int) -> IndexFunction:
    return IndexFunction((2, 2), {(0, 0): 1, (1, 0): a, (0, 1): b, (1, 1): c})


def structure_problems(filt: Filtration) -> list[str]:
    """Nesting of the levels and vanishing beyond the dimension."""
    problems = []
    dim = filt.spec.dim
    for d in range(dim + 1):
        if not filt.level(d).contains_lattice(filt.level(d + 1)):
            problems.append(f"level {d + 1} not inside level {d}")
    if filt.level(dim + 1).rank:
        problems.append(f"level {dim + 1} is non-zero")
    if filt.level(0) != filt.model.lattice:
        problems.append("level 0 differs from the model lattice")
    return problems


# ---------------------------------------------------------------------------
# Scenario groups
# ---------------------------------------------------------------------------


def two_conic_scenarios() -> Iterator[Scenario]:
    for a, b, c in itertools.product((1, 2), (1, 2), (1, 2, 4)):
        if brauer_violations(two_conic_index(a, b, c)):
            continue
        yield _torsion_item(f"two-conics/a={a},b={b},c={c}", "two conics: CH^2 torsion trivial",
                            lambda a=a, b=b, c=c: two_conic_index(a, b, c), {})


def conic_scenarios() -> Iterator[Scenario]:
    yield _torsion_item("three-conics/generic", "three conics: M(C_3) = 2",
                        lambda: uniform_index((2,) * 3, 2), {2: "Z/2"})
    for n in (3, 4, 5):
        N = conic_bound_N(n)

        def check(n=n, N=N):
            t = analyze_index(uniform_index((2,) * n, 2)).torsion(2)
            return f"rank {len(t.divisors)}, exponent {max(t.divisors, default=1)}", \
                len(t.divisors) == N and set(t.divisors) <= {2}

        yield Scenario(f"n-conics/n={n}", "conic bound 2^n - (C(n,2) + n + 1)",
                       f"(Z/2)^{N} at d=2", check)


FOUR_CONIC_SPECIALS = (
    ("four-conics/all-2", FourConics((2,) * 6, (2,) * 4, 2), {2: "(Z/2)^5"},
     "four conics, |H2|=4, |G|=6, d=2"),
    ("four-conics/H4=4,G=0,d=4", FourConics((4,) * 6, (4,) * 4, 4), {2: "(Z/2)^5"},
     "four conics, |H4|=4, |G|=0, d=4"),
    ("four-conics/H4=4,G=0,d=8", FourConics((4,) * 6, (4,) * 4, 8), {2: "(Z/2)^4", 3: "Z/2"},
     "four conics, |H4|=4, |G|=0, d=8"),
    ("four-conics/H8=4,d=8", FourConics((4,) * 6, (8,) * 4, 8), {2: "Z/2"},
     "four conics, |H8|=4, d=8"),
    ("four-conics/H8=3,h=4,d=4", FourConics((4,) * 6, (4, 8, 8, 8), 4), {2: "(Z/2)^2"},
     "four conics, |H8|=3, h_i=4, d=4"),
    ("four-conics/d=16", FourConics((4,) * 6, (8,) * 4, 16), {},
     "four conics, d=16: trivial"),
)

# Table-trivial configurations where the computed Γ^{2/3} torsion is Z/2.
# The stated β2 bounds in these profiles are smaller than what the lemma's
# image generators give, so the table's triviality argument does not go through.
FOUR_CONIC_KNOWN = {
    "g=(12:2,13:2,14:2,23:2,24:4,34:4) h=(2,4,4,4) d=2",
    "g=(12:2,13:2,14:4,23:2,24:4,34:4) h=(2,4,4,2) d=2",
    "g=(12:2,13:2,14:4,23:2,24:4,34:4) h=(2,4,4,2) d=4",
    "g=(12:2,13:2,14:4,23:4,24:2,34:2) h=(2,4,4,2) d=4",
    "g=(12:2,13:4,14:4,23:4,24:4,34:2) h=(2,2,2,4) d=2",
    "g=(12:2,13:4,14:4,23:4,24:4,34:2) h=(2,2,4,4) d=2",
}


def four_conic_scenarios() -> Iterator[Scenario]:
    for name, c, expected, ref in FOUR_CONIC_SPECIALS:
        yield _torsion_item(name, ref, c.index_function, expected)
    for c in admissible_four_conics():
        label = c.label()

        def check(c=c):
            v = four_conics_classify(c)
            table = "Trivial" if v.table_trivial else "Nontrivial"
            return f"table {table}, Γ^{{2/3}} torsion {v.torsion.torsion_str()}", v.consistent

        known = label in FOUR_CONIC_KNOWN
        yield Scenario(f"four-conics/table/{label}", "four-conic triviality table",
                       "table Trivial implies trivial Γ^{2/3} torsion", check,
                       "table Trivial, Γ^{2/3} torsion Z/2" if known else None,
                       "β2 bound in this profile is below the lemma's image index" if known else "")


def sb_scenarios() -> Iterator[Scenario]:
    yield _torsion_item("two-sb/generic", "two SB surfaces: M(SB_2) = 3",
                        lambda: uniform_index((3, 3), 3), {2: "Z/3"})
    yield _torsion_item("three-sb/generic", "three SB surfaces: M(SB_3) = 3^8",
                        lambda: uniform_index((3, 3, 3), 3), {2: "(Z/3)^8", 3: "(Z/3)^2"},
                        known_computed="[0, 0, (Z/3)^7, (Z/3)^3, 0, 0, 0]",
                        known_issue="b123 + b'1 + b'2 + b'3 + d123 lies in Γ^3; "
                                    "only pairwise independence was checked")
    for n in (2, 3):
        N = sb_bound_N(n)

        def check(n=n, N=N):
            t = analyze_index(uniform_index((3,) * n, 3)).torsion(2)
            return f"(Z/3)^{len(t.divisors)}", len(t.divisors) == N and set(t.divisors) <= {3}

        known = {} if n == 2 else {"known_computed": "(Z/3)^7",
                                   "known_issue": "one relation among the lower-bound classes"}
        yield Scenario(f"sb-bound/n={n}", "SB bound 2^n + 4C(n,3) - (n+1)",
                       f"(Z/3)^{N} at d=2", check, **known)

    def independence():
        analysis = analyze_index(uniform_index((3, 3, 3), 3))
        rank, count = independent_classes(analysis, sb_lower_bound_classes(3), 2)
        return f"rank {rank} of {count}", rank == count

    yield Scenario("three-sb/lower-bound-classes", "lower-bound classes independent in Γ^{2/3}",
                   "rank 8 of 8", independence, "rank 7 of 8",
                   "the eight classes satisfy one relation modulo Γ^3")


def quadric_scenarios() -> Iterator[Scenario]:
    known = {  # flagged trivial, computed Z/2: the transfer bound holds for T, not Γ
        "TwoQuadricsBiquadratic e=(2,2) f=(2) d=2",
        "TwoQuadricsOneTrivialDisc e=(2,2) f=(2) d=2",
    }
    for cfg in two_quadric_configs():
        label = cfg.label()

        def check(cfg=cfg):
            v = classify_quadric(cfg)
            return f"flag {'Trivial' if v.flagged_trivial else 'open'}, Γ^{{2/3}} torsion " \
                   f"{v.torsion.torsion_str()}", v.consistent

        extra = {}
        if label in known:
            extra = {"known_computed": "flag Trivial, Γ^{2/3} torsion Z/2",
                     "known_issue": "the bound α4 <= d used for triviality holds for the "
                                    "topological filtration only"}
        yield Scenario(f"two-quadrics/{label}", "two quadric surfaces: triviality rule",
                       "flag Trivial implies trivial Γ^{2/3} torsion", check, **extra)

    from ..kmodel import QuadricConfig

    lower = QuadricConfig("TwoQuadricsBiquadratic", {"1": 2, "2": 2}, {"12": 2}, None, 4)

    def check_lower():
        t = classify_quadric(lower).torsion
        return t.torsion_str(), t.torsion_str() == "Z/2"

    yield Scenario("two-quadrics/lower-bound", "two biquadratic quadrics, e=f=2, d=4",
                   "Z/2", check_lower)
    for cfg in three_quadric_configs():
        def check(cfg=cfg):
            v = classify_quadric(cfg)
            return v.torsion.torsion_str(), v.within_bound

        yield Scenario(f"three-quadrics/{cfg.label()}", "three quadric surfaces: (Z/2)^7 bound",
                       "exponent 2, order <= 2^7", check)


def keysb_scenarios() -> Iterator[Scenario]:
    for p, n in itertools.product((3, 5), (2, 3)):
        def check(p=p, n=n):
            rows = list(keysb_sweep((p,), (n,)))
            bad = [r.instance.m for r in rows if not r.divisible]
            return f"{len(rows) - len(bad)}/{len(rows)} divisible", not bad

        yield Scenario(f"keysb/p={p},n={n}", "alternating coefficient sum divisible by p^2",
                       "all divisible", check)


def claim_scenarios() -> Iterator[Scenario]:
    def four_conics():
        counts = {"pass": 0, "unconfirmed": 0, "fail": 0}
        failing = []
        for c in admissible_four_conics():
            for r in four_conics_claim_results(c):
                counts[r.status] += 1
                if r.status == "fail":
                    failing.append(f"{c.label()} {r.claim.id}")
        text = ", ".join(f"{k} {v}" for k, v in counts.items())
        return text + (f"; first failure {failing[0]}" if failing else ""), not failing

    yield Scenario("claims/four-conic-lemma", "four-conic lemma, all admissible data",
                   "no failing claim", four_conics)
    for r in three_sb_claim_results(uniform_index((3, 3, 3), 3)):
        yield Scenario(f"claims/three-sb/{r.claim.id}", r.claim.reference,
                       f"{r.claim.kind} at d={r.claim.d}",
                       lambda r=r: (r.status + (f": {r.witness}" if r.witness else ""),
                                    r.status == "pass"))
    for cfg in three_quadric_configs():
        def check(cfg=cfg):
            results = three_quadric_claim_results(cfg)
            counts = {s: sum(r.status == s for r in results) for s in ("pass", "unconfirmed", "fail")}
            return ", ".join(f"{k} {v}" for k, v in counts.items()), counts["fail"] == 0

        yield Scenario(f"claims/three-quadrics/{cfg.label()}", "three-quadric lemma",
                       "no failing claim", check)


def display_scenarios() -> Iterator[Scenario]:
    for disp in all_displays():
        known = {}
        if disp.name == "150-identity (5)":
            known = {"known_computed": disp.exact,
                     "known_issue": "the combination equals three times the displayed value"}
        yield Scenario(f"displays/{disp.name}", disp.reference, disp.displayed,
                       lambda disp=disp: (disp.exact, disp.holds), **known)


def _structure_subjects() -> Iterator[tuple[str, Callable[[], Analysis]]]:
    for a, b, c in itertools.product((1, 2), (1, 2), (1, 2, 4)):
        if not brauer_violations(two_conic_index(a, b, c)):
            yield f"two conics {a},{b},{c}", lambda a=a, b=b, c=c: analyze_index(
                two_conic_index(a, b, c))
    for n in (3, 4, 5):
        yield f"{n} conics", lambda n=n: analyze_index(uniform_index((2,) * n, 2))
    for n in (2, 3):
        yield f"{n} SB surfaces", lambda n=n: analyze_index(uniform_index((3,) * n, 3))
    for c in admissible_four_conics():
        yield f"four conics {c.label()}", lambda c=c: four_conics_classify(c).analysis
    for cfg in itertools.chain(two_quadric_configs(), three_quadric_configs()):
        yield cfg.label(), lambda cfg=cfg: classify_quadric(cfg).analysis


def structure_scenarios() -> Iterator[Scenario]:
    def run(kind: str):
        def check():
            counts: dict[str, int] = {}
            bad = []
            for name, get in _structure_subjects():
                analysis = get()
                if kind == "alphalem":
                    status = analysis.report.alphalem
                    counts[status] = counts.get(status, 0) + 1
                    if status == "failed":
                        bad.append(name)
                elif kind == "gammatwo":
                    # analyses raise on a mismatch; "n/a" marks a split product
                    counts[analysis.gammatwo] = counts.get(analysis.gammatwo, 0) + 1
                else:
                    for filt in (analysis.fx, analysis.fE):
                        if filt is not None and structure_problems(filt):
                            bad.append(name)
                    counts["checked"] = counts.get("checked", 0) + 1
            text = ", ".join(f"{k} {v}" for k, v in sorted(counts.items()))
            return text + (f"; failing: {bad[:3]}" if bad else ""), not bad
        return check

    yield Scenario("structure/gammatwo", "Γ^d(X) = Γ^d(X_split) ∩ K(X) for d <= 2",
                   "equal on every scenario", run("gammatwo"))
    yield Scenario("structure/alphalem", "|⊕ torsion| · [K_E : K_X] = ∏ α_d",
                   "no failure where splitting-side quotients are torsion-free", run("alphalem"))
    yield Scenario("structure/nesting", "Γ^{d+1} ⊆ Γ^d and Γ^{dim+1} = 0",
                   "holds on every scenario", run("nesting"))


GROUPS: tuple[Callable[[], Iterable[Scenario]], ...] = (
    two_conic_scenarios,
    conic_scenarios,
    four_conic_scenarios,
    sb_scenarios,
    quadric_scenarios,
    keysb_scenarios,
    claim_scenarios,
    display_scenarios,
    structure_scenarios,
)


def all_scenarios() -> Iterator[Scenario]:
    for group in GROUPS:
        yield from group()


def run_suite(pattern: str | None = None) -> list[ScenarioResult]:
    """Run every scenario whose name matches the glob ``pattern``, in a fixed order."""
    return [run_scenario(s) for s in all_scenarios()
            if pattern is None or fnmatch.fnmatchcase(s.name, pattern)]


def suite_json(results: list[ScenarioResult]) -> str:
    summary = {k: sum(r.status == k for r in results) for k in ("pass", "xfail", "fail")}
    body = {"summary": summary, "items": [r.to_json() for r in results]}
    return json.dumps(body, indent=2, ensure_ascii=False) + "\n"


def suite_table(results: list[ScenarioResult]) -> str:
    lines = []
    for r in results:
        line = f"{r.status.upper():5}  {r.name}  [{r.reference}]  expected {r.expected}; got {r.computed}"
        if r.detail:
            line += f"  ({r.detail})"
        lines.append(line)
    summary = {k: sum(r.status == k for r in results) for k in ("pass", "xfail", "fail")}
    lines.append(", ".join(f"{v} {k}" for k, v in summary.items()))
    return "\n".join(lines) + "\n"


__all__ = [
    "Scenario", "ScenarioResult", "all_scenarios", "run_suite",
    "run_scenario", "structure_problems", "suite_json", "suite_table",
]
