"""Membership claim tables for the four-conic, three-SB-surface and three-quadric lemmas.

Each builder returns only the claims whose hypotheses hold for the given
index data.  Expressions use the notation of :mod:`ktorsion.shorthand`, so
``y124`` is ``y1*y2*y4`` and ``z12`` is ``x1*x2 - 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..filtration import Claim, ClaimResult, membership_suite, saturated_filtration
from ..kmodel import IndexFunction, QuadricConfig
from ..shorthand import evaluate
from .four_conics import CONICS, PAIRS, FourConics, K
from .models import Analysis, analyze_index, analyze_quadric


def y(*idx: int) -> str:
    return "y" + "".join(map(str, sorted(idx)))


def total(terms) -> str:
    return "(" + " + ".join(terms) + ")"


# ---------------------------------------------------------------------------
# Four conics
# ---------------------------------------------------------------------------

FOUR_CONIC_REF = "four-conic lemma"


def four_conics_claims(c: FourConics) -> list[Claim]:
    ref = FOUR_CONIC_REF
    G = c.G
    out: list[Claim] = []

    def add(cid, expr, kind, d, item):
        out.append(Claim(cid, expr, kind, d, f"{ref} ({item})"))

    all_pairs = total(y(*p) for p in PAIRS)
    all_triples = total(y(*t) for t in itertools.combinations(CONICS, 3))
    if c.d == 2:
        add("1:d=2", f"2*{all_pairs}", "image", 2, 1)
    for l in CONICS:
        if c.h[l - 1] != 2:
            continue
        i, j, k = (m for m in CONICS if m != l)
        add(f"1:h{l}=2", f"2*{total([y(i, j), y(i, k), y(j, k)])}", "image", 2, 1)
        add(f"eq:h{l}=2", f"2*{total([y(i, j, k), y(i, j), y(i, k), y(j, k)])}", "gamma", 2, 1)
        add(f"2:h{l}=2:a", f"4*{y(i, j, k)}", "image", 3, 2)
        add(f"2:h{l}=2:b", f"-4*{y(i, j, k)} + 4*{all_triples}", "image", 3, 2)
    for i, j in sorted(G):
        for k in CONICS:
            if k not in (i, j):
                add(f"2:g{i}{j}=2:{k}", f"4*{y(i, j, k)}", "image", 3, 2)
    for i in CONICS:
        others = [m for m in CONICS if m != i]
        for j, k in itertools.combinations(others, 2):
            if tuple(sorted((i, j))) in G and tuple(sorted((i, k))) in G:
                (l,) = set(others) - {j, k}
                for t in ((i, j, k), (i, j, l), (i, k, l)):
                    add(f"2:g{i}{j}=g{i}{k}=2:{''.join(map(str, t))}", f"4*{y(*t)}", "image", 3, 2)
    if (c.d == 2 or len(G) >= 4 or 2 in c.G_J()
            or any(K(i) <= G for i in CONICS)):
        for t in itertools.combinations(CONICS, 3):
            add(f"2:all:{''.join(map(str, t))}", f"4*{y(*t)}", "image", 3, 2)
    if c.d in (2, 4) or G or c.H(2):
        add("3:8", "8*y1234", "gamma", 4, 3)
    if 2 in c.G_J():
        add("3:4", "4*y1234", "gamma", 4, 3)
    return out


# ---------------------------------------------------------------------------
# Three Severi-Brauer surfaces
# ---------------------------------------------------------------------------

THREE_SB_REF = "three-SB lemma"


@dataclass(frozen=True)
class ThreeSBIndices:
    e: dict
    f: dict
    d: int
    g: dict

    @classmethod
    def from_index(cls, idx: IndexFunction) -> "ThreeSBIndices":
        if idx.degrees != (3, 3, 3):
            raise ValueError("three algebras of degree 3 expected")

        def at(exps):
            return idx(tuple(exps))

        e, f, g = {}, {}, {}
        for i in (1, 2, 3):
            j, k = (m for m in (1, 2, 3) if m != i)
            t = [0, 0, 0]
            t[j - 1] = t[k - 1] = 1
            e[i] = at(t)
            t[j - 1] = 2
            f[i] = at(t)
            t = [1, 1, 1]
            t[i - 1] = 2
            g[i] = at(t)
        return cls(e, f, at((1, 1, 1)), g)


def three_sb_claims(idx: IndexFunction) -> list[Claim]:
    s = ThreeSBIndices.from_index(idx)
    ref = THREE_SB_REF
    out: list[Claim] = []

    def add(cid, expr, kind, d, item):
        out.append(Claim(cid, expr, kind, d, f"{ref} ({item})"))

    mixed = total(f"y{m}^2*y{l}" for m in (1, 2, 3) for l in (1, 2, 3) if m != l)
    for m in (1, 2, 3):
        add(f"1:y{m}^2", f"3*y{m}^2", "gamma", 2, 1)
    for i in (1, 2, 3):
        j, k = (m for m in (1, 2, 3) if m != i)
        if s.e[i] == 3:
            add(f"1:e{i}:a", f"3*y{j}*y{k}", "gamma", 2, 1)
            add(f"1:e{i}:b", f"3*y{j}^2*y{k} + 3*y{j}*y{k}^2", "image", 3, 1)
        if s.f[i] == 3:
            add(f"2:f{i}", f"3*y{j}^2*y{k} - 3*y{j}*y{k}^2", "image", 3, 2)
        if s.g[i] == 3:
            for a in (j, k):
                add(f"4:g{i}:a{a}", f"3*{mixed} + 3*(y{i}*y{a}^2 + y{i}^2*y{a}) + 12*y123",
                    "image", 3, 4)
            add(f"4:g{i}:b", f"3*(y{j}*y{k} - y{i}*y{k} - y{i}*y{j})", "image", 2, 4)
    if s.d == 3:
        add("3:a", "3*(y12 + y13 + y23)", "image", 2, 3)
        add("3:b", f"6*y123 + 3*{mixed}", "image", 3, 3)
        add("3:c", "9*y1^2*y2^2*y3^2", "gamma", 6, 3)
    all_three = all(v == 3 for part in (s.e, s.f, s.g) for v in part.values())
    if all_three:
        add("5", "3*y1^2*y2^2*y3 - 3*y1^2*y2*y3^2", "gamma", 3, 5)
        if s.d == 3:
            add("6", "3*y1^2*y2^2*y3^2 - 6*y1^2*y2^2*y3", "gamma", 3, 6)
    return out


def sb_lower_bound_classes(n: int = 3) -> dict[str, str]:
    """The classes 3y_p^2y_q^2, 3y_py_qy_r, 3y_p^2y_qy_r and 3(y_{i_1}..y_{i_s})^2."""
    out = {}
    idx = range(1, n + 1)
    for p, q in itertools.combinations(idx, 2):
        out[f"b{p}{q}"] = f"3*y{p}^2*y{q}^2"
    for t in itertools.combinations(idx, 3):
        out["b" + "".join(map(str, t))] = "3*" + y(*t)
        for p in t:
            q, r = (m for m in t if m != p)
            out[f"b'{p}{q}{r}"] = f"3*y{p}^2*y{q}*y{r}"
    for s_ in range(3, n + 1):
        for t in itertools.combinations(idx, s_):
            out["d" + "".join(map(str, t))] = "3*" + "*".join(f"y{m}^2" for m in t)
    return out


# ---------------------------------------------------------------------------
# Three quadric surfaces
# ---------------------------------------------------------------------------

THREE_QUADRIC_REF = "three-quadric lemma"
_PAIRS6 = ((1, 2), (3, 4), (5, 6))


def _pair_key(p) -> str:
    return "".join(map(str, sorted(p)))


def _labelings():
    """Ordered choices of ((p,q),(r,s),(t,u)) covering both orientations of every pair."""
    for order in itertools.permutations(_PAIRS6):
        for flips in itertools.product((False, True), repeat=3):
            yield tuple(pair[::-1] if fl else pair for pair, fl in zip(order, flips))


def three_quadric_claims(cfg: QuadricConfig) -> list[Claim]:
    if not cfg.is_three:
        raise ValueError("three-quadric claims need a three-quadric configuration")
    ref = THREE_QUADRIC_REF
    e = {k: cfg.e[k] for k in cfg.e}
    f = {k: cfg.f[k] for k in cfg.f}
    out: dict[str, Claim] = {}

    def add(cid, expr, kind, d, item, assumed=False):
        if cid not in out:
            out[cid] = Claim(cid, expr, kind, d, f"{ref} ({item})", assumed)

    for (p, q), (r, s), (t, u) in _labelings():
        kpq, krs, ktu = _pair_key((p, q)), _pair_key((r, s)), _pair_key((t, u))
        if f[kpq] == e[krs]:
            ers = e[krs]
            add(f"1:f{kpq}=e{krs}:a", f"{ers}*{y(r, s, t, u)}", "gamma", 3, 1)
            add(f"1:f{kpq}=e{krs}:b", f"{ers}*{y(r, s, t, u)}*z{kpq}", "gamma", 4, 1)
            add(f"1:f{kpq}=e{krs}:c", f"{e[kpq] * ers}*y123456", "gamma", 5, 1)
        if cfg.g == 1:
            sp = _pair_key((p, r)) + _pair_key((q, s))
            add(f"2:{sp}{t}{u}:a",
                f"{y(p, r)} + {y(q, s)} + {y(p, t)} + {y(q, u)} + {y(r, t)} + {y(s, u)}"
                f" - {y(p, q)} - {y(r, s)} - {y(t, u)}", "image", 2, 2)
            add(f"2:{p}{q}{r}{s}{t}{u}:b",
                f"(y{r} + y{s})*({y(p, t)} + {y(q, u)} - {y(p, q)} - {y(t, u)})"
                f" + {y(r, s)}*(y{p} + y{q} + y{t} + y{u})", "image", 3, 2)
            add(f"2:{p}{q}{r}{s}{t}{u}:c",
                f"(y{p} + y{q})*({y(r, t)} + {y(s, u)} - {y(r, s)} - {y(t, u)})"
                f" + {y(p, q)}*(y{r} + y{s} + y{t} + y{u})", "image", 3, 2)
        if f[ktu] == 1:
            add(f"3:{p}{q}{r}{s}:a", f"{y(p, r)} + {y(q, s)} - {y(p, q)} - {y(r, s)}",
                "gamma", 2, 3)
            add(f"3:{p}{q}{r}{s}:b", f"{y(p, q)}*(y{r} + y{s}) - {y(r, s)}*(y{p} + y{q})",
                "image", 3, 3)
            add(f"3:{p}{q}{r}{s}{t}{u}:c",
                f"{y(p, q)}*({y(r, t)} + {y(s, u)} + {y(r, u)} + {y(s, t)})"
                f" - {y(r, s)}*({y(p, t)} + {y(q, u)} + {y(p, u)} + {y(q, t)})", "image", 4, 3)
            add(f"3:{p}{q}{r}{s}{t}{u}:d",
                f"{y(p, q, t, u)} + {y(r, s, t, u)} + {y(t, u)}*({y(p, r)} + {y(q, s)})"
                f" + {y(t, u)}*({y(p, s)} + {y(q, r)})", "image", 4, 3, assumed=True)
    return list(out.values())


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------


def run_claims(analysis: Analysis, claims: list[Claim]) -> list[ClaimResult]:
    if analysis.fx is None:
        raise ValueError(f"{analysis.name}: no filtration to test claims against")
    return membership_suite(analysis.fx, claims, analysis.fE)


def four_conics_claim_results(c: FourConics) -> list[ClaimResult]:
    return run_claims(analyze_index(c.index_function(), c.label(), normalize=False),
                      four_conics_claims(c))


def three_sb_claim_results(idx: IndexFunction) -> list[ClaimResult]:
    return run_claims(analyze_index(idx, normalize=False), three_sb_claims(idx))


def three_quadric_claim_results(cfg: QuadricConfig) -> list[ClaimResult]:
    """Image claims are read against the topological filtration of X_E."""
    analysis = analyze_quadric(cfg)
    return membership_suite(analysis.fx, three_quadric_claims(cfg),
                            saturated_filtration(analysis.fE.model))


def independent_classes(analysis: Analysis, named: dict[str, str], d: int) -> tuple[int, int]:
    """Rank of the span of the named classes in Γ^{d/d+1} ⊗ F_p versus their number.

    The classes are assumed to be killed by the prime p = 3 (all of them lie
    in 3·K); the rank is computed by deciding which F_3-combinations land in
    Γ^{d+1}, exhaustively over the combinations.
    """
    fx = analysis.fx
    spec = fx.spec
    vecs = [evaluate(expr, spec).to_vector() for expr in named.values()]
    below = fx.level(d + 1)
    kernel = 0
    for coeffs in itertools.product(range(3), repeat=len(vecs)):
        combo = [sum(c * v[i] for c, v in zip(coeffs, vecs)) for i in range(spec.rank)]
        if combo in below:
            kernel += 1
    k = 0  # the kernel has 3^k elements
    while 3**k < kernel:
        k += 1
    return len(vecs) - k, len(vecs)
