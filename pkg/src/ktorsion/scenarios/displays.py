"""Closed forms of Chern classes quoted for two biquadratic quadrics and for
three SB surfaces, checked against exact ring values."""

from __future__ import annotations

from dataclasses import dataclass

from ..chern import Discrepancy, chern_class
from ..kmodel import KGenerator
from ..shorthand import evaluate
from ..truncring import RingSpec, TruncPoly, render

QUADRIC_SPEC = RingSpec((2, 2, 2, 2))


@dataclass(frozen=True)
class DisplayCheck:
    name: str
    displayed: str
    exact: str
    holds: bool
    reference: str

    def discrepancy(self) -> Discrepancy | None:
        if self.holds:
            return None
        return Discrepancy(self.name, self.displayed, self.exact, "see exact value")


def _gen(mult: int, *monos: str) -> KGenerator:
    def exps(m):
        return tuple(1 if str(i) in m else 0 for i in range(1, 5))

    return KGenerator(mult, tuple(exps(m) for m in monos))


def _c(gen: KGenerator, j: int) -> TruncPoly:
    return chern_class(gen, QUADRIC_SPEC, j)


def quadric_bindings() -> dict[str, TruncPoly]:
    ev = lambda e: evaluate(e, QUADRIC_SPEC)
    return {"u": ev("y123 + y124"), "v": ev("y134 + y234"), "zp": ev("(y1 + y2)*(y3 + y4)")}


def _eq(name, value: TruncPoly, displayed: str, ref: str, mod: int | None = None) -> DisplayCheck:
    if mod is None:
        target = evaluate(displayed, QUADRIC_SPEC, quadric_bindings())
        holds = value == target
    else:
        holds = all(c % mod == 0 for c in value.terms.values())
        displayed = f"0 mod {mod}"
    return DisplayCheck(name, displayed, render(value), holds, ref)


def quadric_displays() -> list[DisplayCheck]:
    """Chern classes of the biquadratic basis with ``e1 = e2 = f = 2``."""
    ref1, ref2, ref3 = "codimension-one classes", "classes of z", "classes of w"
    out = []
    two_sum = {i: _gen(2, f"{2 * i - 1}", f"{2 * i}") for i in (1, 2)}
    line = {i: _gen(1, f"{2 * i - 1}{2 * i}") for i in (1, 2)}
    for i in (1, 2):
        a, b = 2 * i - 1, 2 * i
        out.append(_eq(f"c1(2(x{a}+x{b}))", _c(two_sum[i], 1), f"2*(y{a} + y{b})", ref1))
        out.append(_eq(f"c2(2(x{a}+x{b}))", _c(two_sum[i], 2), f"4*y{a}{b}", ref1))
        out.append(_eq(f"c1(x{a}{b})^2", _c(line[i], 1) ** 2, f"2*y{a}{b}", ref1))
        out.append(_eq(f"c1(x{a}{b})^3", _c(line[i], 1) ** 3, "0", ref1))
        for j in (3, 4):
            out.append(_eq(f"c{j}(2(x{a}+x{b}))", _c(two_sum[i], j), "0", ref1))

    z = _gen(1, "13", "14", "23", "24")
    z2 = _gen(2, "13", "14", "23", "24")
    shown = {1: "2*(y1 + y2 + y3 + y4) + zp",
             2: "2*y1234 + 3*zp + 4*(u + v + y12 + y34)",
             3: "4*(u + v + 3*y1234)",
             4: "2*y1234"}
    for j, text in shown.items():
        out.append(_eq(f"c{j}(z)", _c(z, j), text, ref2))
    out.append(_eq("c2(2z)", _c(z2, 2), "8*y1234 + 14*zp + 16*(u + v + y12 + y34)", ref2))
    for j in (3, 4):
        out.append(_eq(f"c{j}(2z)", _c(z2, j), "", ref2, mod=4))

    w = _gen(1, "123", "124")
    w2 = _gen(2, "123", "124")
    out.append(_eq("c1(w)", _c(w, 1), "2*z12 + y3 + y4 + zp + u", ref3))
    out.append(_eq("c2(w)", _c(w, 2),
                   "4*y1234 + 3*u + 2*(y12 + v) + y13 + y14 + y23 + y24 + y34", ref3))
    shown = {2: "2*(8*y1234 + 9*u + 4*v + 6*y12 + 3*y13 + 3*y23 + 3*y14 + 3*y24 + 2*y34)",
             3: "4*(10*y1234 + 3*u + 2*v)",
             4: "8*y1234"}
    for j, text in shown.items():
        out.append(_eq(f"c{j}(2w)", _c(w2, j), text, ref3))
    c1 = {i: _c(line[i], 1) for i in (1, 2)}
    c1_all = _c(_gen(1, "1234"), 1)
    out.append(_eq("c1(x12)^2 c1(x34)", c1[1] ** 2 * c1[2], "2*(u + y1234)", ref3))
    out.append(_eq("c1(x12)^2 c1(x1234)", c1[1] ** 2 * c1_all, "2*(u + y1234)", ref3))
    out.append(_eq("c1(x34)^2 c1(x12)", c1[2] ** 2 * c1[1], "2*(v + y1234)", ref3))
    out.append(_eq("c1(x34)^2 c1(x1234)", c1[2] ** 2 * c1_all, "2*(v + y1234)", ref3))
    return out


# ---------------------------------------------------------------------------
# Three SB surfaces
# ---------------------------------------------------------------------------

SB_SPEC = RingSpec((3, 3, 3))
BETA_PRIME = (66, 30, 30, 132, 132, 60, 264, 15)
BETA = (12, 12, 12, 24, 24, 24, 48, 6)
# exponents of (x_p, x_q, x_r) in the sequence of c_3(3 x^a)
SEQUENCE = ((2, 1, 1), (1, 2, 1), (1, 1, 2), (2, 2, 1), (2, 1, 2), (1, 2, 2), (2, 2, 2), (1, 1, 1))


def beta_sequences() -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Coefficients of ``y_p^2 y_q y_r`` and of ``y_p y_q y_r`` in ``c_3(3 x^a)``."""
    primes, plains = [], []
    for a in SEQUENCE:
        c3 = chern_class(KGenerator(3, (a,)), SB_SPEC, 3)
        primes.append(c3.coefficient((2, 1, 1)))
        plains.append(c3.coefficient((1, 1, 1)))
    return tuple(primes), tuple(plains)


def _c3(*exps: int) -> TruncPoly:
    return chern_class(KGenerator(3, (tuple(exps),)), SB_SPEC, 3)


def sb_identity_150_a() -> tuple[TruncPoly, TruncPoly]:
    """Both sides of the relation giving 150(y1^2y2^2y3 - y1^2y2y3^2)."""
    lhs = evaluate("150*(y1^2*y2^2*y3 - y1^2*y2*y3^2)", SB_SPEC)
    rhs = (-6 * (_c3(1, 2, 1) + _c3(1, 2, 0)) + 6 * (_c3(1, 1, 2) + _c3(1, 0, 2))
           + 3 * (_c3(2, 2, 1) + _c3(0, 2, 1)) - 3 * (_c3(2, 1, 2) + _c3(0, 1, 2))
           - 9 * _c3(2, 1, 0) + 9 * _c3(2, 0, 1) + 42 * _c3(1, 1, 0) - 42 * _c3(1, 0, 1))
    return lhs, rhs


def sb_identity_150_b() -> tuple[TruncPoly, TruncPoly]:
    """Both sides of the relation giving 150y1^2y2^2y3^2 - 300y1^2y2^2y3."""
    lhs = evaluate("150*y1^2*y2^2*y3^2 - 300*y1^2*y2^2*y3", SB_SPEC)
    rhs = (4 * (_c3(1, 1, 2) - _c3(2, 2, 1)) + 6 * (_c3(2, 1, 0) + _c3(1, 2, 0))
           + 2 * (_c3(1, 0, 2) + _c3(0, 1, 2)) - 2 * (_c3(2, 1, 2) + _c3(1, 2, 2))
           + 8 * (_c3(2, 1, 1) + _c3(1, 2, 1)) - 8 * (_c3(1, 0, 1) + _c3(0, 1, 1))
           + _c3(2, 2, 2) - 16 * _c3(1, 1, 1) - 36 * _c3(1, 1, 0))
    return lhs, rhs


def sb_displays() -> list[DisplayCheck]:
    primes, plains = beta_sequences()
    out = [
        DisplayCheck("beta'", str(BETA_PRIME), str(primes), primes == BETA_PRIME,
                     "coefficients of y_p^2y_qy_r"),
        DisplayCheck("beta", str(BETA), str(plains), plains == BETA,
                     "coefficients of y_py_qy_r"),
    ]
    for name, (lhs, rhs) in (("150-identity (5)", sb_identity_150_a()),
                             ("150-identity (6)", sb_identity_150_b())):
        out.append(DisplayCheck(name, render(lhs), render(rhs), lhs == rhs,
                                "three-SB lemma combination"))
    return out


def all_displays() -> list[DisplayCheck]:
    return quadric_displays() + sb_displays()
