"""Sparse integer polynomials in Z[y_1..y_n] / (y_1^{r_1}, ..., y_n^{r_n}).

After the shift ``y_i = x_i - 1`` this ring is the Grothendieck ring of a
product of projective spaces ``P^{r_1 - 1} x ... x P^{r_n - 1}``; ``x_i`` is
the class of the tautological line bundle of the i-th factor.

Monomials are exponent tuples.  The global monomial order is degree-lex:
total degree first, then lexicographic with ``y_1 > y_2 > ...``, so the
coordinate basis for ``r = (2, 2)`` is ``(1, y1, y2, y1*y2)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

Monomial = tuple[int, ...]


class RingMismatch(ValueError):
    """Operands live in different truncated rings."""


def monomial_key(m: Monomial) -> tuple:
    return (sum(m), tuple(-a for a in m))


@dataclass(frozen=True)
class RingSpec:
    truncations: tuple[int, ...]

    def __post_init__(self):
        r = tuple(int(x) for x in self.truncations)
        if not r:
            raise ValueError("a ring needs at least one variable")
        if any(x < 2 for x in r):
            raise ValueError(f"every truncation must be >= 2, got {r}")
        object.__setattr__(self, "truncations", r)

    @property
    def n(self) -> int:
        return len(self.truncations)

    @property
    def dim(self) -> int:
        return sum(r - 1 for r in self.truncations)

    @property
    def rank(self) -> int:
        return math.prod(self.truncations)

    @cached_property
    def monomials(self) -> tuple[Monomial, ...]:
        mons = itertools.product(*(range(r) for r in self.truncations))
        return tuple(sorted(mons, key=monomial_key))

    @cached_property
    def index_of(self) -> dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.monomials)}

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([sum(m) for m in self.monomials], dtype=np.int64)

    @cached_property
    def mult_table(self) -> np.ndarray:
        """``table[k, l]`` is the index of monomial_k * monomial_l, or -1 if it vanishes."""
        D = self.rank
        table = np.full((D, D), -1, dtype=np.int64)
        mons = self.monomials
        idx = self.index_of
        for k, a in enumerate(mons):
            for l, b in enumerate(mons):
                c = tuple(x + y for x, y in zip(a, b))
                if all(x < r for x, r in zip(c, self.truncations)):
                    table[k, l] = idx[c]
        return table

    @cached_property
    def product_pairs(self) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
        """For each target monomial m, the index pairs (k, l) with y^k * y^l = y^m."""
        table = self.mult_table
        out = []
        for m in range(self.rank):
            ks, ls = np.nonzero(table == m)
            out.append((ks, ls))
        return tuple(out)

    def is_valid(self, m: Monomial) -> bool:
        return len(m) == self.n and all(0 <= a < r for a, r in zip(m, self.truncations))

    def layer_mask(self, d: int) -> np.ndarray:
        """Boolean mask of coordinates whose monomial has total degree >= d."""
        return self.degrees >= d

    def variable(self, i: int) -> "TruncPoly":
        """The generator y_{i+1} (0-based ``i``)."""
        m = [0] * self.n
        m[i] = 1
        return TruncPoly(self, {tuple(m): 1})

    def one(self) -> "TruncPoly":
        return TruncPoly(self, {(0,) * self.n: 1})

    def zero(self) -> "TruncPoly":
        return TruncPoly(self, {})


def _normalize(spec: RingSpec, terms: Mapping[Monomial, int]) -> dict[Monomial, int]:
    out = {}
    for m, c in terms.items():
        m = tuple(m)
        if c and all(a < r for a, r in zip(m, spec.truncations)):
            out[m] = out.get(m, 0) + int(c)
    return {m: c for m, c in out.items() if c}


@dataclass(frozen=True, eq=False)
class TruncPoly:
    spec: RingSpec
    terms: Mapping[Monomial, int] = field(default_factory=dict)

    def __post_init__(self):
        for m in self.terms:
            if len(m) != self.spec.n or any(a < 0 for a in m):
                raise ValueError(f"bad monomial {m} for {self.spec}")
        object.__setattr__(self, "terms", _normalize(self.spec, self.terms))

    # construction ---------------------------------------------------------

    @classmethod
    def constant(cls, spec: RingSpec, c: int) -> "TruncPoly":
        return cls(spec, {(0,) * spec.n: c})

    @classmethod
    def from_vector(cls, spec: RingSpec, vec: Iterable[int]) -> "TruncPoly":
        vec = list(vec)
        if len(vec) != spec.rank:
            raise RingMismatch(f"vector of length {len(vec)} for ambient rank {spec.rank}")
        return cls(spec, {m: int(c) for m, c in zip(spec.monomials, vec) if c})

    def to_vector(self) -> list[int]:
        vec = [0] * self.spec.rank
        idx = self.spec.index_of
        for m, c in self.terms.items():
            vec[idx[m]] = c
        return vec

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "TruncPoly":
        if isinstance(other, TruncPoly):
            if other.spec != self.spec:
                raise RingMismatch(f"{self.spec} vs {other.spec}")
            return other
        if isinstance(other, (int, np.integer)):
            return TruncPoly.constant(self.spec, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return TruncPoly(self.spec, terms)

    __radd__ = __add__

    def __neg__(self):
        return TruncPoly(self.spec, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return TruncPoly(self.spec, {m: c * int(other) for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined")
        result = self.spec.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = TruncPoly.constant(self.spec, int(other))
        if not isinstance(other, TruncPoly):
            return NotImplemented
        return self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        return hash((self.spec, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"TruncPoly({self})"

    def __str__(self):
        return render(self)

    def coefficient(self, m: Monomial) -> int:
        return coefficient_of(self, m)

    @property
    def constant_term(self) -> int:
        return self.terms.get((0,) * self.spec.n, 0)


def mul(p: TruncPoly, q: TruncPoly) -> TruncPoly:
    """Exact product; monomials with some exponent >= r_i are discarded."""
    if p.spec != q.spec:
        raise RingMismatch(f"{p.spec} vs {q.spec}")
    r = p.spec.truncations
    out: dict[Monomial, int] = {}
    for a, ca in p.terms.items():
        for b, cb in q.terms.items():
            c = tuple(x + y for x, y in zip(a, b))
            for x, bound in zip(c, r):
                if x >= bound:
                    break
            else:
                out[c] = out.get(c, 0) + ca * cb
    return TruncPoly(p.spec, out)


def expand_line_bundle(spec: RingSpec, a: Iterable[int]) -> TruncPoly:
    """The root ``z_a = prod (1 + y_i)^{a_i} - 1`` of the line bundle x^a."""
    a = tuple(int(x) for x in a)
    if len(a) != spec.n:
        raise RingMismatch(f"exponent {a} for {spec.n} variables")
    if any(x < 0 for x in a):
        raise ValueError(f"exponents must be non-negative: {a}")
    result = spec.one()
    for i, e in enumerate(a):
        if e:
            result = result * (spec.one() + spec.variable(i)) ** e
    return result - 1


def coefficient_of(p: TruncPoly, m: Monomial) -> int:
    m = tuple(m)
    if not p.spec.is_valid(m):
        raise ValueError(f"monomial {m} is not valid for {p.spec}")
    return p.terms.get(m, 0)


def min_total_degree(p: TruncPoly) -> float:
    """Lowest total degree of a stored monomial; ``inf`` for the zero polynomial."""
    if not p.terms:
        return math.inf
    return min(sum(m) for m in p.terms)


def _render_monomial(m: Monomial) -> str:
    parts = []
    for i, a in enumerate(m):
        if a == 1:
            parts.append(f"y{i + 1}")
        elif a > 1:
            parts.append(f"y{i + 1}^{a}")
    return "*".join(parts)


def render(p: TruncPoly) -> str:
    """Canonical text form, e.g. ``2*y1*y2 + 6*y1*y2*y3``, terms in degree-lex order."""
    if not p.terms:
        return "0"
    pieces = []
    for m in sorted(p.terms, key=monomial_key):
        c = p.terms[m]
        mono = _render_monomial(m)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(("+ " if c > 0 else "- ") + body)
    return " ".join(pieces)
