"""Divisibility of alternating coefficient sums of ``((prod (1+s_i)^{m_i}) - 1)^p``.

The power is expanded densely in Z[s_1..s_n]/(s_i^p); nothing clever is done
with the coefficients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from ..truncring import RingSpec, expand_line_bundle


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class KeySBInstance:
    p: int
    n: int
    m: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(x) for x in self.m)
        object.__setattr__(self, "m", m)
        if not (_is_prime(self.p) and self.p % 2):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.n < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")
        if len(m) != self.n:
            raise ValueError(f"need {self.n} exponents, got {len(m)}")
        if any(not 1 <= x <= self.p - 1 for x in m):
            raise ValueError(f"exponents must lie in [1, {self.p - 1}], got {m}")


@dataclass(frozen=True)
class KeySBResult:
    instance: KeySBInstance
    coefficients: dict
    total: int

    @property
    def divisible(self) -> bool:
        return self.total % self.instance.p**2 == 0

    def row(self) -> dict:
        inst = self.instance
        return {"p": inst.p, "n": inst.n, "m": list(inst.m), "sum": self.total,
                "divisible": self.divisible}


def keysb_expand(inst: KeySBInstance) -> KeySBResult:
    spec = RingSpec((inst.p,) * inst.n)
    phi = expand_line_bundle(spec, inst.m) ** inst.p
    coeffs = {}
    total = 0
    for j in itertools.product(range(1, inst.p), repeat=inst.n):
        c = phi.coefficient(j)
        coeffs[j] = c
        total += (-1) ** sum(j) * c
    return KeySBResult(inst, coeffs, total)


def keysb_check(inst: KeySBInstance) -> tuple[int, bool]:
    """The alternating sum and whether p^2 divides it."""
    res = keysb_expand(inst)
    return res.total, res.divisible


def keysb_sweep(primes=(3, 5), ns=(2, 3)) -> Iterator[KeySBResult]:
    for p in primes:
        for n in ns:
            for m in itertools.product(range(1, p), repeat=n):
                yield keysb_expand(KeySBInstance(p, n, m))
