"""Chern classes with values in K, ``c_j(x) = gamma_j(x - rank x)``.

For a generator ``m * sum_{a in orbit} x^a`` the splitting principle gives the
total class ``prod_a (1 + z_a t)^m`` with ``z_a = x^a - 1``.  Series are
truncated at ``t^dim``; higher coefficients vanish in the ring anyway.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .kmodel import KGenerator, as_poly
from .truncring import RingSpec, TruncPoly, expand_line_bundle, min_total_degree

Series = tuple[TruncPoly, ...]


@dataclass(frozen=True)
class ChernAtom:
    source: KGenerator
    degree: int
    value: TruncPoly

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("Chern degree must be positive")
        if min_total_degree(self.value) < self.degree:
            raise ValueError(f"c_{self.degree} of {self.source.label()} has a term of lower degree")


def series_mul(a: Series, b: Series, cap: int) -> Series:
    out = [a[0].spec.zero() for _ in range(cap + 1)]
    for i, p in enumerate(a):
        if not p:
            continue
        for j, q in enumerate(b):
            if i + j > cap:
                break
            if q:
                out[i + j] = out[i + j] + p * q
    return tuple(out)


@lru_cache(maxsize=None)
def _line_series(spec: RingSpec, a: tuple[int, ...], m: int) -> Series:
    """``(1 + z_a t)^m`` through the binomial law."""
    z = expand_line_bundle(spec, a)
    out = [spec.one()]
    power = spec.one()
    for k in range(1, spec.dim + 1):
        power = power * z
        out.append(power * comb(m, k))
    return tuple(out)


@lru_cache(maxsize=None)
def _total(spec: RingSpec, orbit: tuple[tuple[int, ...], ...], m: int) -> Series:
    result: Series = (spec.one(),) + (spec.zero(),) * spec.dim
    for a in orbit:
        result = series_mul(result, _line_series(spec, a, m), spec.dim)
    return result


def total_chern(gen: KGenerator, spec: RingSpec) -> Series:
    """Coefficients ``c_0 = 1, c_1, ..., c_dim`` of the total Chern class."""
    return _total(spec, gen.orbit, gen.multiplier)


def chern_classes(gen: KGenerator, spec: RingSpec) -> list[ChernAtom]:
    series = total_chern(gen, spec)
    top = min(gen.rank, spec.dim)
    return [ChernAtom(gen, j, series[j]) for j in range(1, top + 1)]


def chern_class(gen: KGenerator, spec: RingSpec, j: int) -> TruncPoly:
    if j == 0:
        return spec.one()
    if j > spec.dim or j > gen.rank:
        return spec.zero()
    return total_chern(gen, spec)[j]


def naive_total_chern(bundles: list[tuple[int, ...]], spec: RingSpec) -> Series:
    """Product of ``(1 + z_a t)`` over a list of line bundles, one factor at a time."""
    result: Series = (spec.one(),) + (spec.zero(),) * spec.dim
    for a in bundles:
        z = expand_line_bundle(spec, a)
        factor = (spec.one(), z) + (spec.zero(),) * (spec.dim - 1)
        result = series_mul(result, factor, spec.dim)
    return result


def whitney_check(g1: KGenerator, g2: KGenerator, spec: RingSpec) -> bool:
    """The total class of ``g1 + g2`` equals the product of their total classes.

    The left side is expanded bundle by bundle, independently of the cached
    binomial series used on the right.
    """
    bundles = [a for a in g1.orbit for _ in range(g1.multiplier)]
    bundles += [a for a in g2.orbit for _ in range(g2.multiplier)]
    lhs = naive_total_chern(bundles, spec)
    rhs = series_mul(total_chern(g1, spec), total_chern(g2, spec), spec.dim)
    return all(p == q for p, q in zip(lhs, rhs))


def first_chern_is_reduced_class(gen: KGenerator, spec: RingSpec) -> bool:
    """``c_1(x) = x - rank(x)``."""
    return chern_class(gen, spec, 1) == as_poly(gen, spec) - gen.rank


@dataclass(frozen=True)
class Discrepancy:
    """A displayed closed form that differs from the exact ring value."""

    name: str
    displayed: str
    exact: str
    difference: str
