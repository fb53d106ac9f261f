"""Closed-form exponents for the maximal torsion of generic products."""

from __future__ import annotations

from math import comb


def _check(n: int) -> None:
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"need at least two factors, got {n!r}")


def conic_bound_N(n: int) -> int:
    """Exponent N with maximal CH^2 torsion 2^N over products of n conics."""
    _check(n)
    return 2**n - (comb(n, 2) + n + 1)


def sb_bound_N(n: int) -> int:
    """Exponent N with maximal CH^2 torsion at least 3^N over products of n SB surfaces.

    Counts the classes 3y_p^2y_q^2, 3y_py_qy_r, 3y_p^2y_qy_r and 3(y_{i_1}..y_{i_s})^2.
    """
    _check(n)
    return 2**n + 4 * comb(n, 3) - (n + 1)
