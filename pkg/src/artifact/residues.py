"""Exact residue arithmetic behind the elliptic contributions.

alpha_m(k) is the least nonnegative residue of k modulo m.  S_k is the
roots-of-unity sum sum_{l=1}^{m-1} i/sin(pi l/m) * exp(-pi i l (2k+1)/m),
whose closed form is m - 1 - 2 alpha_m(k).
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from .errors import DomainError


def _check_m(m: int) -> None:
    if int(m) != m or m < 2:
        raise DomainError(f"modulus must be an integer >= 2, got {m}")


def alpha(m: int, k: int) -> int:
    """Least nonnegative residue of k modulo m."""
    _check_m(m)
    return k % m


def s_sum_closed(m: int, k: int) -> int:
    return -2 * alpha(m, k) + m - 1


def s_sum_bruteforce(m: int, k: int) -> complex:
    _check_m(m)
    total = 0j
    for ell in range(1, m):
        total += 1j / math.sin(math.pi * ell / m) * cmath.exp(-1j * math.pi * ell * (2 * k + 1) / m)
    return total


def zero_sum(m: int, n: int) -> tuple[int, int]:
    """Sums over a complete residue system r = 0..m-1; both vanish identically."""
    _check_m(m)
    minus = sum(-2 * alpha(m, r - n) + m - 1 for r in range(m))
    plus = sum(-2 * alpha(m, r + n) + m - 1 for r in range(m))
    return minus, plus


def beta_closed(m: int, n: int) -> Fraction:
    a = alpha(m, n)
    return Fraction(m * m - 1, 6 * m) - Fraction(a * (m - a), m)


def beta_bruteforce(m: int, n: int) -> Fraction:
    _check_m(m)
    total = Fraction(0)
    for r in range(m):
        c_minus = Fraction(2 * alpha(m, r - n) + 1 - m, 2 * m)
        c_plus = Fraction(2 * alpha(m, r + n) + 1 - m, 2 * m)
        total += r * (c_minus + c_plus)
    return total / m
