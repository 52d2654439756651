"""Small exact-arithmetic helpers (integer roots, certified bounds on e)."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions, decimal strings and "p/q" strings exactly.

    Floats are converted through their shortest repr, so ``0.15`` becomes
    ``3/20`` rather than the binary expansion.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"not a finite rational: {x!r}")
        return Fraction(repr(x))
    return Fraction(str(x).strip())


def iroot_floor(x: int, k: int) -> int:
    """Largest integer y with y**k <= x, for x >= 0 and k >= 1."""
    if x < 0 or k < 1:
        raise ValueError("iroot_floor needs x >= 0 and k >= 1")
    if x < 2 or k == 1:
        return x
    # Newton iteration from an overestimate.
    y = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        z = ((k - 1) * y + x // y ** (k - 1)) // k
        if z >= y:
            break
        y = z
    while y ** k > x:
        y -= 1
    while (y + 1) ** k <= x:
        y += 1
    return y


def iroot_ceil(x: int, k: int) -> int:
    y = iroot_floor(x, k)
    return y if y ** k == x else y + 1


def ceil_power(base: int, exponent, factor: int = 1) -> int:
    """Exact ``ceil(factor * base ** exponent)`` for any rational exponent."""
    exponent = as_fraction(exponent)
    if base < 1 or factor < 0:
        raise ValueError("ceil_power needs base >= 1 and factor >= 0")
    p, q = exponent.numerator, exponent.denominator
    if p >= 0:
        # factor * base**(p/q) = (factor**q * base**p) ** (1/q)
        return iroot_ceil(factor ** q * base ** p, q)
    # K >= factor * base**(-|p|/q)  <=>  K**q >= factor**q / base**|p|
    return iroot_ceil(-(-(factor ** q) // base ** (-p)), q)


@lru_cache(maxsize=None)
def e_bounds(terms: int = 30) -> tuple[Fraction, Fraction]:
    """Rational ``(lo, hi)`` with ``lo < e < hi``.

    ``lo`` is the partial sum of 1/j! for j < terms; the tail is bounded by
    ``1/((terms-1)! * (terms-1))``.
    """
    lo = Fraction(0)
    fact = 1
    for j in range(terms):
        if j:
            fact *= j
        lo += Fraction(1, fact)
    hi = lo + Fraction(1, fact * (terms - 1))
    return lo, hi
