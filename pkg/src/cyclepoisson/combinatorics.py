"""Exact combinatorial counts and numeric helpers on huge integers.

Everything here is exact integer or rational arithmetic except the two
floating-point outputs: the factorial approximation and the logarithm
helpers, which are documented to at least 12 significant digits.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "factorial",
    "double_factorial_odd",
    "binomial",
    "stirling_factorial",
    "stirling_relative_error",
    "block_partition_count",
    "log10_int",
    "log10_fraction",
    "log_fraction",
]

# Digits of the leading prefix used by the exact-log path.  25 digits keep the
# truncation error of the prefix below 1e-24, far under float rounding.
_LOG_PREFIX_DIGITS = 25


def factorial(n: int) -> int:
    """n! as an exact integer.

    Args:
        n: nonnegative integer.

    Raises:
        ValueError: if n is negative.
    """
    if n < 0:
        raise ValueError("factorial requires n >= 0, got %r" % (n,))
    return math.factorial(n)


def double_factorial_odd(v: int) -> int:
    """(2v-1)!! = 1 * 3 * 5 * ... * (2v-1), with v=0 giving the empty product 1.

    Computed by direct product so the identity (2v)! = (2v-1)!! * 2^v * v!
    can be tested against an independent code path.
    """
    if v < 0:
        raise ValueError("double_factorial_odd requires v >= 0, got %r" % (v,))
    out = 1
    for j in range(1, 2 * v, 2):
        out *= j
    return out


def binomial(n: int, k: int) -> int:
    """Binomial coefficient C(n, k); zero when k is outside 0..n."""
    if n < 0:
        raise ValueError("binomial requires n >= 0, got %r" % (n,))
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def stirling_factorial(n: int) -> float:
    """Factorial approximation sqrt((2n + 1/3) * pi) * (n/e)^n.

    Evaluated directly in floating point; overflows float64 for n >= 171
    (so does n! itself).  For large-n accuracy statements use
    stirling_relative_error, which works in log space.

    Raises:
        ValueError: if n < 1 (the formula is not claimed at n = 0).
        OverflowError: if the value exceeds float range.
    """
    if n < 1:
        raise ValueError("stirling_factorial requires n >= 1, got %r" % (n,))
    return math.sqrt((2 * n + 1.0 / 3.0) * math.pi) * (n / math.e) ** n


def stirling_relative_error(n: int) -> float:
    """|stirling_factorial(n) / n! - 1| computed without overflow.

    The formula's natural log is 0.5*log((2n+1/3)*pi) + n*(log n - 1); the
    exact factorial's log comes from the digit-count path, so the comparison
    stays valid far past float range.
    """
    if n < 1:
        raise ValueError("stirling_relative_error requires n >= 1, got %r" % (n,))
    log_formula = 0.5 * math.log((2 * n + 1.0 / 3.0) * math.pi) + n * (math.log(n) - 1.0)
    log_exact = log10_int(math.factorial(n)) * math.log(10.0)
    return abs(math.expm1(log_formula - log_exact))


@lru_cache(maxsize=None)
def _partition_count(elements: int, blocks: int, min_block: int) -> int:
    if blocks == 0:
        return 1 if elements == 0 else 0
    if elements < blocks * min_block:
        return 0
    total = 0
    # Choose the members of the first block, then place the rest.
    for j in range(min_block, elements + 1):
        total += math.comb(elements, j) * _partition_count(elements - j, blocks - 1, min_block)
    return total


def block_partition_count(elements: int, blocks: int, min_block: int) -> int:
    """Ordered tuples of disjoint blocks covering a labeled set.

    Counts the ways to split `elements` labeled items into an ordered tuple of
    `blocks` pairwise-disjoint, jointly-exhaustive subsets, each of size at
    least `min_block`.  Top-down recursion over (remaining elements,
    remaining blocks) with exact binomial weights; memoized.

    This is the independent oracle for coefficient extraction from the
    (e^x - 1 - x)^t family: the count equals (2v)! times the x^(2v)
    coefficient of that series when min_block = 2.
    """
    if elements < 0 or blocks < 0 or min_block < 0:
        raise ValueError("block_partition_count arguments must be nonnegative")
    return _partition_count(elements, blocks, min_block)


def log10_int(n: int) -> float:
    """log10 of a positive integer of any size.

    Uses the exact decimal digit count plus a float log10 of the leading
    25-digit prefix, so the result is accurate to ~1e-14 absolute even for
    integers with hundreds of digits (never converts n itself to float).
    """
    if n <= 0:
        raise ValueError("log10_int requires n > 0, got %r" % (n,))
    digits = str(n)
    d = len(digits)
    if d <= _LOG_PREFIX_DIGITS:
        return math.log10(n)
    prefix = int(digits[:_LOG_PREFIX_DIGITS])
    return math.log10(prefix) + (d - _LOG_PREFIX_DIGITS)


def log10_fraction(q: Fraction) -> float:
    """log10 of a positive rational, exact-integer path on both sides."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("log10_fraction requires a positive value, got %r" % (q,))
    return log10_int(q.numerator) - log10_int(q.denominator)


def log_fraction(q: Fraction, base: int | str = 10) -> float:
    """Logarithm of a positive rational in base 10 or base e."""
    l10 = log10_fraction(q)
    if base == 10:
        return l10
    if base in ("e", math.e):
        return l10 * math.log(10.0)
    raise ValueError("log base must be 10 or 'e', got %r" % (base,))
