"""
Exact combinatorial building blocks shared by the closed-form sums.

Combinatorial factors are kept as Python integers (exact at any size) and
only turned into floats or Fractions at the very end, so the alternating
signs inside the sums cancel exactly.
"""

import math
from collections.abc import Iterable
from fractions import Fraction
from functools import lru_cache

Number = float | Fraction


@lru_cache(maxsize=512)
def factorial(n: int) -> int:
    """n! for n >= 0."""
    if n < 0:
        raise ValueError(f"factorial of negative argument {n}")
    return math.factorial(n)


def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero outside 0 <= k <= n."""
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def sign(exponent: int) -> int:
    """(-1)**exponent for any integer exponent."""
    return -1 if exponent % 2 else 1


def span(lower: int, upper: int) -> range:
    """Inclusive summation range; empty when upper < lower."""
    return range(lower, upper + 1)


def ratio(numerator: int, denominator: int, exact: bool) -> Number:
    """numerator / denominator as a Fraction or a correctly rounded float."""
    if exact:
        return Fraction(numerator, denominator)
    return numerator / denominator


def to_number(value: float | Fraction, exact: bool) -> Number:
    """Convert an efficiency or probability to the working number type."""
    if exact:
        return value if isinstance(value, Fraction) else Fraction(value)
    return float(value)


def accumulate(terms: Iterable[Number], exact: bool) -> Number:
    """Exact sum, or compensated float summation (order independent)."""
    if exact:
        return sum(terms, Fraction(0))
    return math.fsum(terms)
