"""Exact rational arithmetic and the combinatorial primitives everything else uses.

All probabilities, expectations, and moments in this package are carried as
arbitrary-precision rationals; floating point only appears when a value is
rendered for display.  ``Rational`` is the standard library
``fractions.Fraction``, which already provides the required guarantees:
values are kept in lowest terms with a positive denominator, arithmetic is
exact, and division by zero raises.
"""

from __future__ import annotations

import math
import threading
from decimal import Context, Decimal, ROUND_HALF_EVEN
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

Rational = Fraction

RationalLike = Union[Rational, int, str]

__all__ = [
    "Rational",
    "RationalLike",
    "DomainError",
    "Polynomial",
    "binomial",
    "catalan",
    "stirling2",
    "cn",
    "to_decimal",
    "CACHE_MAX_ENTRIES",
]

# Cap on per-process memo tables (entries, not bytes).
CACHE_MAX_ENTRIES = 10**6


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


def binomial(n: int, k: int) -> int:
    """Binomial coefficient C(n, k), with C(n, k) = 0 for k < 0 or k > n.

    Requires n >= 0.  Delegates to ``math.comb``, which computes the exact
    arbitrary-precision value in C; a Python-level memo table would be both
    slower and heavier for the big-integer results involved here.
    """
    if n < 0:
        raise DomainError(f"binomial requires n >= 0, got n={n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


@lru_cache(maxsize=CACHE_MAX_ENTRIES)
def catalan(j: int) -> int:
    """The j-th Catalan number (2j)! / (j! (j+1)!)."""
    if j < 0:
        raise DomainError(f"catalan requires j >= 0, got {j}")
    return math.comb(2 * j, j) // (j + 1)


# Rows of the Stirling-set triangle, grown on demand.  Appends happen under a
# lock; reads are safe because the list is append-only and rows are immutable.
_stirling_rows: list[tuple[int, ...]] = [(1,)]
_stirling_lock = threading.Lock()


def stirling2(r: int, i: int) -> int:
    """Stirling number of the second kind S(r, i).

    Computed by the triangular recurrence S(r, i) = i*S(r-1, i) + S(r-1, i-1)
    with S(0, 0) = 1.
    """
    if r < 0 or i < 0:
        raise DomainError(f"stirling2 requires r, i >= 0, got ({r}, {i})")
    if i > r:
        return 0
    if r >= len(_stirling_rows):
        with _stirling_lock:
            while len(_stirling_rows) <= r:
                prev = _stirling_rows[-1]
                size = len(_stirling_rows)
                row = tuple(
                    (j * prev[j] if j < len(prev) else 0)
                    + (prev[j - 1] if 0 < j <= len(prev) else 0)
                    for j in range(size + 1)
                )
                _stirling_rows.append(row)
    return _stirling_rows[r][i]


@lru_cache(maxsize=CACHE_MAX_ENTRIES)
def cn(n: int) -> Rational:
    """The central-binomial ratio n * C(2n, n) / 4**n, exactly.

    This is the gap between 2n and the mean stopping time of the fair
    symmetric OR rule, halved; it recurs throughout the moment formulas.
    """
    if n < 1:
        raise DomainError(f"cn requires n >= 1, got {n}")
    return Fraction(n * math.comb(2 * n, n), 4**n)


def to_decimal(value: RationalLike, digits: int = 10) -> str:
    """Render an exact rational as a decimal string with round-half-even.

    ``digits`` counts significant digits, not places after the point, so the
    default of 10 prints e.g. 285.3561686 and 1467.229920 (trailing zeros in
    the significand are kept).
    """
    if digits < 1:
        raise DomainError(f"to_decimal requires digits >= 1, got {digits}")
    x = Fraction(value)
    ctx = Context(prec=digits, rounding=ROUND_HALF_EVEN)
    return str(ctx.divide(Decimal(x.numerator), Decimal(x.denominator)))


class Polynomial:
    """Dense univariate polynomial with Rational coefficients.

    Coefficient i is the coefficient of x**i.  Trailing zero coefficients are
    trimmed on construction; the zero polynomial has degree -1.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coefficients: Sequence[RationalLike] = ()):
        coeffs = [Fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self._coeffs: tuple[Rational, ...] = tuple(coeffs)

    @property
    def coefficients(self) -> tuple[Rational, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        return len(self._coeffs) - 1

    def coefficient(self, k: int) -> Rational:
        """Coefficient of x**k (zero outside the stored range)."""
        if 0 <= k < len(self._coeffs):
            return self._coeffs[k]
        return Fraction(0)

    def evaluate(self, x: RationalLike) -> Rational:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self._coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        n = max(len(self._coeffs), len(other._coeffs))
        return Polynomial(
            [self.coefficient(i) + other.coefficient(i) for i in range(n)]
        )

    def __mul__(self, other: "Polynomial | RationalLike") -> "Polynomial":
        if isinstance(other, Polynomial):
            if not self._coeffs or not other._coeffs:
                return Polynomial()
            out = [Fraction(0)] * (len(self._coeffs) + len(other._coeffs) - 1)
            for i, a in enumerate(self._coeffs):
                for j, b in enumerate(other._coeffs):
                    out[i + j] += a * b
            return Polynomial(out)
        scalar = Fraction(other)
        return Polynomial([c * scalar for c in self._coeffs])

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({list(self._coeffs)!r})"
