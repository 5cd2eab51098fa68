"""Exact moments of the fair symmetric stopping times and their limit profile.

For a fair coin and equal targets n, the OR stopping time X has r-th
factorial moment A(n, r) = E[X(X-1)...(X-r+1)] given by the defining sum

    A(n, r) = (1/2)^(n-1) * sum_{h<n} C(h+n-1, n-1) * r! * C(h+n, r) * (1/2)^h

and, much faster, by a three-term recurrence in r:

    A(n, r) = 2n*A(n, r-1) + (r-1)(r-2)*A(n, r-2)
              - 4n * C(2n-1, r-2) * (r-2)! * c(n),           r >= 3,
    A(n, 1) = 2n - 2*c(n),    A(n, 2) = 4n^2 - 8n*c(n),

with c(n) = n*C(2n, n)/4^n.  Raw moments follow by the Stirling transform,
central moments by the binomial transform, and scaled central moments
E[(X-mu)^r]/sigma^r by one exact ratio per order.

As n grows, the standardized variable (X - mu)/sigma approaches the negated
half-normal -|N(0,1)|; this module supplies that reference distribution's
scaled moments and a finite-n convergence report against it.  The AND-rule
factorial moments come from the complement identity: the generating
functions of the two rules sum to twice the negative-binomial one, so
B(n, r) = 2*negbin_factorial_moment(n, r, 1/2) - A(n, r).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .exact import DomainError, Rational, RationalLike, binomial, cn, stirling2

__all__ = [
    "MomentTable",
    "moment_table",
    "factorial_moment_or_fair",
    "factorial_moments_or_fair",
    "factorial_moment_or_fair_direct",
    "raw_moments",
    "central_moments",
    "scaled_central_moments",
    "and_factorial_moment_fair",
    "negbin_factorial_moment",
    "halfnormal_scaled_moment",
    "limit_convergence_report",
    "ConvergenceEntry",
    "ConvergenceReport",
]


def factorial_moments_or_fair(n: int, max_order: int) -> list[Rational]:
    """Factorial moments A(n, 0..max_order) of the fair OR time, recurrence path."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if max_order < 1:
        raise DomainError(f"max_order must be >= 1, got {max_order}")
    c = cn(n)
    out: list[Rational] = [Fraction(1), 2 * n - 2 * c]
    if max_order >= 2:
        out.append(4 * n * n - 8 * n * c)
    for r in range(3, max_order + 1):
        out.append(
            2 * n * out[r - 1]
            + (r - 1) * (r - 2) * out[r - 2]
            - 4 * n * binomial(2 * n - 1, r - 2) * math.factorial(r - 2) * c
        )
    return out


def factorial_moment_or_fair(n: int, r: int) -> Rational:
    """A(n, r), the r-th factorial moment of the fair symmetric OR time."""
    if r < 1:
        raise DomainError(f"r must be >= 1, got {r}")
    return factorial_moments_or_fair(n, r)[r]


def factorial_moment_or_fair_direct(n: int, r: int) -> Rational:
    """A(n, r) by the defining sum over the pmf support, term by term.

    Independent of the recurrence path; the two must agree exactly.
    """
    if n < 1 or r < 1:
        raise DomainError(f"need n, r >= 1, got n={n}, r={r}")
    total = Fraction(0)
    for h in range(n):
        total += Fraction(
            binomial(h + n - 1, n - 1) * math.perm(h + n, r), 2**h
        )
    return Fraction(1, 2 ** (n - 1)) * total


def raw_moments(factorial: Sequence[RationalLike]) -> list[Rational]:
    """Raw moments E[X^r] from factorial moments via Stirling numbers.

    ``factorial[i]`` must be the i-th factorial moment, starting at order 0
    (which is 1); the result uses the same indexing.
    """
    fact = [Fraction(v) for v in factorial]
    return [
        sum((stirling2(r, i) * fact[i] for i in range(r + 1)), Fraction(0))
        for r in range(len(fact))
    ]


def central_moments(
    raw: Sequence[RationalLike], mean: RationalLike
) -> list[Rational]:
    """Central moments E[(X-mu)^r] from raw moments by the binomial transform."""
    mu = Fraction(mean)
    rawf = [Fraction(v) for v in raw]
    out: list[Rational] = []
    for r in range(len(rawf)):
        out.append(
            sum(
                (
                    binomial(r, i) * (-mu) ** (r - i) * rawf[i]
                    for i in range(r + 1)
                ),
                Fraction(0),
            )
        )
    return out


def scaled_central_moments(central: Sequence[RationalLike]) -> list[float]:
    """Scaled central moments E[(X-mu)^r]/sigma^r as floats.

    The only lossy step in the moment pipeline.  Each value is computed from
    the exact ratio central[r]^2 / variance^r (sign restored afterwards), so
    no precision is lost to intermediate float arithmetic; the conversion
    itself is correctly rounded.
    """
    cen = [Fraction(v) for v in central]
    if len(cen) < 3:
        raise DomainError("need central moments at least up to order 2")
    var = cen[2]
    if var <= 0:
        raise DomainError(
            "variance must be positive to scale (degenerate at n = 1)"
        )
    out: list[float] = []
    for r, c in enumerate(cen):
        if c == 0:
            out.append(0.0)
            continue
        num = c.numerator * c.numerator * var.denominator**r
        den = c.denominator * c.denominator * var.numerator**r
        mag = math.sqrt(num / den)
        out.append(mag if c > 0 else -mag)
    return out


@dataclass(frozen=True)
class MomentTable:
    """All moment families of the fair symmetric OR time, up to max_order.

    Lists are indexed by order, starting at order 0.  ``scaled`` is None for
    n = 1, where the stopping time is deterministic and sigma = 0.
    """

    n: int
    max_order: int
    factorial: tuple[Rational, ...]
    raw: tuple[Rational, ...]
    central: tuple[Rational, ...]
    scaled: Optional[tuple[float, ...]]
    mean: Rational
    variance: Rational


def moment_table(n: int, max_order: int = 50) -> MomentTable:
    """Build the exact moment pipeline for the fair symmetric OR time."""
    if max_order < 2:
        raise DomainError(f"max_order must be >= 2, got {max_order}")
    fact = factorial_moments_or_fair(n, max_order)
    raw = raw_moments(fact)
    central = central_moments(raw, raw[1])
    variance = central[2]
    scaled = tuple(scaled_central_moments(central)) if variance > 0 else None
    return MomentTable(
        n=n,
        max_order=max_order,
        factorial=tuple(fact),
        raw=tuple(raw),
        central=tuple(central),
        scaled=scaled,
        mean=raw[1],
        variance=variance,
    )


def _rising(n: int, s: int) -> int:
    """Rising factorial n (n+1) ... (n+s-1)."""
    return math.perm(n + s - 1, s)


def negbin_factorial_moment(n: int, r: int, p: RationalLike) -> Rational:
    """r-th factorial moment of the toss count until n heads, bias p.

    Obtained by differentiating the closed generating function
    (px/(1-qx))^n r times at x = 1 (Leibniz rule), which collapses to

        sum_j C(r, j) * falling(n, j) * rising(n, r-j) * (q/p)^(r-j).
    """
    if n < 1 or r < 1:
        raise DomainError(f"need n, r >= 1, got n={n}, r={r}")
    p = Fraction(p)
    if not 0 < p < 1:
        raise DomainError(f"bias must satisfy 0 < p < 1, got {p}")
    ratio = (1 - p) / p
    total = Fraction(0)
    for j in range(min(r, n) + 1):
        total += (
            binomial(r, j)
            * math.perm(n, j)
            * _rising(n, r - j)
            * ratio ** (r - j)
        )
    return total


def and_factorial_moment_fair(n: int, r: int) -> Rational:
    """r-th factorial moment of the fair symmetric AND time.

    Uses the complement identity against the closed negative-binomial form:
    the OR and AND generating functions sum to 2*(x/(2-x))^n at p = 1/2, so
    the factorial moments satisfy B(n, r) = 2*negbin(n, r) - A(n, r).  This
    stays exact where summing the AND pmf would require truncation.
    """
    return 2 * negbin_factorial_moment(
        n, r, Fraction(1, 2)
    ) - factorial_moment_or_fair(n, r)


def halfnormal_scaled_moment(r: int) -> float:
    """Moments of the limiting negated half-normal -|N(0,1)|.

    Returns the raw mean -sqrt(2/pi) for r = 1 (the centered first moment is
    identically zero) and the scaled central moment E[(Y-mu)^r]/sigma^r for
    r >= 2, with mu = -sqrt(2/pi) and sigma^2 = 1 - 2/pi.  Computed from the
    closed form E|Z|^j = 2^(j/2) Gamma((j+1)/2) / sqrt(pi) at high working
    precision; the test suite gates these values against a numerical
    integration oracle.
    """
    if r < 1:
        raise DomainError(f"r must be >= 1, got {r}")
    if r == 1:
        return -math.sqrt(2.0 / math.pi)
    if r == 2:
        return 1.0
    with mpmath.workdps(40 + 2 * r):
        c = mpmath.sqrt(2 / mpmath.pi)  # E|Z|, the half-normal mean
        variance = 1 - 2 / mpmath.pi
        central = mpmath.mpf(0)
        for j in range(r + 1):
            if j % 2 == 0:
                abs_moment = mpmath.mpf(_double_factorial(j - 1))
            else:
                abs_moment = 2 ** ((j - 1) // 2) * math.factorial((j - 1) // 2) * c
            central += math.comb(r, j) * (-c) ** (r - j) * abs_moment
        scaled = central / variance ** (mpmath.mpf(r) / 2)
        # central moments of -|Z| flip sign at odd orders
        return float(scaled if r % 2 == 0 else -scaled)


def _double_factorial(k: int) -> int:
    """k!! for odd k (and (-1)!! = 1); E|Z|^j = (j-1)!! for even j."""
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


@dataclass(frozen=True)
class ConvergenceEntry:
    order: int
    n: int
    scaled: float
    reference: float
    deviation: float


@dataclass(frozen=True)
class ConvergenceReport:
    """Finite-n scaled moments against the half-normal limit, per order.

    ``ratios`` holds |deviation(n_next)| / |deviation(n_prev)| for each
    consecutive pair of grid points at orders >= 3; under the observed
    n^(-1/2) decay this ratio is about sqrt(n_prev / n_next).
    """

    max_order: int
    n_grid: tuple[int, ...]
    entries: tuple[ConvergenceEntry, ...]
    ratios: tuple[tuple[int, int, int, float], ...]

    def deviation(self, order: int, n: int) -> float:
        for e in self.entries:
            if e.order == order and e.n == n:
                return e.deviation
        raise KeyError((order, n))


def limit_convergence_report(
    max_order: int, n_grid: Sequence[int]
) -> ConvergenceReport:
    """Tabulate scaled central moments along n_grid against the limit law.

    Orders 1 and 2 deviate by exactly zero (centering and normalization);
    orders 3 and up are compared against halfnormal_scaled_moment.
    """
    if max_order < 3:
        raise DomainError(f"max_order must be >= 3, got {max_order}")
    grid = [int(n) for n in n_grid]
    if any(n < 2 for n in grid) or any(
        a >= b for a, b in zip(grid, grid[1:])
    ):
        raise DomainError("n_grid must be strictly increasing with n >= 2")
    references = {1: 0.0, 2: 1.0}
    for r in range(3, max_order + 1):
        references[r] = halfnormal_scaled_moment(r)
    entries: list[ConvergenceEntry] = []
    for n in grid:
        table = moment_table(n, max_order)
        assert table.scaled is not None
        for r in range(1, max_order + 1):
            scaled = table.scaled[r]
            ref = references[r]
            entries.append(
                ConvergenceEntry(
                    order=r, n=n, scaled=scaled, reference=ref,
                    deviation=scaled - ref,
                )
            )
    by_key = {(e.order, e.n): e for e in entries}
    ratios: list[tuple[int, int, int, float]] = []
    for r in range(3, max_order + 1):
        for n_prev, n_next in zip(grid, grid[1:]):
            d_prev = by_key[(r, n_prev)].deviation
            d_next = by_key[(r, n_next)].deviation
            ratio = math.inf if d_prev == 0 else abs(d_next) / abs(d_prev)
            ratios.append((r, n_prev, n_next, ratio))
    return ConvergenceReport(
        max_order=max_order,
        n_grid=tuple(grid),
        entries=tuple(entries),
        ratios=tuple(ratios),
    )
