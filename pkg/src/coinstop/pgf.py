"""Exact probability mass functions of the two stopping times.

For a coin with heads-probability p (tails q = 1 - p) and targets of n heads
and m tails, the stopping time under the OR rule has the finite generating
function

    F1(x) = (qx)^m * sum_{h<n} C(h+m-1, m-1) (px)^h
          + (px)^n * sum_{t<m} C(t+n-1, n-1) (qx)^t,

whose x^k coefficient is P(stop at toss k); support is {min(n,m), .., n+m-1}.
Under the AND rule the analogous series F2 runs over h >= n and t >= m, has
support starting at n + m, and is unbounded above, so its pmf is materialized
up to a truncation point with a certified tail bound.  The sum F1 + F2 is the
closed form (qx/(1-px))^m + (px/(1-qx))^n, which this module also expands for
cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator

from .exact import DomainError, Polynomial, Rational, RationalLike, binomial

__all__ = [
    "StopRule",
    "CoinSpec",
    "GoalSpec",
    "Pmf",
    "pmf_or",
    "pmf_and",
    "pgf_sum_closed_form",
    "DEFAULT_EPSILON",
]

# Default truncation threshold for the AND-rule pmf tail.
DEFAULT_EPSILON = Fraction(1, 2**40)


class StopRule(Enum):
    """Stopping rule: first of the two goals (OR) or both goals (AND)."""

    OR = "or"
    AND = "and"


@dataclass(frozen=True)
class CoinSpec:
    """A coin with rational heads-probability strictly between 0 and 1."""

    p: Rational
    q: Rational = field(init=False)

    def __post_init__(self) -> None:
        p = Fraction(self.p)
        if not 0 < p < 1:
            raise DomainError(f"coin bias must satisfy 0 < p < 1, got {p}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", 1 - p)

    @classmethod
    def fair(cls) -> "CoinSpec":
        return cls(Fraction(1, 2))

    def flipped(self) -> "CoinSpec":
        """The coin with heads and tails interchanged."""
        return CoinSpec(self.q)


@dataclass(frozen=True)
class GoalSpec:
    """Targets for the stopping rule: n_heads heads and/or m_tails tails."""

    rule: StopRule
    n_heads: int
    m_tails: int

    def __post_init__(self) -> None:
        if self.n_heads < 1 or self.m_tails < 1:
            raise DomainError(
                f"targets must be >= 1, got n_heads={self.n_heads}, "
                f"m_tails={self.m_tails}"
            )


@dataclass(frozen=True)
class Pmf:
    """Exact pmf on a contiguous integer support starting at ``support_min``.

    When ``truncated`` is false the probabilities sum to exactly 1.  When
    true, ``tail_mass_bound`` is an exact upper bound on the mass beyond
    ``support_max``.
    """

    support_min: int
    probs: tuple[Rational, ...]
    truncated: bool = False
    tail_mass_bound: Rational = Fraction(0)

    @property
    def support_max(self) -> int:
        return self.support_min + len(self.probs) - 1

    def prob(self, k: int) -> Rational:
        if self.support_min <= k <= self.support_max:
            return self.probs[k - self.support_min]
        return Fraction(0)

    def items(self) -> Iterator[tuple[int, Rational]]:
        for i, v in enumerate(self.probs):
            yield self.support_min + i, v

    def total_mass(self) -> Rational:
        return sum(self.probs, Fraction(0))

    def mean(self) -> Rational:
        """Mean over the materialized support (truncated mean if truncated)."""
        return sum((k * v for k, v in self.items()), Fraction(0))

    def variance(self) -> Rational:
        mu = self.mean()
        second = sum((k * k * v for k, v in self.items()), Fraction(0))
        return second - mu * mu


def _validate_targets(n: int, m: int) -> None:
    if n < 1 or m < 1:
        raise DomainError(f"targets must be >= 1, got n={n}, m={m}")


def _or_coefficient(coin: CoinSpec, n: int, m: int, k: int) -> Rational:
    """P(OR-rule stop at toss k): x^k coefficient of F1."""
    p, q = coin.p, coin.q
    v = Fraction(0)
    h = k - m
    if 0 <= h <= n - 1:
        # sequences ending with the m-th tail, h heads seen so far
        v += binomial(k - 1, m - 1) * q**m * p**h
    t = k - n
    if 0 <= t <= m - 1:
        # sequences ending with the n-th head, t tails seen so far
        v += binomial(k - 1, n - 1) * p**n * q**t
    return v


def _and_coefficient(coin: CoinSpec, n: int, m: int, k: int) -> Rational:
    """P(AND-rule stop at toss k): x^k coefficient of F2."""
    p, q = coin.p, coin.q
    v = Fraction(0)
    h = k - m
    if h >= n:
        # the m-th tail arrives last, h >= n heads already seen
        v += binomial(k - 1, m - 1) * q**m * p**h
    t = k - n
    if t >= m:
        v += binomial(k - 1, n - 1) * p**n * q**t
    return v


def pmf_or(coin: CoinSpec, n: int, m: int) -> Pmf:
    """Exact pmf of the number of tosses until n heads OR m tails.

    The support is exactly {min(n, m), ..., n+m-1} and the probabilities sum
    to 1; no truncation is involved.
    """
    _validate_targets(n, m)
    lo = min(n, m)
    hi = n + m - 1
    probs = tuple(_or_coefficient(coin, n, m, k) for k in range(lo, hi + 1))
    return Pmf(support_min=lo, probs=probs)


def _negbin_tail(target: int, success_p: Rational, k: int) -> Rational:
    """P(more than k tosses are needed to see ``target`` successes).

    Equals P(Binomial(k, success_p) < target), an exact tail of the
    negative-binomial toss count.
    """
    q = 1 - success_p
    return sum(
        (binomial(k, i) * success_p**i * q ** (k - i) for i in range(target)),
        Fraction(0),
    )


def pmf_and(
    coin: CoinSpec, n: int, m: int, epsilon: RationalLike = DEFAULT_EPSILON
) -> Pmf:
    """Truncated exact pmf of the number of tosses until n heads AND m tails.

    Probabilities are materialized from n+m up to the smallest K whose
    accumulated mass reaches 1 - epsilon.  The stored tail bound is the exact
    remaining mass; it is additionally certified against the union bound
    P(stop > K) <= P(heads goal needs > K) + P(tails goal needs > K), whose
    two sides are exact negative-binomial tails.
    """
    _validate_targets(n, m)
    eps = Fraction(epsilon)
    if eps <= 0:
        raise DomainError(f"epsilon must be positive, got {eps}")
    probs: list[Rational] = []
    acc = Fraction(0)
    k = n + m
    while acc < 1 - eps:
        v = _and_coefficient(coin, n, m, k)
        probs.append(v)
        acc += v
        k += 1
    last = k - 1
    tail = 1 - acc
    certificate = _negbin_tail(n, coin.p, last) + _negbin_tail(m, coin.q, last)
    if tail > certificate:
        raise AssertionError(
            "exact tail mass exceeds its negative-binomial certificate; "
            "the pmf coefficients are inconsistent"
        )
    return Pmf(
        support_min=n + m,
        probs=tuple(probs),
        truncated=True,
        tail_mass_bound=tail,
    )


def pgf_sum_closed_form(
    coin: CoinSpec, n: int, m: int, degree_cap: int
) -> Polynomial:
    """Taylor expansion of (qx/(1-px))^m + (px/(1-qx))^n up to degree_cap.

    This closed form equals F1 + F2, so its x^k coefficient must match
    P(OR stop at k) + P(AND stop at k) for every k; tests rely on that.
    """
    _validate_targets(n, m)
    if degree_cap < n + m:
        raise DomainError(
            f"degree_cap must be at least n+m={n + m}, got {degree_cap}"
        )
    p, q = coin.p, coin.q
    coeffs = [Fraction(0)] * (degree_cap + 1)
    for j in range(m, degree_cap + 1):
        coeffs[j] += binomial(j - 1, m - 1) * q**m * p ** (j - m)
    for j in range(n, degree_cap + 1):
        coeffs[j] += binomial(j - 1, n - 1) * p**n * q ** (j - n)
    return Polynomial(coeffs)
