"""Expected duration of both stopping rules, by several independent exact routes.

Let L(n, m) denote the expected number of tosses, under either rule, until
n heads or/and m tails.  Both rules satisfy the same pair of third-order pure
recurrences, one advancing n at fixed m and one advancing m at fixed n:

    L(n, m) = (p*n + p*m - 2p + 2n - 2)/(n - 1) * L(n-1, m)
            - (2p*n + 2p*m - 4p + n - 1)/(n - 1) * L(n-2, m)
            + p*(m - 2 + n)/(n - 1)              * L(n-3, m)

    L(n, m) = -(p*n + p*m - 2p - n - 3m + 4)/(m - 1)   * L(n, m-1)
            + (2p*n + 2p*m - 4p - 2n - 3m + 5)/(m - 1) * L(n, m-2)
            - (p - 1)*(m - 2 + n)/(m - 1)              * L(n, m-3)

The two rules differ only in their 3x3 grid of initial conditions.  The
recurrences have denominators n-1 and m-1, so they are only applied for
index >= 4; entries with both indices <= 3 come from the seed grid.  Rows
n in {1, 2, 3} are first extended along m, then the n-recurrence runs up the
final column.

The independent routes (direct summation of k*P(k), the balanced-bias
closed form, and the Catalan sum for the symmetric OR case) are used to
cross-check the recurrence to exact equality in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .exact import DomainError, Rational, binomial, catalan
from .pgf import CoinSpec, StopRule, pmf_or

__all__ = [
    "Method",
    "ExpectationResult",
    "expectation_recurrence",
    "expectation_direct",
    "closed_form_balanced",
    "asymptotic_balanced",
    "catalan_sum_or",
    "expected_margin",
    "binomial_partial_expectation",
]


class Method(Enum):
    RECURRENCE = "recurrence"
    DIRECT_SUM = "direct"
    CLOSED_FORM = "closed"
    CATALAN_SUM = "catalan"


@dataclass(frozen=True)
class ExpectationResult:
    value: Rational
    method: Method
    rule: StopRule


# Seed grids, indexed by (n, m) for 1 <= n, m <= 3.  Entries are coefficient
# tuples of polynomials in p, ascending powers.  The OR values are the
# polynomials themselves; the AND values are the polynomials divided by
# p*(1-p).
_OR_SEED = {
    (1, 1): (1,),
    (1, 2): (2, -1),
    (1, 3): (3, -3, 1),
    (2, 1): (1, 1),
    (2, 2): (2, 2, -2),
    (2, 3): (3, 3, -7, 3),
    (3, 1): (1, 1, 1),
    (3, 2): (2, 2, 2, -3),
    (3, 3): (3, 3, 3, -12, 6),
}

_AND_SEED_NUMERATOR = {
    (1, 1): (1, -1, 1),
    (1, 2): (1, -1, 3, -1),
    (1, 3): (1, -1, 6, -4, 1),
    (2, 1): (2, -2, 0, 1),
    (2, 2): (2, -2, 0, 4, -2),
    (2, 3): (2, -2, 0, 10, -10, 3),
    (3, 1): (3, -3, 0, 0, 1),
    (3, 2): (3, -3, 0, 0, 5, -3),
    (3, 3): (3, -3, 0, 0, 15, -18, 6),
}


def _poly_at(coeffs: tuple[int, ...], p: Rational) -> Rational:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * p + c
    return acc


def _seed_value(rule: StopRule, n: int, m: int, p: Rational) -> Rational:
    if rule is StopRule.OR:
        return _poly_at(_OR_SEED[(n, m)], p)
    return _poly_at(_AND_SEED_NUMERATOR[(n, m)], p) / (p * (1 - p))


def _validate_targets(n: int, m: int) -> None:
    if n < 1 or m < 1:
        raise DomainError(f"targets must be >= 1, got n={n}, m={m}")


# The recurrence is evaluated over scaled integers rather than Fractions:
# with p = a/b in lowest terms, every expectation L(i, j) has denominator
# dividing K * b**(i+j-1), where K = 1 for the OR rule and K = a*(b-a) for
# the AND rule (the seed grids carry a p*(1-p) denominator).  Writing
# W(i, j) = L(i, j) * K * b**(i+j-1), both recurrences become integer
# combinations followed by an exact division by (index - 1).  This keeps the
# hot path free of gcd normalization; the final Fraction reduces once.


def _scaled_seed(rule: StopRule, n: int, m: int, a: int, b: int) -> int:
    scale = (1 if rule is StopRule.OR else a * (b - a)) * b ** (n + m - 1)
    w = _seed_value(rule, n, m, Fraction(a, b)) * scale
    if w.denominator != 1:
        raise AssertionError("seed value does not clear the common denominator")
    return w.numerator


def _extend_along_m(row: list[int], n: int, a: int, b: int, m: int) -> int:
    """From scaled seeds W(n, 1..3), advance the m-recurrence to W(n, m)."""
    if m <= 3:
        return row[m - 1]
    w1, w2, w3 = row
    for j in range(4, m + 1):
        s = n + j - 2
        c1 = b * (n + 3 * j - 4) - a * s
        c2 = 2 * a * s - b * (2 * n + 3 * j - 5)
        c3 = (b - a) * s
        num = c1 * w3 + b * c2 * w2 + b * b * c3 * w1
        w, rem = divmod(num, j - 1)
        if rem:
            raise AssertionError("m-recurrence step is not an exact division")
        w1, w2, w3 = w2, w3, w
    return w3


def _extend_along_n(col: list[int], m: int, a: int, b: int, n: int) -> int:
    """From scaled values W(1..3, m), advance the n-recurrence to W(n, m)."""
    v1, v2, v3 = col
    for i in range(4, n + 1):
        s = i + m - 2
        c1 = a * s + 2 * b * (i - 1)
        c2 = 2 * a * s + b * (i - 1)
        c3 = a * s
        num = c1 * v3 - b * c2 * v2 + b * b * c3 * v1
        v, rem = divmod(num, i - 1)
        if rem:
            raise AssertionError("n-recurrence step is not an exact division")
        v1, v2, v3 = v2, v3, v
    return v3


def expectation_recurrence(
    coin: CoinSpec, rule: StopRule, n: int, m: int
) -> ExpectationResult:
    """Exact expected duration via the third-order pure recurrences.

    Rows n in {1, 2, 3} are extended along m first (the m-recurrence needs
    three predecessors at fixed n), then the n-recurrence climbs to the
    target row; both recurrences are applied only from index 4 up, where
    their denominators cannot vanish.
    """
    _validate_targets(n, m)
    p = coin.p
    a, b = p.numerator, p.denominator
    if n <= 3 and m <= 3:
        return ExpectationResult(_seed_value(rule, n, m, p), Method.RECURRENCE, rule)
    if n <= 3:
        row = [_scaled_seed(rule, n, j, a, b) for j in (1, 2, 3)]
        w = _extend_along_m(row, n, a, b, m)
    else:
        col = []
        for r in (1, 2, 3):
            row = [_scaled_seed(rule, r, j, a, b) for j in (1, 2, 3)]
            col.append(_extend_along_m(row, r, a, b, m))
        w = _extend_along_n(col, m, a, b, n)
    scale = (1 if rule is StopRule.OR else a * (b - a)) * b ** (n + m - 1)
    return ExpectationResult(Fraction(w, scale), Method.RECURRENCE, rule)


def expectation_direct(
    coin: CoinSpec, rule: StopRule, n: int, m: int
) -> ExpectationResult:
    """Expected duration from the definition as a sum over the pmf.

    The OR expectation is the finite sum of k * P(stop at k).  The AND
    expectation is recovered exactly through the identity
    L_or + L_and = n/p + m/q, which avoids truncating an infinite series.
    """
    _validate_targets(n, m)
    mean_or = pmf_or(coin, n, m).mean()
    if rule is StopRule.OR:
        value = mean_or
    else:
        value = n / coin.p + m / coin.q - mean_or
    return ExpectationResult(value, Method.DIRECT_SUM, rule)


def closed_form_balanced(a: int, b: int, n: int, rule: StopRule) -> Rational:
    """Exact expectation for targets (a*n, b*n) with matched bias p = a/(a+b).

    Evaluates (a+b)*n * (1 -/+ T) with
    T = ((a+b)n)! / ((an)! (bn)!) * (a^a b^b / (a+b)^(a+b))^n,
    minus for the OR rule, plus for the AND rule.
    """
    if a < 1 or b < 1 or n < 1:
        raise DomainError(f"closed form requires a, b, n >= 1, got {(a, b, n)}")
    s = (a + b) * n
    t = Fraction(
        math.factorial(s), math.factorial(a * n) * math.factorial(b * n)
    ) * Fraction(a**a * b**b, (a + b) ** (a + b)) ** n
    if rule is StopRule.OR:
        return s * (1 - t)
    return s * (1 + t)


def asymptotic_balanced(a: int, b: int, n: int, rule: StopRule) -> float:
    """Large-n approximation (a+b)n * (1 -/+ sqrt((a+b)/(2ab*pi)) / sqrt(n))."""
    if a < 1 or b < 1 or n < 1:
        raise DomainError(f"asymptotic requires a, b, n >= 1, got {(a, b, n)}")
    s = (a + b) * n
    corr = math.sqrt((a + b) / (2 * a * b * math.pi)) / math.sqrt(n)
    if rule is StopRule.OR:
        return s * (1 - corr)
    return s * (1 + corr)


def catalan_sum_or(coin: CoinSpec, n: int) -> Rational:
    """Symmetric OR expectation as the Catalan sum n * sum_j Cat_j (pq)^j.

    Equivalent, through Wald's identity, to the stopped-margin formulation;
    exact for every rational bias.
    """
    if n < 1:
        raise DomainError(f"catalan_sum_or requires n >= 1, got {n}")
    pq = coin.p * coin.q
    power = Fraction(1)
    total = Fraction(0)
    for j in range(n):
        total += catalan(j) * power
        power *= pq
    return n * total


def expected_margin(coin: CoinSpec, n: int, m: int) -> Rational:
    """Exact E[heads - tails] at the OR stopping time.

    Summed over the two ways the rule can fire: the n-th head arrives with
    t < m tails on the board (margin n - t), or the m-th tail arrives with
    h < n heads (margin h - m).
    """
    _validate_targets(n, m)
    p, q = coin.p, coin.q
    total = Fraction(0)
    for t in range(m):
        total += binomial(n + t - 1, n - 1) * p**n * q**t * (n - t)
    for h in range(n):
        total += binomial(h + m - 1, m - 1) * p**h * q**m * (h - m)
    return total


def binomial_partial_expectation(N: int, p: Rational, k: int) -> Rational:
    """E[(Np - X) * 1{X <= k}] for X ~ Binomial(N, p), in closed form.

    Returns N! / ((N-k-1)! k!) * p^(k+1) * (1-p)^(N-k), which telescopes the
    defining sum sum_{i<=k} C(N, i) p^i (1-p)^(N-i) (Np - i).
    """
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if not 0 <= k < N:
        raise DomainError(f"k must satisfy 0 <= k < N, got k={k}, N={N}")
    p = Fraction(p)
    q = 1 - p
    coeff = Fraction(math.factorial(N), math.factorial(N - k - 1) * math.factorial(k))
    return coeff * p ** (k + 1) * q ** (N - k)
