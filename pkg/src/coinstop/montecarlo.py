"""Seeded Monte Carlo oracle for the stopping rules.

Toss streams are simulated in vectorized chunks.  Each chunk of trials draws
from its own PCG64 substream, derived from (seed, chunk index), so results
are bit-for-bit reproducible for a given SimConfig no matter how chunks are
scheduled.  The bias is converted to double precision for sampling; this
path is a statistical oracle, not an exact one, and all comparisons against
exact values are made in units of standard errors.

The key per-trial quantities are the toss index of the n-th head and of the
m-th tail on the same stream.  Their minimum is the OR stopping time, their
maximum the AND stopping time, and the winner/laggard identity gives the
heads-minus-tails margin at the stop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exact import DomainError
from .pgf import CoinSpec, GoalSpec, StopRule

__all__ = [
    "SimConfig",
    "SimSummary",
    "T1T2Report",
    "XYReport",
    "WaldReport",
    "simulate",
    "experiment_t1_t2",
    "experiment_xy",
    "experiment_wald",
]

DEFAULT_CHUNK_SIZE = 16384

# At most this many tosses are materialized per column block (per chunk),
# to bound peak memory during long-path simulations.
_BLOCK_ELEMENT_BUDGET = 1 << 23

_MAX_TRIALS = 2**63 - 1


@dataclass(frozen=True)
class SimConfig:
    """Fully determines a simulation run, including its random stream."""

    coin: CoinSpec
    goal: GoalSpec
    trials: int
    seed: int
    chunk_size: int = DEFAULT_CHUNK_SIZE

    def __post_init__(self) -> None:
        if not 1 <= self.trials <= _MAX_TRIALS:
            raise DomainError(
                f"trials must be in [1, {_MAX_TRIALS}], got {self.trials}"
            )
        if self.chunk_size < 1:
            raise DomainError(f"chunk_size must be >= 1, got {self.chunk_size}")
        if self.seed < 0:
            raise DomainError(f"seed must be >= 0, got {self.seed}")


@dataclass(frozen=True)
class SimSummary:
    """Empirical statistics of the simulated stopping times."""

    trials: int
    mean: float
    variance: float  # unbiased (ddof=1)
    standardized_moments: tuple[float, ...]  # orders 1..8 of (x - mean)/sd
    histogram: dict[int, int]
    margin_mean: float  # mean of heads - tails at the stop
    se_mean: float  # standard error of `mean`


def _chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(chunk_index,))
    )


def _chunk_sizes(trials: int, chunk_size: int) -> list[int]:
    full, rest = divmod(trials, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


# Head counts are accumulated in int32; paths longer than this are rejected.
_MAX_PATH = 2**31 - 2**24


def _toss_block(
    rng: np.random.Generator, p: float, rows: int, width: int
) -> np.ndarray:
    """A rows x width block of tosses as uint8 (1 = head)."""
    if p == 0.5:
        # one random bit per toss; much faster than the float path
        nbytes = (width + 7) // 8
        raw = rng.integers(0, 256, size=(rows, nbytes), dtype=np.uint8)
        return np.unpackbits(raw, axis=1)[:, :width]
    return (rng.random((rows, width)) < p).view(np.uint8)


def _sample_or_chunk(
    rng: np.random.Generator, p: float, n: int, m: int, rows: int
) -> tuple[np.ndarray, np.ndarray]:
    """Stopping times and stop margins for the OR rule, one chunk of rows.

    The OR time never exceeds n + m - 1, so the required stream length is
    known in advance; columns are generated in bounded blocks.
    """
    horizon = n + m - 1
    if horizon > _MAX_PATH:
        raise DomainError(f"targets too large to simulate: n+m-1={horizon}")
    # count of proper prefixes on which neither goal is met  ->  stop - 1
    before_stop = np.zeros(rows, dtype=np.int64)
    # count of prefixes with fewer than n heads  ->  nu_h - 1 (if reached)
    before_nth_head = np.zeros(rows, dtype=np.int64)
    heads = np.zeros(rows, dtype=np.int32)
    tossed = 0
    while tossed < horizon:
        width = min(horizon - tossed, max(1, _BLOCK_ELEMENT_BUDGET // rows))
        bits = _toss_block(rng, p, rows, width)
        total_h = np.cumsum(bits, axis=1, dtype=np.int32)
        total_h += heads[:, None]
        head_short = total_h < n
        before_nth_head += head_short.sum(axis=1)
        # tails short of m  <=>  total_h > (tossed - m) + j  for toss j
        steps = np.arange(1, width + 1, dtype=np.int32)
        tail_short = total_h > (tossed - m) + steps[None, :]
        before_stop += (head_short & tail_short).sum(axis=1)
        heads = total_h[:, -1]
        tossed += width
    stop = before_stop + 1
    heads_won = before_nth_head == before_stop  # n-th head fell on the stop toss
    margin = np.where(heads_won, 2 * n - stop, stop - 2 * m)
    return stop, margin


def _sample_goal_pair_chunk(
    rng: np.random.Generator, p: float, n: int, m: int, rows: int
) -> tuple[np.ndarray, np.ndarray]:
    """Toss indices (nu_h, nu_t) of the n-th head and m-th tail per stream.

    Streams are extended block by block until every row has reached both
    goals.  Because the head count along a stream is nondecreasing, nu_h
    equals one plus the number of prefixes with fewer than n heads, which
    stops growing once the goal is hit; likewise for tails.
    """
    q = 1.0 - p
    before_nth_head = np.zeros(rows, dtype=np.int64)
    before_mth_tail = np.zeros(rows, dtype=np.int64)
    heads = np.zeros(rows, dtype=np.int32)
    tossed = 0
    # expected worst-side requirement plus a wide buffer; stragglers loop
    est = max(
        n / p + 10.0 * math.sqrt(n * q) / p,
        m / q + 10.0 * math.sqrt(m * p) / q,
    )
    if est + 16 > _MAX_PATH:
        raise DomainError("targets too extreme to simulate: paths too long")
    remaining = int(est) + 16
    while True:
        width = min(remaining, max(1, _BLOCK_ELEMENT_BUDGET // rows))
        bits = _toss_block(rng, p, rows, width)
        total_h = np.cumsum(bits, axis=1, dtype=np.int32)
        total_h += heads[:, None]
        before_nth_head += (total_h < n).sum(axis=1)
        # tails short of m  <=>  total_h > (tossed - m) + j  for toss j
        steps = np.arange(1, width + 1, dtype=np.int32)
        before_mth_tail += (total_h > (tossed - m) + steps[None, :]).sum(axis=1)
        heads = total_h[:, -1]
        tossed += width
        if tossed > _MAX_PATH:
            raise DomainError("simulated paths exceed the supported length")
        if (heads >= n).all() and (tossed - heads >= m).all():
            break
        remaining = max(remaining - width, 256)
    return before_nth_head + 1, before_mth_tail + 1


def _sample_and_chunk(
    rng: np.random.Generator, p: float, n: int, m: int, rows: int
) -> tuple[np.ndarray, np.ndarray]:
    """Stopping times and stop margins for the AND rule, one chunk of rows."""
    nu_h, nu_t = _sample_goal_pair_chunk(rng, p, n, m, rows)
    stop = np.maximum(nu_h, nu_t)
    heads_last = nu_h > nu_t
    margin = np.where(heads_last, 2 * n - stop, stop - 2 * m)
    return stop, margin


def _sample_stops(config: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """All stopping times and margins for a config, chunk by chunk."""
    p = float(config.coin.p)
    n, m = config.goal.n_heads, config.goal.m_tails
    sampler = (
        _sample_or_chunk if config.goal.rule is StopRule.OR else _sample_and_chunk
    )
    stops = []
    margins = []
    for chunk_index, rows in enumerate(_chunk_sizes(config.trials, config.chunk_size)):
        rng = _chunk_rng(config.seed, chunk_index)
        stop, margin = sampler(rng, p, n, m, rows)
        stops.append(stop)
        margins.append(margin)
    return np.concatenate(stops), np.concatenate(margins)


def simulate(config: SimConfig) -> SimSummary:
    """Run the seeded simulation and summarize the stopping times."""
    stops, margins = _sample_stops(config)
    trials = int(stops.size)
    mean = float(stops.mean())
    if trials > 1:
        variance = float(stops.var(ddof=1))
    else:
        variance = 0.0
    sd = math.sqrt(variance)
    if sd > 0:
        z = (stops - mean) / sd
        standardized = tuple(float((z**r).mean()) for r in range(1, 9))
    else:
        standardized = tuple(0.0 for _ in range(8))
    values, counts = np.unique(stops, return_counts=True)
    histogram = {int(v): int(c) for v, c in zip(values, counts)}
    return SimSummary(
        trials=trials,
        mean=mean,
        variance=variance,
        standardized_moments=standardized,
        histogram=histogram,
        margin_mean=float(margins.mean()),
        se_mean=sd / math.sqrt(trials) if trials > 0 else 0.0,
    )


def _pair_grid(
    n: int, trials: int, seed: int, chunk_size: int
) -> tuple[np.ndarray, np.ndarray]:
    """(nu_h, nu_t) samples for the fair symmetric case, all trials."""
    nu_h_parts = []
    nu_t_parts = []
    for chunk_index, rows in enumerate(_chunk_sizes(trials, chunk_size)):
        rng = _chunk_rng(seed, chunk_index)
        nu_h, nu_t = _sample_goal_pair_chunk(rng, 0.5, n, n, rows)
        nu_h_parts.append(nu_h)
        nu_t_parts.append(nu_t)
    return np.concatenate(nu_h_parts), np.concatenate(nu_t_parts)


def _abs_z_raw_moment(r: int) -> float:
    """E|Z|^r for standard normal Z."""
    if r % 2 == 0:
        out = 1.0
        for k in range(r - 1, 1, -2):
            out *= k
        return out
    s = (r - 1) // 2
    return 2**s * math.factorial(s) * math.sqrt(2.0 / math.pi)


@dataclass(frozen=True)
class T1T2Report:
    """Standardized fair-coin stopping times against their half-normal limits.

    ``x_moments``/``y_moments`` are the first four raw moments of
    (X - 2n)/sqrt(n) and (Y - 2n)/sqrt(n); the references are the moments of
    -sqrt(2)|Z| and +sqrt(2)|Z|.
    """

    n: int
    trials: int
    seed: int
    x_moments: tuple[float, float, float, float]
    y_moments: tuple[float, float, float, float]
    x_reference: tuple[float, float, float, float]
    y_reference: tuple[float, float, float, float]
    x_gap_mean: float  # mean of (2n - X)/sqrt(n), limit 2/sqrt(pi)
    x_gap_se: float
    x_max: int  # never exceeds 2n
    y_min: int  # never below 2n


def experiment_t1_t2(
    n: int, trials: int, seed: int, chunk_size: int = DEFAULT_CHUNK_SIZE
) -> T1T2Report:
    """Empirical check that (X-2n)/sqrt(n) and (Y-2n)/sqrt(n) match ∓sqrt(2)|Z|.

    Meaningful for large n (the limit statements are asymptotic); n >= 1000
    is the intended scale.
    """
    if n < 1 or trials < 1:
        raise DomainError("n and trials must be >= 1")
    nu_h, nu_t = _pair_grid(n, trials, seed, chunk_size)
    x = np.minimum(nu_h, nu_t)
    y = np.maximum(nu_h, nu_t)
    sqrt_n = math.sqrt(n)
    zx = (x - 2.0 * n) / sqrt_n
    zy = (y - 2.0 * n) / sqrt_n
    x_moms = tuple(float((zx**r).mean()) for r in range(1, 5))
    y_moms = tuple(float((zy**r).mean()) for r in range(1, 5))
    ref = [2.0 ** (r / 2.0) * _abs_z_raw_moment(r) for r in range(1, 5)]
    x_ref = tuple((-1.0) ** r * v for r, v in zip(range(1, 5), ref))
    y_ref = tuple(ref)
    gap = -zx
    return T1T2Report(
        n=n,
        trials=trials,
        seed=seed,
        x_moments=x_moms,
        y_moments=y_moms,
        x_reference=x_ref,
        y_reference=y_ref,
        x_gap_mean=float(gap.mean()),
        x_gap_se=float(gap.std(ddof=1) / math.sqrt(trials)),
        x_max=int(x.max()),
        y_min=int(y.min()),
    )


@dataclass(frozen=True)
class XYReport:
    """Joint fluctuation (X + Y - 4n)/n^(1/4) on coupled paths.

    The limit law is 2^(3/4) |Z|^(1/2) W with independent standard normals
    Z, W, whose mean is 0 and variance 2^(3/2) E|Z| = 4/sqrt(pi).
    """

    n: int
    trials: int
    seed: int
    mean: float
    variance: float
    se_mean: float
    reference_mean: float
    reference_variance: float


def experiment_xy(
    n: int, trials: int, seed: int, chunk_size: int = DEFAULT_CHUNK_SIZE
) -> XYReport:
    """Empirical law of the coupled sum fluctuation at scale n^(1/4).

    X + Y equals nu_h + nu_t pathwise, so the statistic is computed from the
    goal-hitting pair directly.  Intended for n >= 10^4.
    """
    if n < 1 or trials < 1:
        raise DomainError("n and trials must be >= 1")
    nu_h, nu_t = _pair_grid(n, trials, seed, chunk_size)
    d = (nu_h + nu_t - 4.0 * n) / n**0.25
    return XYReport(
        n=n,
        trials=trials,
        seed=seed,
        mean=float(d.mean()),
        variance=float(d.var(ddof=1)),
        se_mean=float(d.std(ddof=1) / math.sqrt(trials)),
        reference_mean=0.0,
        reference_variance=4.0 / math.sqrt(math.pi),
    )


@dataclass(frozen=True)
class WaldReport:
    """Empirical stopped margin against the exact Wald product (p-q)*L_or."""

    p: float
    n: int
    m: int
    trials: int
    seed: int
    margin_mean: float
    margin_se: float
    exact_margin: float
    exact_wald_product: float


def experiment_wald(
    coin: CoinSpec,
    n: int,
    m: int,
    trials: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> WaldReport:
    """Compare the simulated OR-rule stop margin with its exact expectation."""
    from .duration import expectation_recurrence, expected_margin

    config = SimConfig(
        coin=coin,
        goal=GoalSpec(StopRule.OR, n, m),
        trials=trials,
        seed=seed,
        chunk_size=chunk_size,
    )
    stops, margins = _sample_stops(config)
    exact = expected_margin(coin, n, m)
    l_or = expectation_recurrence(coin, StopRule.OR, n, m).value
    wald = (coin.p - coin.q) * l_or
    return WaldReport(
        p=float(coin.p),
        n=n,
        m=m,
        trials=trials,
        seed=seed,
        margin_mean=float(margins.mean()),
        margin_se=float(margins.std(ddof=1) / math.sqrt(trials)),
        exact_margin=float(exact),
        exact_wald_product=float(wald),
    )
