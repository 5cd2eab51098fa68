"""Independent brute-force oracles used by the tests.

Everything here is deliberately naive: literal enumeration of toss
sequences, lattice-path dynamic programming with exact rationals, and
direct definitional sums.  None of it shares code with the library paths it
checks.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from fractions import Fraction


def enumerate_or_pmf(p: Fraction, n: int, m: int) -> dict[int, Fraction]:
    """Stop-time pmf of the OR rule by enumerating all length-(n+m-1) sequences.

    Every sequence of n+m-1 tosses decides the rule; the probability of each
    full sequence is credited to its stopping toss (the continuations past
    the stop sum to 1, so this equals the stop-time probability).
    """
    q = 1 - p
    length = n + m - 1
    out: dict[int, Fraction] = defaultdict(lambda: Fraction(0))
    for bits in itertools.product((0, 1), repeat=length):
        heads = tails = 0
        stop = None
        for i, b in enumerate(bits, start=1):
            heads += b
            tails += 1 - b
            if heads >= n or tails >= m:
                stop = i
                break
        assert stop is not None
        h_total = sum(bits)
        out[stop] += p**h_total * q ** (length - h_total)
    return dict(out)


def enumerate_and_pmf(
    p: Fraction, n: int, m: int, length: int
) -> dict[int, Fraction]:
    """Stop-time pmf of the AND rule by literal enumeration up to ``length``.

    Only stops occurring within ``length`` tosses are credited; feasible for
    length up to ~20.
    """
    q = 1 - p
    out: dict[int, Fraction] = defaultdict(lambda: Fraction(0))
    for bits in itertools.product((0, 1), repeat=length):
        heads = tails = 0
        stop = None
        for i, b in enumerate(bits, start=1):
            heads += b
            tails += 1 - b
            if heads >= n and tails >= m:
                stop = i
                break
        if stop is None:
            continue
        h_total = sum(bits)
        out[stop] += p**h_total * q ** (length - h_total)
    return dict(out)


def dp_and_pmf(p: Fraction, n: int, m: int, k_max: int) -> dict[int, Fraction]:
    """Stop-time pmf of the AND rule by exact lattice-path DP up to k_max.

    State is the (heads, tails) count of a path that has not yet satisfied
    both goals; mass entering the satisfied region at toss k is P(stop = k).
    """
    q = 1 - p
    active: dict[tuple[int, int], Fraction] = {(0, 0): Fraction(1)}
    out: dict[int, Fraction] = {}
    for k in range(1, k_max + 1):
        nxt: dict[tuple[int, int], Fraction] = defaultdict(lambda: Fraction(0))
        absorbed = Fraction(0)
        for (h, t), w in active.items():
            for b, w_step in ((1, p), (0, q)):
                h2, t2 = h + b, t + (1 - b)
                w2 = w * w_step
                if h2 >= n and t2 >= m:
                    absorbed += w2
                else:
                    nxt[(h2, t2)] += w2
        out[k] = absorbed
        active = dict(nxt)
    return out


def partition_count(items: int, blocks: int) -> int:
    """Number of ways to partition a set of ``items`` into ``blocks`` nonempty
    blocks, by literal enumeration of block assignments."""
    if items == 0:
        return 1 if blocks == 0 else 0
    count = 0
    for assignment in itertools.product(range(blocks), repeat=items):
        used = set(assignment)
        if len(used) != blocks:
            continue
        # canonical ordering: block labels must appear in first-seen order
        seen: list[int] = []
        for a in assignment:
            if a not in seen:
                seen.append(a)
        if seen == sorted(seen):
            count += 1
    return count


def pascal_binomial(n: int, k: int) -> int:
    """C(n, k) built strictly by the additive Pascal recurrence."""
    if k < 0 or k > n:
        return 0
    row = [1]
    for _ in range(n):
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    return row[k]


def segner_catalan(upto: int) -> list[int]:
    """Catalan numbers c_0..c_upto by the Segner convolution recurrence."""
    cats = [1]
    for j in range(upto):
        cats.append(sum(cats[i] * cats[j - i] for i in range(j + 1)))
    return cats
