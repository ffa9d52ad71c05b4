"""Slow, independent trial-division prime counting oracle.

Shares no code with the sieve backends: its divisor list is built by pure
trial division and counting is a plain sweep.  Exists solely so the fast
counters can be checked against something that is obviously correct.
Soft-capped at 10^8; a numba kernel keeps the big sweeps tolerable.
"""

from __future__ import annotations

import numpy as np
from numba import njit

ORACLE_CAP = 10**8


def is_prime_trial(n: int) -> bool:
    """Primality by naive trial division, no sieve involved."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _trial_primes_upto(limit: int) -> list[int]:
    return [n for n in range(2, limit + 1) if is_prime_trial(n)]


@njit(cache=True)
def _sweep_counts(thresholds: np.ndarray, divisors: np.ndarray) -> np.ndarray:
    """pi at each sorted threshold via one trial-division sweep."""
    out = np.zeros(thresholds.size, dtype=np.int64)
    count = 0
    ti = 0
    top = thresholds[-1]
    for m in range(2, top + 1):
        while ti < thresholds.size and thresholds[ti] < m:
            out[ti] = count
            ti += 1
        composite = False
        for j in range(divisors.size):
            p = divisors[j]
            if p * p > m:
                break
            if m % p == 0:
                composite = m != p
                break
        if not composite:
            count += 1
    while ti < thresholds.size:
        out[ti] = count
        ti += 1
    return out


def pi_oracle_batch(xs) -> list[int]:
    """Trial-division pi(x) for every x, amortized over one sweep."""
    xs = [int(x) for x in xs]
    if not xs:
        return []
    top = max(xs)
    if top > ORACLE_CAP:
        raise ValueError(f"oracle capped at {ORACLE_CAP}, asked for {top}")
    if top < 2:
        return [0] * len(xs)
    order = np.argsort(np.array(xs, dtype=np.int64), kind="stable")
    sorted_xs = np.array([xs[i] for i in order], dtype=np.int64)
    divisors = np.array(_trial_primes_upto(int(top**0.5) + 1), dtype=np.int64)
    if divisors.size == 0:
        divisors = np.array([2], dtype=np.int64)
    counts = _sweep_counts(sorted_xs, divisors)
    out = [0] * len(xs)
    for pos, i in enumerate(order):
        out[int(i)] = int(counts[pos])
    return out


def pi_oracle(x: int) -> int:
    """Exact pi(x) by trial division (slow by design, cap 10^8)."""
    return pi_oracle_batch([x])[0]
