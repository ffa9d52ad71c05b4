"""Exact prime counting: segmented sieve table and a sublinear counter.

Two interchangeable backends answer pi(x) exactly up to a configured limit:

* ``SIEVE_TABLE`` -- a segmented sieve of Eratosthenes materializes every
  prime <= limit into a sorted array; pi(x) is a binary search.  Memory is
  roughly 8 bytes per prime, so practical up to ~10^9.
* ``SUBLINEAR`` -- only the base primes <= sqrt(limit) are stored; each
  query runs a vectorized Lucy_Hedgehog / Legendre-style partial sieve in
  O(x^(3/4)) time and O(sqrt(x)) memory.

Both also provide exact Chebyshev theta/psi sums with compensated summation.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field

import numpy as np

_DEFAULT_MEM_BUDGET_MB = 4096
_SEGMENT_ODDS = 1 << 21  # odd numbers per sieve segment (~2 MB of mask)


class CounterError(ValueError):
    """Base class for prime-counter failures."""


class OutOfRangeError(CounterError):
    """Query argument exceeds the counter's configured limit."""


class MemoryBudgetError(CounterError):
    """Building the counter would exceed the memory budget."""


class Method(enum.Enum):
    SIEVE_TABLE = "sieve"
    SUBLINEAR = "sublinear"


def mem_budget_mb() -> int:
    """Sieve memory cap in MB, overridable via HL_MEM_BUDGET_MB."""
    raw = os.environ.get("HL_MEM_BUDGET_MB")
    if raw is None:
        return _DEFAULT_MEM_BUDGET_MB
    budget = int(raw)
    if budget <= 0:
        raise ValueError(f"HL_MEM_BUDGET_MB must be positive, got {raw!r}")
    return budget


def simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (plain sieve, small limits)."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def iter_prime_segments(limit: int, base_primes: np.ndarray | None = None):
    """Yield int64 arrays of primes covering 2..limit in ascending order.

    Odd-only segmented sieve; memory stays bounded by the segment size
    regardless of limit.
    """
    if limit < 2:
        return
    if base_primes is None:
        base_primes = simple_sieve(math.isqrt(limit))
    yield np.array([2], dtype=np.int64)

    span = 2 * _SEGMENT_ODDS
    odd_base = base_primes[base_primes > 2]
    low = 3
    while low <= limit:
        high = min(low + span, limit + 1)  # exclusive
        odd_count = (high - low + 1) // 2
        mask = np.ones(odd_count, dtype=bool)
        for p in odd_base:
            p = int(p)
            if p * p >= high:
                break
            start = max(p * p, ((low + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            if start < high:
                mask[(start - low) // 2 :: p] = False
        idx = np.flatnonzero(mask)
        if idx.size:
            yield (low + 2 * idx).astype(np.int64)
        low += span


def iroot(n: int, k: int) -> int:
    """floor(n^(1/k)) by Newton iteration with exact integer correction.

    Floating point alone misrounds near perfect powers; the correction
    loops guarantee r**k <= n < (r+1)**k.
    """
    if n < 0 or k < 1:
        raise ValueError(f"iroot requires n >= 0, k >= 1 (got n={n}, k={k})")
    if n in (0, 1) or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    r = int(round(n ** (1.0 / k)))
    if r < 1:
        r = 1
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def _kahan_log_sum(segments) -> float:
    """Compensated sum of log(p) over prime segments."""
    total = 0.0
    comp = 0.0
    for seg in segments:
        s = float(np.sum(np.log(seg.astype(np.float64))))
        y = s - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


@dataclass(frozen=True)
class ChebyshevValues:
    """theta(x) = sum log p over primes <= x; psi(x) over prime powers."""

    x: int
    theta: float
    psi: float


@dataclass
class PrimeCounter:
    """Immutable exact prime-counting oracle for arguments up to ``limit``.

    Safe for concurrent queries after construction; the sublinear query
    cache is append-only keyed by argument, so races are benign.
    """

    limit: int
    method: Method
    base_primes: np.ndarray
    _primes: np.ndarray | None = None  # full table (SIEVE_TABLE only)
    _cache: dict = field(default_factory=dict, repr=False)

    def _check_range(self, x: int, lo: int = 1) -> None:
        if not isinstance(x, (int, np.integer)):
            raise TypeError(f"argument must be an integer, got {type(x).__name__}")
        if x < lo:
            raise OutOfRangeError(f"argument {x} below minimum {lo}")
        if x > self.limit:
            raise OutOfRangeError(
                f"argument {x} exceeds counter limit {self.limit}; "
                "build a larger counter instead of approximating"
            )

    def pi(self, x: int) -> int:
        """Exact number of primes <= x, for 1 <= x <= limit."""
        self._check_range(int(x))
        x = int(x)
        if x < 2:
            return 0
        if self.method is Method.SIEVE_TABLE:
            return int(np.searchsorted(self._primes, x, side="right"))
        if x <= int(self.base_primes[-1]):
            return int(np.searchsorted(self.base_primes, x, side="right"))
        hit = self._cache.get(x)
        if hit is None:
            hit = _lucy_pi(x, self.base_primes)
            self._cache[x] = hit
        return hit

    def count_window(self, a: int, b: int) -> int:
        """Number of primes in the half-open window (a, b]."""
        a, b = int(a), int(b)
        if a > b:
            raise ValueError(f"window requires a <= b, got ({a}, {b})")
        self._check_range(b)
        self._check_range(a)
        return self.pi(b) - self.pi(a)

    def chebyshev(self, x: int) -> ChebyshevValues:
        """Exact theta(x) and psi(x) with compensated log summation."""
        x = int(x)
        self._check_range(x, lo=2)
        theta = self._theta(x)
        psi = theta
        k = 2
        while True:
            r = iroot(x, k)
            if r < 2:
                break
            psi += self._theta(r)
            k += 1
        return ChebyshevValues(x=x, theta=theta, psi=psi)

    def _theta(self, x: int) -> float:
        if x < 2:
            return 0.0
        if self.method is Method.SIEVE_TABLE:
            n = int(np.searchsorted(self._primes, x, side="right"))
            step = 1 << 20
            segs = (self._primes[i : min(i + step, n)] for i in range(0, n, step))
            return _kahan_log_sum(segs)
        segs = (
            seg[seg <= x]
            for seg in iter_prime_segments(x, self.base_primes)
        )
        return _kahan_log_sum(segs)


def _lucy_pi(n: int, base_primes: np.ndarray) -> int:
    """pi(n) by the Lucy_Hedgehog partial-sieve recurrence, vectorized.

    Maintains S(v) = count of integers in [2, v] not struck by any prime
    processed so far, for v in {1..r} and {n//i : i <= r}, r = isqrt(n).
    After processing all primes <= r, S(n) = pi(n).
    """
    r = math.isqrt(n)
    # small[v-1] = S(v) for v in 1..r; large[i-1] = S(n // i) for i in 1..r
    small = np.arange(0, r, dtype=np.int64)
    idx = np.arange(1, r + 1, dtype=np.int64)
    large = n // idx - 1

    for p in base_primes:
        p = int(p)
        if p * p > n:
            break
        sp_1 = int(small[p - 2]) if p >= 2 else 0  # S(p-1)
        if int(small[p - 1]) == sp_1:
            continue  # p already struck: not prime (cannot happen with true primes)
        p2 = p * p
        imax = min(r, n // p2)
        if imax >= 1:
            ip = idx[:imax] * p
            vals = np.empty(imax, dtype=np.int64)
            big = ip <= r
            vals[big] = large[ip[big] - 1]
            sm = ~big
            vals[sm] = small[n // ip[sm] - 1]
            large[:imax] -= vals - sp_1
        if p2 <= r:
            v = np.arange(p2, r + 1, dtype=np.int64)
            vals = small[v // p - 1].copy()
            small[p2 - 1 :] -= vals - sp_1
    return int(large[0])


def _sieve_table_bytes(limit: int) -> int:
    """Rough peak memory for a full prime table build."""
    approx_primes = int(1.26 * limit / max(math.log(limit), 1.0)) + 100
    return approx_primes * 8 + _SEGMENT_ODDS


def build_counter(limit: int, method: Method | str = Method.SIEVE_TABLE) -> PrimeCounter:
    """Build an exact counter answering pi(x) for all 2 <= x <= limit.

    Raises MemoryBudgetError if the estimated footprint exceeds the
    HL_MEM_BUDGET_MB budget (default 4096 MB).
    """
    if isinstance(method, str):
        method = Method(method)
    limit = int(limit)
    if limit < 4:
        raise ValueError(f"counter limit must be >= 4, got {limit}")

    budget_mb = mem_budget_mb()
    base = simple_sieve(math.isqrt(limit))

    if method is Method.SUBLINEAR:
        need = base.nbytes + 4 * (math.isqrt(limit) + 1) * 8
        if need > budget_mb * 1024 * 1024:
            raise MemoryBudgetError(
                f"sublinear counter for limit {limit} needs ~{need >> 20} MB, "
                f"budget is {budget_mb} MB (HL_MEM_BUDGET_MB)"
            )
        return PrimeCounter(limit=limit, method=method, base_primes=base)

    need = _sieve_table_bytes(limit)
    if need > budget_mb * 1024 * 1024:
        raise MemoryBudgetError(
            f"sieve table for limit {limit} needs ~{need >> 20} MB, "
            f"budget is {budget_mb} MB (HL_MEM_BUDGET_MB)"
        )
    chunks = list(iter_prime_segments(limit, base))
    primes = np.concatenate(chunks) if chunks else np.array([], dtype=np.int64)
    return PrimeCounter(limit=limit, method=method, base_primes=base, _primes=primes)
