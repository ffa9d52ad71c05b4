import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hlprimes.oracle import pi_oracle, pi_oracle_batch
from hlprimes.sieve import (
    Method,
    MemoryBudgetError,
    OutOfRangeError,
    build_counter,
    iroot,
    simple_sieve,
)


def test_pi_small_pinned(counter_1e6):
    # pinned from one run of the trial-division oracle
    assert counter_1e6.pi(2) == 1
    assert counter_1e6.pi(10) == 4
    assert counter_1e6.pi(100) == 25
    assert counter_1e6.pi(10**4) == 1229
    assert counter_1e6.pi(10**6) == 78498
    assert counter_1e6.pi(1) == 0


def test_build_tiny():
    c = build_counter(4, Method.SIEVE_TABLE)
    assert c.pi(4) == 2
    with pytest.raises(ValueError):
        build_counter(3, Method.SIEVE_TABLE)


def test_pi_out_of_range(counter_1e6):
    with pytest.raises(OutOfRangeError):
        counter_1e6.pi(10**6 + 1)
    with pytest.raises(OutOfRangeError):
        counter_1e6.pi(0)


def test_pi_monotone_nondecreasing(counter_1e6):
    xs = sorted(random.Random(5).sample(range(2, 10**6), 500))
    vals = [counter_1e6.pi(x) for x in xs]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_base_primes_invariant(counter_1e6):
    bp = counter_1e6.base_primes
    assert bp[0] == 2
    assert np.all(np.diff(bp) > 0)
    assert bp[-1] <= math.isqrt(counter_1e6.limit)
    # exactly the primes up to sqrt(limit)
    assert np.array_equal(bp, simple_sieve(math.isqrt(counter_1e6.limit)))


def test_methods_agree(counter_1e6, counter_1e6_sub):
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randint(1, 10**6)
        assert counter_1e6.pi(n) == counter_1e6_sub.pi(n), n


def test_oracle_equivalence_sampled(counter_1e6):
    rng = random.Random(11)
    ns = [rng.randint(1, 10**6) for _ in range(50)]
    assert [counter_1e6.pi(n) for n in ns] == pi_oracle_batch(ns)


def test_count_window_examples(counter_1e6):
    assert counter_1e6.count_window(100, 110) == 4  # 101,103,107,109
    assert counter_1e6.count_window(7, 7) == 0
    assert counter_1e6.count_window(1, 10) == 4


_HYPO_COUNTER = None


def _hypo_counter():
    global _HYPO_COUNTER
    if _HYPO_COUNTER is None:
        _HYPO_COUNTER = build_counter(10**5, Method.SIEVE_TABLE)
    return _HYPO_COUNTER


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=10**5), min_size=3, max_size=3))
def test_count_window_additive(vals):
    c = _hypo_counter()
    a, b, mid = sorted(vals)
    assert c.count_window(a, b) + c.count_window(b, mid) == c.count_window(a, mid)


def test_chebyshev_examples(counter_1e6):
    ch = counter_1e6.chebyshev(10)
    assert ch.theta == pytest.approx(math.log(210), rel=1e-12)
    assert ch.psi == pytest.approx(math.log(2520), rel=1e-12)
    assert counter_1e6.chebyshev(2).theta == pytest.approx(math.log(2), rel=1e-14)


def test_chebyshev_psi_by_enumeration(counter_1e6):
    # direct prime-power enumeration, independent of the theta-identity path
    for x in (30, 100, 1000):
        psi = 0.0
        for p in simple_sieve(x):
            pk = int(p)
            while pk <= x:
                psi += math.log(p)
                pk *= int(p)
        got = counter_1e6.chebyshev(x)
        assert got.psi == pytest.approx(psi, abs=1e-9)
        assert got.psi >= got.theta >= 0
        assert got.psi <= counter_1e6.pi(x) * math.log(x)


def test_chebyshev_identity_sampled(counter_1e6):
    # psi(x) = sum_k theta(floor(x^(1/k)))
    rng = random.Random(3)
    for _ in range(10):
        x = rng.randint(100, 10**6)
        ch = counter_1e6.chebyshev(x)
        total = 0.0
        for k in range(1, int(math.log2(x)) + 1):
            r = iroot(x, k)
            if r >= 2:
                total += counter_1e6.chebyshev(r).theta
        assert ch.psi == pytest.approx(total, abs=1e-9)


def test_chebyshev_sublinear_backend(counter_1e6_sub, counter_1e6):
    a = counter_1e6_sub.chebyshev(12345)
    b = counter_1e6.chebyshev(12345)
    assert a.theta == pytest.approx(b.theta, rel=1e-13)
    assert a.psi == pytest.approx(b.psi, rel=1e-13)


@given(st.integers(min_value=0, max_value=10**15), st.integers(min_value=1, max_value=10))
@settings(max_examples=300, deadline=None)
def test_iroot_exact(n, k):
    r = iroot(n, k)
    assert r**k <= n < (r + 1) ** k


def test_iroot_near_perfect_powers():
    for base in (2, 3, 10, 99, 1000):
        for k in (2, 3, 5):
            n = base**k
            assert iroot(n, k) == base
            assert iroot(n - 1, k) == base - 1
            assert iroot(n + 1, k) == base


def test_memory_budget(monkeypatch):
    monkeypatch.setenv("HL_MEM_BUDGET_MB", "1")
    with pytest.raises(MemoryBudgetError) as exc:
        build_counter(10**9, Method.SIEVE_TABLE)
    assert "1 MB" in str(exc.value)


def test_oracle_trivial():
    assert pi_oracle(1) == 0
    assert pi_oracle(3) == 2
    assert pi_oracle(10**4) == 1229
