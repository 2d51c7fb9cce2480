import time

import numpy as np
import pytest

from sievecalc.empirical import (
    build_sieve,
    count_D12,
    count_pi12,
    is_P2,
    singular_series,
)


def _primes_trial(limit):
    """Independent prime list by plain trial division."""
    out = []
    for n in range(2, limit + 1):
        if all(n % p for p in out if p * p <= n):
            out.append(n)
    return out


class TestSieve:
    def test_lpf_and_primality(self):
        cache = build_sieve(100)
        primes = _primes_trial(100)
        assert list(np.nonzero(cache.is_prime)[0]) == primes
        assert cache.lpf[60] == 2
        assert cache.lpf[49] == 7
        assert cache.lpf[97] == 97

    def test_limit_validation(self):
        with pytest.raises(ValueError):
            build_sieve(1)
        with pytest.raises(ValueError):
            build_sieve(10**8 + 1)


class TestIsP2:
    def test_examples(self):
        cache = build_sieve(4000)
        assert is_P2(7, cache)          # prime
        assert is_P2(35, cache)         # 5*7
        assert not is_P2(30, cache)     # 2*3*5
        assert not is_P2(8, cache)      # 2^3
        assert is_P2(4, cache)          # 2^2

    def test_beyond_table(self):
        cache = build_sieve(4000)
        assert is_P2(9999991, cache)            # prime, > limit
        assert not is_P2(3 * 5 * 7 * 11 * 13 * 17 * 19, cache)

    def test_errors(self):
        cache = build_sieve(100)
        with pytest.raises(ValueError):
            is_P2(1, cache)
        with pytest.raises(ValueError):
            is_P2(100**2 + 1, cache)


class TestCounts:
    def test_D12_exhaustive_small(self):
        # N=10: p in {3, 5, 7}; 10-p in {7, 5, 3} all P2 -> 3
        assert count_D12(10) == 3
        # N=4: only p=2 gives 4-2=2 prime -> 1
        assert count_D12(4) == 1

    def test_D12_brute_force(self):
        for N in (20, 50, 100, 144):
            cache = build_sieve(N)
            expected = sum(
                1 for p in np.nonzero(cache.is_prime)[0]
                if p <= N and N - p > 1 and is_P2(int(N - p), cache))
            assert count_D12(N) == expected

    def test_D12_validation(self):
        with pytest.raises(ValueError):
            count_D12(9)
        with pytest.raises(ValueError):
            count_D12(2)

    def test_pi12_exhaustive_small(self):
        assert count_pi12(10) == 4   # p in {2,3,5,7}: p+2 all P2
        assert count_pi12(3) == 2
        assert count_pi12(5) == 3
        assert count_pi12(1) == 0

    def test_D12_dominates_prime_pairs(self):
        # P2 superset of primes: D12 count >= count of prime pairs.
        for N in (30, 100, 1000):
            cache = build_sieve(N)
            pairs = sum(1 for p in np.nonzero(cache.is_prime)[0]
                        if N - p > 1 and cache.is_prime[N - p])
            assert count_D12(N) >= pairs


class TestSingularSeries:
    def test_C2_against_independent_oracle(self):
        P = 20000
        primes = _primes_trial(P)
        want = 2.0
        for p in primes:
            if p > 2:
                want *= 1.0 - 1.0 / (p - 1.0) ** 2
        assert singular_series("C2", P) == pytest.approx(want, abs=1e-12)

    def test_C2_known_value(self):
        # stabilizes to ~1.3203236 well before P = 1e6
        assert singular_series("C2", 10**6) == pytest.approx(
            1.3203236, abs=1e-6)

    def test_power_of_two_has_no_correction(self):
        # N a power of two: no odd prime divisors, so C(N) equals the bare
        # product without (p-1)/(p-2) factors.
        base = singular_series("C2", 1000) / 2.0
        assert singular_series("C_of_N", 1000, N=1024) == pytest.approx(
            base, abs=1e-14)

    def test_hand_computed_product(self):
        # N=30, P=7: (2/1)(4/3) * (1-1/4)(1-1/16)(1-1/36)
        want = (2.0 / 1.0) * (4.0 / 3.0) * (3.0 / 4.0) * (15.0 / 16.0) \
            * (35.0 / 36.0)
        assert singular_series("C_of_N", 7, N=30) == pytest.approx(
            want, abs=1e-14)

    def test_monotone_convergence(self):
        # |value(P) - value(2P)| decreases geometrically in P.
        deltas = []
        prev = singular_series("C2", 1000)
        for P in (2000, 4000, 8000, 16000):
            cur = singular_series("C2", P)
            deltas.append(abs(cur - prev))
            prev = cur
        assert all(b < a for a, b in zip(deltas, deltas[1:]))

    def test_validation(self):
        with pytest.raises(ValueError):
            singular_series("C2", 2)
        with pytest.raises(ValueError):
            singular_series("C_of_N", 100, N=31)
        with pytest.raises(ValueError):
            singular_series("C_of_N", 100)
        with pytest.raises(ValueError):
            singular_series("bogus", 100)


class TestScale:
    def test_million_report_under_10s(self):
        t0 = time.time()
        d = count_D12(10**6)
        p = count_pi12(10**6)
        c = singular_series("C2", 10**6)
        assert time.time() - t0 < 10.0
        assert d == 36389
        assert p == 29949
        assert c == pytest.approx(1.3203237211796763, abs=1e-12)
