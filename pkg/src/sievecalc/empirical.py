"""Brute-force counters and singular-series products for sanity reports.

These ground the definitions behind the asymptotic constants at desk scale:
exact counts of primes p with N - p (or p + 2) having at most two prime
factors, and truncated Euler products for the twin/Goldbach densities.  No
asymptotic claim is verified here; the report only prints the ratios.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PrimeSieveCache",
    "build_sieve",
    "count_D12",
    "count_pi12",
    "is_P2",
    "singular_series",
]

_DESK_LIMIT = 10**8


@dataclass(frozen=True)
class PrimeSieveCache:
    """Primality bitmap plus least-prime-factor map up to ``limit``."""

    limit: int
    is_prime: np.ndarray   # bool, indexable by n
    lpf: np.ndarray        # least prime factor; lpf[n] = n for primes


def build_sieve(limit: int) -> PrimeSieveCache:
    """Linear-memory least-prime-factor sieve up to ``limit`` inclusive."""
    if limit < 2:
        raise ValueError("sieve limit must be at least 2")
    if limit > _DESK_LIMIT:
        raise ValueError(f"sieve limit above the desk budget {_DESK_LIMIT}")
    lpf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, int(limit**0.5) + 1):
        if lpf[p] == 0:
            sl = lpf[p * p::p]
            sl[sl == 0] = p
    untouched = lpf == 0
    lpf[untouched] = np.nonzero(untouched)[0]
    lpf[:2] = 0
    is_prime = lpf == np.arange(limit + 1)
    is_prime[:2] = False
    return PrimeSieveCache(limit=int(limit), is_prime=is_prime, lpf=lpf)


def is_P2(n: int, cache: PrimeSieveCache) -> bool:
    """True iff n has at most two prime factors counted with multiplicity."""
    if n <= 1:
        raise ValueError("is_P2 requires n > 1")
    if n > cache.limit * cache.limit:
        raise ValueError("n exceeds the square of the sieve limit")
    if n <= cache.limit:
        if cache.is_prime[n]:
            return True
        q = n // int(cache.lpf[n])
        return q <= cache.limit and bool(cache.is_prime[q])
    # n beyond the table: peel at most one prime factor <= sqrt(n) by trial
    # division; what remains must be prime.
    for p in range(2, int(n**0.5) + 1):
        if n % p == 0:
            q = n // p
            if q <= cache.limit:
                return bool(cache.is_prime[q])
            return all(q % r for r in range(2, int(q**0.5) + 1))
    return True


def _omega2_mask(cache: PrimeSieveCache) -> np.ndarray:
    """Boolean mask over 0..limit: n > 1 and Omega(n) <= 2, vectorized.

    Omega(n) <= 2 iff n is prime or n / lpf(n) is prime.
    """
    n = np.arange(cache.limit + 1)
    cofactor = np.ones_like(n)
    valid = n > 1
    cofactor[valid] = n[valid] // cache.lpf[valid]
    return valid & (cache.is_prime | cache.is_prime[cofactor])


def count_D12(N: int) -> int:
    """Exact count of primes p <= N with N - p > 1 and Omega(N - p) <= 2."""
    if N % 2 != 0:
        raise ValueError("N must be even")
    if not 4 <= N <= _DESK_LIMIT:
        raise ValueError(f"N must lie in [4, {_DESK_LIMIT}]")
    cache = build_sieve(N)
    good = _omega2_mask(cache)
    p = np.nonzero(cache.is_prime)[0]
    p = p[N - p > 1]
    return int(np.count_nonzero(good[N - p]))


def count_pi12(x: int) -> int:
    """Exact count of primes p <= x with Omega(p + 2) <= 2."""
    if x < 2:
        return 0
    if x > _DESK_LIMIT:
        raise ValueError(f"x must not exceed {_DESK_LIMIT}")
    cache = build_sieve(x + 2)
    good = _omega2_mask(cache)
    p = np.nonzero(cache.is_prime[: x + 1])[0]
    return int(np.count_nonzero(good[p + 2]))


def singular_series(mode: str, P: int, N: int | None = None) -> float:
    """Truncated singular-series product over primes <= P.

    mode='C2': 2 * prod_{2<p<=P} (1 - 1/(p-1)^2).
    mode='C_of_N': prod_{p|N, p>2} (p-1)/(p-2) * prod_{2<p<=P} (1-1/(p-1)^2).
    """
    if P < 3:
        raise ValueError("P must be at least 3")
    cache = build_sieve(P)
    odd_primes = np.nonzero(cache.is_prime)[0][1:].astype(float)
    base = float(np.prod(1.0 - 1.0 / (odd_primes - 1.0) ** 2))
    if mode == "C2":
        return 2.0 * base
    if mode == "C_of_N":
        if N is None or N % 2 != 0:
            raise ValueError("C_of_N mode requires an even N")
        corr = 1.0
        m = N
        while m % 2 == 0:
            m //= 2
        p = 3
        while p * p <= m:
            if m % p == 0:
                corr *= (p - 1.0) / (p - 2.0)
                while m % p == 0:
                    m //= p
            p += 2
        if m > 1:
            corr *= (m - 1.0) / (m - 2.0)
        return corr * base
    raise ValueError(f"unknown mode {mode!r}")
