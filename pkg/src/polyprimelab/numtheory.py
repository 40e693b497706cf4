"""Exact integer number theory: sieves, primes in arithmetic progressions,
totient, p-adic valuations, CRT, and logarithmic prime weights.

All modular and combinatorial data are exact integers; only the logarithmic
weights are double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "PrimeTable",
    "WeightedAPPrimes",
    "ap_prime_mask",
    "ap_primes",
    "crt",
    "euler_phi",
    "factorize",
    "is_prime",
    "lambda_weight",
    "p_adic_valuation",
    "prime_in_interval",
    "sieve_primes",
]

# Segment size for the segmented sieve; bounds peak memory for large limits.
_SEGMENT = 8_000_000

# Deterministic Miller-Rabin witnesses, exact for all n < 3.317e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class PrimeTable:
    """All primes <= limit: packed membership bits plus an ascending array."""

    __slots__ = ("limit", "_bits", "primes")

    def __init__(self, limit: int, bits: np.ndarray, primes: np.ndarray):
        self.limit = int(limit)
        self._bits = bits  # uint8, little-endian bit i <=> i prime
        self.primes = primes
        self.primes.setflags(write=False)

    def __len__(self) -> int:
        return len(self.primes)

    def __contains__(self, n: int) -> bool:
        return self.is_prime(n)

    def is_prime(self, n: int) -> bool:
        if n > self.limit:
            raise ValueError(f"{n} exceeds table limit {self.limit}")
        if n < 2:
            return False
        return bool((self._bits[n >> 3] >> (n & 7)) & 1)


def _simple_mask(limit: int) -> np.ndarray:
    """Boolean primality mask over [0, limit] by plain Eratosthenes."""
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask


def sieve_primes(limit: int) -> PrimeTable:
    """Sieve all primes <= limit; segmented above the memory threshold."""
    if limit < 2:
        raise ValueError("sieve limit must be >= 2 (table would be empty)")
    if limit <= _SEGMENT:
        mask = _simple_mask(limit)
        bits = np.packbits(mask, bitorder="little")
        return PrimeTable(limit, bits, np.flatnonzero(mask).astype(np.int64))

    base = np.flatnonzero(_simple_mask(math.isqrt(limit))).tolist()
    bit_chunks = []
    prime_chunks = []
    lo = 0
    while lo <= limit:
        hi = min(lo + _SEGMENT, limit + 1)  # exclusive
        seg = np.ones(hi - lo, dtype=bool)
        if lo == 0:
            seg[:2] = False
        for p in base:
            if p * p >= hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start < hi:
                seg[start - lo :: p] = False
        bit_chunks.append(np.packbits(seg, bitorder="little"))
        prime_chunks.append((np.flatnonzero(seg) + lo).astype(np.int64))
        lo = hi
    bits = np.concatenate(bit_chunks)
    return PrimeTable(limit, bits, np.concatenate(prime_chunks))


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (2, 3, then 6k+-1 wheel)."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@lru_cache(maxsize=65536)
def euler_phi(n: int) -> int:
    if n <= 0:
        raise ValueError("totient requires n >= 1")
    phi = n
    for p in factorize(n):
        phi -= phi // p
    return phi


def p_adic_valuation(p: int, x: int) -> int:
    """Largest v with p^v | x; x = 0 is rejected (valuation undefined)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if x == 0:
        raise ValueError("valuation of 0 is undefined")
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def crt(congruences: list[tuple[int, int]]) -> tuple[int, int]:
    """Combine x = r_i (mod m_i) for pairwise coprime moduli.

    Non-coprime inputs are rejected: inconsistent residues raise a conflict,
    consistent ones are rejected too (callers must pre-merge).
    """
    r, m = 0, 1
    for ri, mi in congruences:
        if mi < 1:
            raise ValueError(f"modulus {mi} must be >= 1")
        g = math.gcd(m, mi)
        if g != 1:
            if (ri - r) % g:
                raise ValueError(f"conflicting congruences modulo gcd {g}")
            raise ValueError("moduli not pairwise coprime; pre-merge congruences")
        t = ((ri - r) * pow(m, -1, mi)) % mi
        r += m * t
        m *= mi
    return r % m, m


def prime_in_interval(lo: int, hi: int) -> int | None:
    """Smallest prime in (lo, hi], or None."""
    if not hi > lo >= 1:
        raise ValueError("requires hi > lo >= 1")
    n = max(lo + 1, 2)
    while n <= hi:
        if is_prime(n):
            return n
        n += 1
    return None


def lambda_weight(b: int, w: int, x: int) -> float:
    """Logarithmic prime weight (phi(w)/w) * log(w*x + b), zero off primes."""
    _check_progression(b, w)
    if x < 1:
        raise ValueError("requires x >= 1")
    v = w * x + b
    if not is_prime(v):
        return 0.0
    return euler_phi(w) / w * math.log(v)


def _check_progression(b: int, w: int) -> None:
    if w < 1 or not 1 <= b <= w:
        raise ValueError(f"requires 1 <= b <= w, got b={b}, w={w}")
    if math.gcd(b, w) != 1:
        raise ValueError(f"gcd({b}, {w}) != 1")


def ap_prime_mask(b: int, w: int, count: int) -> np.ndarray:
    """Boolean mask over x = 1..count marking where w*x + b is prime.

    Sieves the progression directly, so b may exceed w (only gcd(b, w) = 1
    is required); used for bulk weight evaluation.
    """
    if w < 1 or b < 1:
        raise ValueError("requires w >= 1 and b >= 1")
    if math.gcd(b, w) != 1:
        raise ValueError(f"gcd({b}, {w}) != 1")
    if count <= 0:
        return np.zeros(0, dtype=bool)
    top = w * count + b
    mask = np.ones(count, dtype=bool)
    for p in sieve_primes(max(2, math.isqrt(top))).primes.tolist():
        if w % p == 0:
            continue
        x0 = (-b * pow(w, -1, p)) % p
        if x0 == 0:
            x0 = p
        if w * x0 + b == p:  # the value p itself is prime, skip past it
            x0 += p
        if x0 <= count:
            mask[x0 - 1 :: p] = False
    return mask


@dataclass(frozen=True)
class WeightedAPPrimes:
    """Support and weights of the progression w*x + b on x in [1, limit]."""

    b: int
    w: int
    limit: int
    support: np.ndarray  # ascending x with w*x + b prime
    weights: np.ndarray  # aligned with support

    def weight_at(self, x: int) -> float:
        i = int(np.searchsorted(self.support, x))
        if i < len(self.support) and self.support[i] == x:
            return float(self.weights[i])
        return 0.0

    @property
    def total(self) -> float:
        return float(self.weights.sum())


def ap_primes(b: int, w: int, limit: int) -> WeightedAPPrimes:
    """All weighted primes of the progression w*x + b with x in [1, limit]."""
    _check_progression(b, w)
    mask = ap_prime_mask(b, w, limit)
    support = (np.flatnonzero(mask) + 1).astype(np.int64)
    values = w * support + b
    weights = euler_phi(w) / w * np.log(values.astype(np.float64))
    return WeightedAPPrimes(b, w, limit, support, weights)
