"""Integer factorization: trial division, Pollard rho (Brent), Miller-Rabin."""

from __future__ import annotations

import random
from functools import lru_cache
from math import gcd, isqrt

TRIAL_LIMIT = 10**6

# Deterministic for n < 3.317e24 (Sorenson-Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    sieve = bytearray([1]) * (TRIAL_LIMIT + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(TRIAL_LIMIT) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, TRIAL_LIMIT + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, 40 extra random bases above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    def witness(a: int) -> bool:
        x = pow(a, d, n)
        if x in (1, n - 1):
            return False
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                return False
        return True

    bases = list(_MR_BASES)
    if n >= _MR_DETERMINISTIC_LIMIT:
        rng = random.Random(n)
        bases += [rng.randrange(2, n - 1) for _ in range(40)]
    return not any(witness(a) for a in bases)


def _brent(n: int, seed: int) -> int:
    """A nontrivial factor of the odd composite ``n``."""
    rng = random.Random(seed)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def factor_integer(n: int) -> dict[int, int]:
    """Complete factorization of ``|n|`` as ``{prime: exponent}``."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(int(n))
    out: dict[int, int] = {}
    for p in _small_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if m <= TRIAL_LIMIT**2 or is_probable_prime(m):
                # after trial division any m below the square of the limit is prime
                out[m] = out.get(m, 0) + 1
                continue
            f = _brent(m, seed=m)
            stack.extend([f, m // f])
    return dict(sorted(out.items()))


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v
