"""Small exact number-theory helpers shared by the lattice modules."""

from functools import lru_cache
from math import gcd, isqrt

import numpy as np
from sympy import factorint


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, u, v) with u*a + v*b == g == gcd(a, b) >= 0."""
    u0, v0, u1, v1 = 1, 0, 0, 1
    while b:
        k, r = divmod(a, b)
        a, b = b, r
        u0, u1 = u1, u0 - k * u1
        v0, v1 = v1, v0 - k * v1
    if a < 0:
        a, u0, v0 = -a, -u0, -v0
    return a, u0, v0


@lru_cache(maxsize=1 << 16)
def squarefree_part(n: int) -> int:
    """The squarefree kernel s of n > 0, i.e. n = s * t**2 with s squarefree."""
    if n <= 0:
        raise ValueError(f"squarefree_part needs n > 0, got {n}")
    s = 1
    for prime, exp in factorint(n).items():
        if exp % 2:
            s *= prime
    return s


def is_squarefree(n: int) -> bool:
    return n > 0 and squarefree_part(n) == n


def ceil_sqrt(n: int) -> int:
    """Smallest integer x >= 0 with x*x >= n."""
    if n <= 0:
        return 0
    x = isqrt(n)
    return x if x * x == n else x + 1


def totient_sieve(n: int) -> np.ndarray:
    """phi[0..n] by a linear-in-n sieve; phi[0] is set to 0."""
    phi = np.arange(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if phi[p] == p:  # untouched so far, hence prime
            phi[p::p] -= phi[p::p] // p
    if n >= 0:
        phi[0] = 0
    return phi


def divisor_sigma_sieve(n: int) -> np.ndarray:
    """sigma[0..n], the sum of divisors; sigma[0] = 0."""
    sigma = np.zeros(n + 1, dtype=np.int64)
    for d in range(1, n + 1):
        sigma[d::d] += d
    return sigma


def coprime(a: int, b: int) -> bool:
    return gcd(a, b) == 1
