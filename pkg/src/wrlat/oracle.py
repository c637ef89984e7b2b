"""Brute-force ground truth.

Shares only the Gram / HNF primitives and the reduction routines with the
formula path: every finite-index sublattice is enumerated by its HNF and tested
directly.
"""

import logging
from fractions import Fraction
from math import gcd, isqrt, lcm

from .lattice import ClassTuple, GramMatrix, Matrix, ValidationError, sublattice_gram
from .reduction import is_wr, similarity_class_of

log = logging.getLogger(__name__)


class CeilingReached(RuntimeError):
    """No WR sublattice was found below the configured index ceiling."""


def hnf_sublattices(n: int) -> list[Matrix]:
    """All [[a, b], [0, d]] with a*d = n and 0 <= b < a, in (a, b) order; sigma(n) of them."""
    out = []
    for a in range(1, n + 1):
        if n % a == 0:
            d = n // a
            out.extend(((a, b), (0, d)) for b in range(a))
    return out


def brute_wr_census(G: GramMatrix, N: int) -> dict[int, list[tuple[Matrix, ClassTuple]]]:
    """Every WR sublattice of the lattice with Gram G, index <= N, tagged with its class."""
    census: dict[int, list[tuple[Matrix, ClassTuple]]] = {}
    for n in range(1, N + 1):
        for T in hnf_sublattices(n):
            H = sublattice_gram(G, T)
            if is_wr(H):
                census.setdefault(n, []).append((T, similarity_class_of(H)))
    return census


def rescale_to_integral(G) -> tuple[Fraction, GramMatrix]:
    """Least alpha > 0 such that alpha*G is integral with entry gcd 1.

    G is a triple (g11, g12, g22) of rationals (ints, Fractions or "a/b" strings).
    """
    entries = [Fraction(x) for x in G]
    if all(x == 0 for x in entries):
        raise ValidationError("zero Gram matrix")
    den = lcm(*(x.denominator for x in entries))
    ints = [int(x * den) for x in entries]
    g = gcd(*ints)
    alpha = Fraction(den, g)
    return alpha, GramMatrix(*(v // g for v in ints))


def find_wr_sublattice(G, ceiling: int = 10_000, progress_every: int = 1000) -> tuple[Matrix, int]:
    """WR sublattice of least index, ties broken by HNF order; searches n = 1, 2, 3, ..."""
    if not isinstance(G, GramMatrix):
        G = rescale_to_integral(G)[1]
    for n in range(1, ceiling + 1):
        if progress_every and n % progress_every == 0:
            log.info("find_wr_sublattice: searched through index %d", n)
        for T in hnf_sublattices(n):
            if is_wr(sublattice_gram(G, T)):
                return T, n
    raise CeilingReached(f"not found below ceiling {ceiling}")


def pell_classes(D: int, q_max: int) -> list[ClassTuple]:
    """Direct search of p^2 + D r^2 = q^2 with gcd(p, q) = 1 and 2p <= q.

    2p <= q forces 4 D r^2 >= 3 q^2, which bounds r from below.
    """
    found = []
    for q in range(1, q_max + 1):
        r = isqrt(3 * q * q // (4 * D))
        while 4 * D * r * r < 3 * q * q:
            r += 1
        while D * r * r <= q * q:
            pp = q * q - D * r * r
            p = isqrt(pp)
            if p * p == pp and gcd(p, q) == 1 and 2 * p <= q and r > 0:
                found.append(ClassTuple(p, r, q, D))
            r += 1
    return sorted(found, key=lambda c: c.sort_key())


def brute_conic_points(D: int, q_max: int) -> list[tuple[int, int, int]]:
    """Primitive (p, r, q) with p^2 + D r^2 = q^2 and 0 < q <= q_max, by exhaustive search."""
    pts = []
    for q in range(1, q_max + 1):
        for r in range(0, isqrt(q * q // D) + 1):
            pp = q * q - D * r * r
            p = isqrt(pp)
            if p * p != pp or gcd(gcd(p, r), q) != 1:
                continue
            for sp in {p, -p}:
                for sr in {r, -r}:
                    pts.append((sp, sr, q))
    return sorted(pts, key=lambda t: (t[2], t[0], t[1]))
