"""Gauss-Lagrange reduction of binary Gram matrices and the WR / similarity tests built on it."""

from math import gcd, isqrt

from .arith import squarefree_part
from .lattice import ClassTuple, GramMatrix, Matrix, ValidationError, sublattice_gram


class NotWellRounded(ValidationError):
    pass


def _check_gram(G):
    if not isinstance(G, GramMatrix):
        raise ValidationError(f"expected an integer GramMatrix, got {G!r}")


def gauss_reduce(G: GramMatrix) -> tuple[GramMatrix, Matrix]:
    """Reduce G to the unique form with 0 <= 2*g12 <= g11 <= g22.

    Returns (G_red, V) where V is unimodular and V^t G V == G_red; the columns
    of V are the reduced basis in the original coordinates.
    """
    _check_gram(G)
    a, b, c = G.entries
    v11, v12, v21, v22 = 1, 0, 0, 1
    while True:
        if a > c:
            a, c = c, a
            v11, v12, v21, v22 = v12, v11, v22, v21
        k = (2 * b + a) // (2 * a)  # nearest integer to b/a
        if k:
            c = c - 2 * k * b + k * k * a
            b = b - k * a
            v12 -= k * v11
            v22 -= k * v21
        if a <= c:
            break
    if b < 0:
        b = -b
        v12, v22 = -v12, -v22
    V = ((v11, v12), (v21, v22))
    red = GramMatrix(a, b, c)
    if sublattice_gram(G, V) != red:
        raise AssertionError(f"reduction of {G.entries} lost exactness")
    return red, V


def reduced(G: GramMatrix) -> GramMatrix:
    return gauss_reduce(G)[0]


def minimum(G: GramMatrix) -> int:
    """The lattice minimum: least squared length of a nonzero vector."""
    return reduced(G).g11


def is_wr(G: GramMatrix) -> bool:
    red = reduced(G)
    return red.g11 == red.g22


def minimal_pairs(G: GramMatrix) -> int:
    """Number of +-pairs of minimal vectors (1, 2 or 3).

    For a reduced basis every minimal vector has coefficients in {-1, 0, 1}, so
    an exhaustive search of that box is exact.
    """
    red = reduced(G)
    hits = sum(
        1
        for x in (-1, 0, 1)
        for y in (-1, 0, 1)
        if (x or y) and red.value(x, y) == red.g11
    )
    return hits // 2


def similarity_class_of(G: GramMatrix) -> ClassTuple:
    """The ClassTuple (p, r, q, D) of an integral well-rounded lattice."""
    _check_gram(G)
    red = reduced(G)
    if red.g11 != red.g22:
        raise NotWellRounded(f"not well-rounded: {G.entries} reduces to {red.entries}")
    aa, bb = red.g11, red.g12
    g = gcd(aa, bb) if bb else aa
    p, q = bb // g, aa // g
    n = q * q - p * p
    D = squarefree_part(n)
    r = isqrt(n // D)
    return ClassTuple(p, r, q, D)


def is_similar(G1: GramMatrix, G2: GramMatrix) -> bool:
    """True iff the reduced triples are proportional (similarity up to O_2(R))."""
    a1, b1, c1 = reduced(G1).entries
    a2, b2, c2 = reduced(G2).entries
    return a1 * b2 == a2 * b1 and a1 * c2 == a2 * c1 and b1 * c2 == b2 * c1
