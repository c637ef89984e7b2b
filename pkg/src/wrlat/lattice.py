"""Exact integer models of the planar lattices Gamma_D(p,q) and Omega_D(p,q).

Nothing here touches floating point: the irrational basis entry r*sqrt(D) is
never formed, all geometry goes through integer Gram matrices, and sublattices
are identified by the column Hermite normal form of their coefficient matrix.
"""

from dataclasses import dataclass, field
from math import gcd

from .arith import is_squarefree, xgcd

Matrix = tuple[tuple[int, int], tuple[int, int]]

IDENTITY: Matrix = ((1, 0), (0, 1))


class ValidationError(ValueError):
    """Input data violates a documented precondition."""


class InvariantViolation(RuntimeError):
    """An internal exactness check failed; this signals a bug, not bad input."""


@dataclass(frozen=True)
class ClassTuple:
    """An IWR similarity class of type D, stored as (p, r, q, D) with p^2 + D r^2 = q^2."""

    p: int
    r: int
    q: int
    D: int

    def __post_init__(self):
        p, r, q, D = self.p, self.r, self.q, self.D
        if not all(isinstance(v, int) for v in (p, r, q, D)):
            raise ValidationError(f"class entries must be integers: {self.text}")
        if p < 0 or r < 1 or q < 1 or D < 1:
            raise ValidationError(f"class entries out of range: {self.text}")
        if p * p + D * r * r != q * q:
            raise ValidationError(f"p^2 + D r^2 != q^2 for {self.text}")
        if gcd(p, q) != 1:
            raise ValidationError(f"gcd(p, q) != 1 for {self.text}")
        if 2 * p > q:
            raise ValidationError(f"2p > q for {self.text}")
        if not is_squarefree(D):
            raise ValidationError(f"D = {D} is not squarefree")
        if p == 0 and (r, q, D) != (1, 1, 1):
            raise ValidationError(f"p = 0 is only admitted for the square class: {self.text}")

    @property
    def text(self) -> str:
        return f"{self.p},{self.r},{self.q},{self.D}"

    @property
    def is_square_class(self) -> bool:
        """True for (0,1,1,1), the single admitted tuple with p = 0."""
        return self.p == 0

    def sort_key(self):
        return (self.D, self.q, self.p)

    def __str__(self):
        return self.text


def parse_class(text: str) -> ClassTuple:
    """Parse the "p,r,q,D" text form (no spaces)."""
    parts = text.split(",")
    if len(parts) != 4:
        raise ValidationError(f"expected p,r,q,D but got {text!r}")
    try:
        p, r, q, D = (int(x) for x in parts)
    except ValueError:
        raise ValidationError(f"non-integer entry in {text!r}") from None
    return ClassTuple(p, r, q, D)


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric positive definite integer matrix [[g11, g12], [g12, g22]]."""

    g11: int
    g12: int
    g22: int

    def __post_init__(self):
        if not all(isinstance(v, int) for v in (self.g11, self.g12, self.g22)):
            raise ValidationError(f"Gram entries must be integers: {self.entries}")
        if self.g11 <= 0 or self.det <= 0:
            raise ValidationError(f"Gram matrix is not positive definite: {self.entries}")

    @property
    def det(self) -> int:
        return self.g11 * self.g22 - self.g12 * self.g12

    @property
    def entries(self) -> tuple[int, int, int]:
        return (self.g11, self.g12, self.g22)

    def value(self, x: int, y: int) -> int:
        """Squared length of the lattice vector with coordinates (x, y)."""
        return self.g11 * x * x + 2 * self.g12 * x * y + self.g22 * y * y

    def scaled(self, k: int) -> "GramMatrix":
        return GramMatrix(k * self.g11, k * self.g12, k * self.g22)


@dataclass(frozen=True)
class MNParam:
    """Parameters (m, n) of an IWR class of type D; see classes.mn_to_class."""

    D: int
    m: int
    n: int

    def __post_init__(self):
        D, m, n = self.D, self.m, self.n
        if not is_squarefree(D):
            raise ValidationError(f"D = {D} is not squarefree")
        if m < 1 or n < 1:
            raise ValidationError(f"m, n must be positive, got ({m}, {n})")
        if gcd(m, n) != 1:
            raise ValidationError(f"gcd(m, n) != 1 for ({m}, {n})")
        # n*sqrt(D/3) <= m <= n*sqrt(3D), squared
        if 3 * m * m < D * n * n or m * m > 3 * D * n * n:
            raise ValidationError(f"m/n = {m}/{n} outside [sqrt(D/3), sqrt(3D)] for D = {D}")

    @property
    def e(self) -> int:
        if self.D % 2 == 0 or (self.m * self.n) % 2 == 0:
            return 0
        return 1


@dataclass(frozen=True)
class SublatticeHandle:
    """A finite-index sublattice of Omega_D(p,q), identified by its HNF (a, b, d).

    The columns of [[a, b], [0, d]] are the coordinates of a sublattice basis in
    the ambient basis. ``target`` records the similarity class when known; it
    takes no part in equality or hashing.
    """

    ambient: ClassTuple
    hnf: tuple[int, int, int]
    target: ClassTuple | None = field(default=None, compare=False)

    @property
    def index(self) -> int:
        return self.hnf[0] * self.hnf[2]

    @property
    def matrix(self) -> Matrix:
        a, b, d = self.hnf
        return ((a, b), (0, d))


def gram_of(cls: ClassTuple, scaled: bool = False) -> GramMatrix:
    """Gram matrix of Gamma_D(p,q), or of Omega_D(p,q) = sqrt(q) Gamma_D(p,q) when scaled."""
    if not isinstance(cls, ClassTuple):
        raise ValidationError(f"expected a ClassTuple, got {cls!r}")
    g = GramMatrix(cls.q, cls.p, cls.q)
    return g.scaled(cls.q) if scaled else g


def det2(T: Matrix) -> int:
    return T[0][0] * T[1][1] - T[0][1] * T[1][0]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    return (
        (A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
        (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]),
    )


def sublattice_gram(G: GramMatrix, T: Matrix) -> GramMatrix:
    """T^t G T: the Gram matrix of the sublattice whose basis columns are T."""
    if det2(T) == 0:
        raise ValidationError(f"singular coefficient matrix {T}")
    (t11, t12), (t21, t22) = T
    a, b, c = G.g11, G.g12, G.g22
    h11 = a * t11 * t11 + 2 * b * t11 * t21 + c * t21 * t21
    h12 = a * t11 * t12 + b * (t11 * t22 + t21 * t12) + c * t21 * t22
    h22 = a * t12 * t12 + 2 * b * t12 * t22 + c * t22 * t22
    return GramMatrix(h11, h12, h22)


def hnf_canonicalize(T: Matrix) -> tuple[Matrix, int]:
    """Column Hermite normal form [[a, b], [0, d]] with a, d >= 1 and 0 <= b < a.

    The result spans the same integer column lattice as T; the second return
    value is the index a*d = |det T|.
    """
    if det2(T) == 0:
        raise ValidationError(f"singular coefficient matrix {T}")
    (t11, t12), (t21, t22) = T
    d, u, v = xgcd(t21, t22)
    # unimodular column operation [[t22/d, u], [-t21/d, v]] clears the bottom-left entry
    top1 = (t22 // d) * t11 - (t21 // d) * t12
    top2 = u * t11 + v * t12
    a = abs(top1)
    b = top2 % a
    return ((a, b), (0, d)), a * d
