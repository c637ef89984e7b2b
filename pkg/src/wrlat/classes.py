"""IWR similarity classes of type D and the Pell-type conic p^2 + D r^2 = q^2.

Classes are produced from coprime pairs (m, n) with sqrt(D/3) <= m/n <= sqrt(3D).
The map (m, n) -> class is many-to-one, so enumeration deduplicates by tuple
and keeps every witness pair for diagnostics.
"""

import math
from dataclasses import dataclass
from math import gcd, isqrt

from .arith import ceil_sqrt, is_squarefree
from .lattice import ClassTuple, InvariantViolation, MNParam, ValidationError


def _require_squarefree(D):
    if not isinstance(D, int) or not is_squarefree(D):
        raise ValidationError(f"D = {D} is not a positive squarefree integer")


def mn_to_class(param: MNParam) -> ClassTuple:
    D, m, n = param.D, param.m, param.n
    den = 2**param.e * gcd(m, D)
    num_p, num_r, num_q = abs(m * m - D * n * n), 2 * m * n, m * m + D * n * n
    if num_p % den or num_r % den or num_q % den:
        raise InvariantViolation(f"(m, n) = ({m}, {n}) gives non-integral class for D = {D}")
    return ClassTuple(num_p // den, num_r // den, num_q // den, D)


def m_range(D: int, n: int) -> tuple[int, int]:
    """Inclusive integer range of m with n*sqrt(D/3) <= m <= n*sqrt(3D)."""
    lo = ceil_sqrt(-(-D * n * n // 3))  # smallest m with 3 m^2 >= D n^2
    hi = isqrt(3 * D * n * n)
    return lo, hi


def class_witnesses(D: int, q_max: int) -> dict[ClassTuple, list[tuple[int, int]]]:
    """Every class with q <= q_max, mapped to all (m, n) producing it.

    Since q >= (2/3) n^2 for every admissible pair, n <= sqrt(3 q_max / 2)
    covers all pairs that can reach q <= q_max.
    """
    _require_squarefree(D)
    found: dict[ClassTuple, list[tuple[int, int]]] = {}
    n = 1
    while 2 * n * n <= 3 * q_max:
        lo, hi = m_range(D, n)
        for m in range(max(lo, 1), hi + 1):
            if gcd(m, n) != 1:
                continue
            param = MNParam(D, m, n)
            den = 2**param.e * gcd(m, D)
            if m * m + D * n * n > q_max * den:
                continue
            found.setdefault(mn_to_class(param), []).append((m, n))
        n += 1
    return {c: sorted(w) for c, w in sorted(found.items(), key=lambda kv: kv[0].sort_key())}


def enumerate_classes(D: int, q_max: int) -> list[ClassTuple]:
    """Sorted (by q, then p), deduplicated classes of type D with q <= q_max."""
    return list(class_witnesses(D, q_max))


def zeta_class_partial(D: int, s: float, q_max: int, kind: str = "minimum") -> float:
    """Partial sum of the minimum (sum q^-s) or determinant (sum (r sqrt D)^-s) zeta-function."""
    _require_squarefree(D)
    if s <= 0:
        raise ValidationError(f"s must be positive, got {s}")
    classes = enumerate_classes(D, q_max) if q_max >= 1 else []
    if kind == "minimum":
        return math.fsum(c.q ** -s for c in classes)
    if kind == "determinant":
        return D ** (-s / 2) * math.fsum(c.r ** -s for c in classes)
    raise ValueError(f"kind must be 'minimum' or 'determinant', not {kind!r}")


def phi_bound_check(D: int, n: int) -> tuple[int, int, bool]:
    """(a_n, phi(n), a_n >= phi(n)) where a_n counts m in the admissible range coprime to n."""
    from sympy import totient

    lo, hi = m_range(D, n)
    a_n = sum(1 for m in range(max(lo, 1), hi + 1) if gcd(m, n) == 1)
    phi = int(totient(n))
    return a_n, phi, a_n >= phi


@dataclass(frozen=True)
class ConicPoint:
    """Primitive integer point on p^2 + D r^2 = q^2 with q > 0; its height is q."""

    p: int
    r: int
    q: int
    D: int

    def __post_init__(self):
        if self.q <= 0 or self.p**2 + self.D * self.r**2 != self.q**2:
            raise ValidationError(f"({self.p}, {self.r}, {self.q}) is not on the conic for D = {self.D}")
        if gcd(gcd(self.p, self.r), self.q) != 1:
            raise ValidationError(f"({self.p}, {self.r}, {self.q}) is not primitive")

    @property
    def height(self) -> int:
        return self.q


def conic_points(D: int, q_max: int) -> list[ConicPoint]:
    """All primitive points of height <= q_max, via the rational parameterization.

    Projective points correspond one-to-one to slopes n/m in P^1(Q), given by
    coprime (m, n) with m > 0, plus (0, 1). The common factor g of
    (m^2 - D n^2, 2mn, m^2 + D n^2) divides 2*gcd(m, D), so m^2 + D n^2 <= 2 D q_max
    bounds the search.
    """
    _require_squarefree(D)
    points = []
    bound = 2 * D * q_max
    pairs = [(0, 1)] if D <= bound else []
    m = 1
    while m * m <= bound:
        nmax = isqrt((bound - m * m) // D)
        pairs.extend((m, n) for n in range(-nmax, nmax + 1) if gcd(m, n) == 1)
        m += 1
    for m, n in pairs:
        x, y, z = m * m - D * n * n, 2 * m * n, m * m + D * n * n
        g = gcd(gcd(x, y), z)
        if z // g <= q_max:
            points.append(ConicPoint(x // g, y // g, z // g, D))
    points.sort(key=lambda pt: (pt.q, pt.p, pt.r))
    return points


def height_zeta_partial(D: int, s: float, q_max: int) -> float:
    return math.fsum(pt.q ** -s for pt in conic_points(D, q_max))
