"""Dirichlet series of WR sublattice counts, their partial sums and reference series.

Coefficients are exact integers; partial sums over real s are evaluated in
binary64. Pole orders are only ever probed through coefficient growth.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import zeta as riemann_zeta

from .arith import divisor_sigma_sieve, totient_sieve
from .classes import _require_squarefree, class_witnesses
from .lattice import ClassTuple, ValidationError
from .sublattices import ROTATION, admissible_points, build_q_form, enumerate_all_wr, enumerate_similar


class DivergenceWarning(UserWarning):
    """s <= 1: the full series diverges, the partial sum is still well defined."""


@dataclass
class CoeffSeries:
    """Coefficients c_1..c_N of sum c_n n^-s; missing indices are zero."""

    coeffs: dict[int, int]
    horizon: int
    label: str = ""

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.horizon:
            raise IndexError(f"index {n} outside 1..{self.horizon}")
        return self.coeffs.get(n, 0)

    def as_list(self) -> list[int]:
        return [self.coeffs.get(n, 0) for n in range(1, self.horizon + 1)]

    def cumulative(self, N: int | None = None) -> int:
        N = self.horizon if N is None else N
        return sum(c for n, c in self.coeffs.items() if n <= N)

    def partial_sum(self, s: float, N: int | None = None) -> float:
        N = self.horizon if N is None else N
        return math.fsum(c * n**-s for n, c in sorted(self.coeffs.items()) if n <= N)


def _warn_if_divergent(s):
    if s <= 0:
        raise ValidationError(f"s must be positive, got {s}")
    if s <= 1:
        warnings.warn(f"s = {s} <= 1: the series diverges; returning the truncated sum", DivergenceWarning, stacklevel=3)


def wr_zeta_coeffs(ambient: ClassTuple, N: int, threads: int = 1) -> CoeffSeries:
    """c_n = number of distinct WR sublattices of index n in Omega(ambient)."""
    counts = {n: len(hs) for n, hs in enumerate_all_wr(ambient, N, threads=threads).items()}
    return CoeffSeries(counts, N, label=f"WR({ambient.text})")


def sigma_series(N: int) -> CoeffSeries:
    """All sublattices of a planar lattice: c_n = sigma(n)."""
    sig = divisor_sigma_sieve(N)
    return CoeffSeries({n: int(sig[n]) for n in range(1, N + 1)}, N, label="sigma")


def z_class_partial(ambient: ClassTuple, target: ClassTuple, s: float, N: int) -> float:
    """Sum of index^-s over distinct sublattices similar to Omega(target), index <= N."""
    _warn_if_divergent(s)
    found = enumerate_similar(ambient, target, N)
    return math.fsum(len(hs) * n**-s for n, hs in sorted(found.items()))


def z_class_epstein_partial(ambient: ClassTuple, target: ClassTuple, s: float, N: int) -> float:
    """(r0 q0 / r)^s * sum Q(m, n)^-s over admissible rotation-branch pairs of index <= N.

    Counts every parameter pair, so it dominates z_class_partial.
    """
    _warn_if_divergent(s)
    qf = build_q_form(ambient, target)
    den = ambient.r * ambient.q
    terms = sorted(target.r * k // den for _, _, br, k in admissible_points(qf, N) if br == ROTATION)
    return math.fsum(t**-s for t in terms)


def z_total_partial(ambient: ClassTuple, s: float, N: int, threads: int = 1) -> float:
    _warn_if_divergent(s)
    return wr_zeta_coeffs(ambient, N, threads).partial_sum(s)


def reference_phi_partial(s: float, N: int) -> float:
    """sum_{n <= N} phi(n) n^(-2s), a truncation of zeta(2s-1)/zeta(2s)."""
    phi = totient_sieve(N)
    n = np.arange(1, N + 1, dtype=np.float64)
    return float(np.sum(phi[1:] * n ** (-2.0 * s)))


def lattice_tail_bound(D: int, s: float, R: float) -> float:
    """Upper bound for sum of (m^2 + D n^2)^-s over integer pairs with m^2 + D n^2 >= R^2.

    Each such point owns the unit square centred on it; on that square the
    summand is at least (1 + delta/R)^(-2s) times its value at the centre, with
    delta = |(1/2, 1/2)| in the form's norm, and all squares lie outside radius
    R - delta. Integrating over that exterior gives the bound.
    """
    if s <= 1:
        return math.inf
    delta = math.sqrt((1 + D) / 4)
    if R <= delta:
        return math.inf
    integral = 2 * math.pi / math.sqrt(D) * (R - delta) ** (2 - 2 * s) / (2 * s - 2)
    return (1 + delta / R) ** (2 * s) * integral


def epstein_partial(D: int, s: float, box: int) -> tuple[float, float]:
    """sum (m^2 + D n^2)^-s over 0 < max(|m|, |n|) <= box, and a bound on the rest."""
    if box < 1:
        return 0.0, lattice_tail_bound(D, s, 1.0)
    total = 0.0
    m = np.arange(-box, box + 1, dtype=np.float64)
    m2 = m * m
    for n in range(-box, box + 1):
        vals = m2 + D * float(n * n)
        if n == 0:
            vals = vals[vals > 0]
        total += float(np.sum(vals ** (-s)))
    return total, lattice_tail_bound(D, s, float(box + 1))


@dataclass
class SandwichReport:
    D: int
    s: float
    q_max: int
    box: int
    lower: float
    zeta_d: float
    zeta_d_tail: float
    zeta_m: float
    epstein: float
    epstein_tail: float
    margins: dict = field(default_factory=dict)
    status: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v == "pass" for v in self.status.values())


def sandwich_check(D: int, s: float, q_max: int, box: int | None = None) -> SandwichReport:
    """Numeric check of lower <= zeta^d <= (2/sqrt3)^s zeta^m <= (4D/sqrt3)^s Epstein(D).

    The lower bound is compared with the truncated zeta^d; since truncation
    underestimates, a shortfall that is covered by the rigorous tail allowance
    is reported as inconclusive, and only a shortfall beyond it as a failure.
    """
    _require_squarefree(D)
    if s <= 1:
        raise ValidationError(f"sandwich bounds need s > 1, got {s}")
    box = q_max if box is None else box
    classes = list(class_witnesses(D, q_max))
    zeta_m = math.fsum(c.q**-s for c in classes)
    zeta_d = D ** (-s / 2) * math.fsum(c.r**-s for c in classes)
    # classes with q > q_max have witnesses with m^2 + D n^2 > q_max and q^-s <= (2D)^s (m^2+Dn^2)^-s
    zeta_d_tail = (2 / math.sqrt(3)) ** s * (2 * D) ** s * lattice_tail_bound(D, s, math.sqrt(q_max + 1))
    lower = (2 * math.sqrt(3 * D)) ** -s * float(riemann_zeta(2 * s - 1) / riemann_zeta(2 * s))
    epstein, epstein_tail = epstein_partial(D, s, box)

    rep = SandwichReport(D, s, q_max, box, lower, zeta_d, zeta_d_tail, zeta_m, epstein, epstein_tail)
    mid = (2 / math.sqrt(3)) ** s * zeta_m
    rep.margins = {
        "lower": zeta_d - lower,
        "lower_with_tail": zeta_d + zeta_d_tail - lower,
        "det_vs_min": mid - zeta_d,
        "min_vs_epstein": (2 * D) ** s * epstein - zeta_m,
        "chain_upper": (4 * D / math.sqrt(3)) ** s * epstein - mid,
    }
    m = rep.margins
    if m["lower"] >= 0:
        rep.status["lower"] = "pass"
    elif m["lower_with_tail"] >= 0:
        rep.status["lower"] = "inconclusive"
    else:
        rep.status["lower"] = "fail"
    for key in ("det_vs_min", "min_vs_epstein", "chain_upper"):
        rep.status[key] = "pass" if m[key] >= 0 else "fail"
    return rep


@dataclass(frozen=True)
class GrowthRow:
    N: int
    C: int
    C_over_N: float
    C_over_NlogN: float | None
    C_over_N2: float
    doubling: float | None


def growth_report(series: CoeffSeries, checkpoints) -> list[GrowthRow]:
    """Cumulative counts and normalized ratios at each checkpoint N."""
    cum = np.cumsum([0] + series.as_list())
    rows = []
    for N in checkpoints:
        if not 1 <= N <= series.horizon:
            raise ValidationError(f"checkpoint {N} outside 1..{series.horizon}")
        C = int(cum[N])
        doubling = None
        if 2 * N <= series.horizon and C:
            doubling = int(cum[2 * N]) / C
        rows.append(
            GrowthRow(
                N=N,
                C=C,
                C_over_N=C / N,
                C_over_NlogN=C / (N * math.log(N)) if N > 1 else None,
                C_over_N2=C / N**2,
                doubling=doubling,
            )
        )
    return rows
