"""WR sublattices of Omega_D(p0,q0) similar to a given Omega_D(p,q).

A sublattice similar to Omega_D(p,q) is sqrt(k/q) U Omega_D(p,q) for an
orthogonal U with cos t = (x p0 + y q0)/sqrt(qk), sin t = x r0 sqrt(D)/sqrt(qk).
Writing it as Omega_D(p0,q0) C Z^2 gives C = [[y, C12], [x, C22]] where C12 and
C22 are integers divided by q*r0. The pairs (x, y) are parameterized linearly
by (m, n) through the Bezout data (d1, d2, a, b), and k = Q(m, n).

The parameterization only enforces one of the two congruences that make C
integral, so each branch also carries the sublattice of (m, n) on which the
second one holds. Enumeration walks that sublattice only.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd, isqrt

from .arith import xgcd
from .classes import enumerate_classes
from .lattice import (
    ClassTuple,
    GramMatrix,
    InvariantViolation,
    Matrix,
    SublatticeHandle,
    ValidationError,
    gram_of,
    hnf_canonicalize,
    matmul,
    sublattice_gram,
)
from .reduction import gauss_reduce

ROTATION = "rotation"
REFLECTION = "reflection"
BRANCHES = (ROTATION, REFLECTION)

Form = tuple[int, int, int]


class TypeMismatch(ValidationError):
    pass


class NotASublattice(ValidationError):
    """The (m, n) pair is outside the admissible lattice of its branch."""


@dataclass(frozen=True)
class QFormData:
    ambient: ClassTuple
    target: ClassTuple
    d1: int
    d2: int
    a: int
    b: int
    Q1: Form
    Q: Form
    # k as a form in (m, n) on the reflection branch (differs from Q in general)
    reflection_form: Form
    # column bases of the admissible (m, n) sublattices, per branch
    rotation_lattice: Matrix
    reflection_lattice: Matrix

    def form(self, branch: str) -> Form:
        return self.Q if branch == ROTATION else self.reflection_form

    def lattice(self, branch: str) -> Matrix:
        return self.rotation_lattice if branch == ROTATION else self.reflection_lattice

    def effective_form(self, branch: str) -> Form:
        """k as a form in coordinates of the admissible lattice; integral index everywhere."""
        return _compose(self.form(branch), self.lattice(branch))


@dataclass(frozen=True)
class RotationSpec:
    branch: str
    m: int
    n: int
    x: int
    y: int
    k: int
    admissible: bool


def _eval(form: Form, m: int, n: int) -> int:
    A, B, C = form
    return A * m * m + B * m * n + C * n * n


def _compose(form: Form, L: Matrix) -> Form:
    A, B, C = form
    (l11, l12), (l21, l22) = L
    return (
        _eval(form, l11, l21),
        2 * A * l11 * l12 + B * (l11 * l22 + l12 * l21) + 2 * C * l21 * l22,
        _eval(form, l12, l22),
    )


def _congruence_lattice(alpha: int, beta: int, M: int) -> Matrix:
    """Column basis of {(u, v) : alpha*u + beta*v == 0 (mod M)}."""
    d = gcd(alpha, M)
    v0 = d // gcd(beta, d)
    Md = M // d
    u0 = 0
    if Md > 1:
        inv = pow((alpha // d) % Md, -1, Md)
        u0 = (-(beta * v0 // d) * inv) % Md
    return ((Md, u0), (0, v0))


def _xy_coeffs(ambient: ClassTuple, target: ClassTuple, d1: int, d2: int, a: int, branch: str):
    """(x, y) as linear forms in (m, n): returns ((xm, xn), (ym, yn))."""
    p0, r0 = ambient.p, ambient.r
    p, r, q = target.p, target.r, target.q
    am, an, bn = q * r0 // d1, a * (r0 * p - p0 * r) // d2, d1 // d2
    if branch == ROTATION:
        return (am, an), (0, bn)
    return (0, bn), (am, an)


def _c_numerators(ambient: ClassTuple, target: ClassTuple, branch: str, x, y):
    """Numerators of C12 and C22; the entries themselves are these divided by q*r0."""
    p0, r0, q0 = ambient.p, ambient.r, ambient.q
    p, r = target.p, target.r
    if branch == ROTATION:
        return -q0 * r * x + (r0 * p - p0 * r) * y, (r0 * p + p0 * r) * x + q0 * r * y
    return q0 * r * x + (r0 * p + p0 * r) * y, (r0 * p - p0 * r) * x - q0 * r * y


def _k_times_q_form(ambient: ClassTuple, xc, yc) -> Form:
    """q*k = (x p0 + y q0)^2 + D r0^2 x^2 as a form in (m, n)."""
    p0, r0, q0, D = ambient.p, ambient.r, ambient.q, ambient.D
    c = (xc[0] * p0 + yc[0] * q0, xc[1] * p0 + yc[1] * q0)
    w = D * r0 * r0
    return (
        c[0] ** 2 + w * xc[0] ** 2,
        2 * (c[0] * c[1] + w * xc[0] * xc[1]),
        c[1] ** 2 + w * xc[1] ** 2,
    )


def build_q_form(ambient: ClassTuple, target: ClassTuple, bezout_shift: int = 0) -> QFormData:
    """Classification form Q_{p0,q0,p,q} with its Bezout scaffolding.

    ``bezout_shift`` = j replaces (a, b) by (a + j q r0/d1, b - j q0 r/d1); the
    default picks the least nonnegative a.
    """
    if ambient.D != target.D:
        raise TypeMismatch(f"type mismatch: ambient D = {ambient.D}, target D = {target.D}")
    p0, r0, q0 = ambient.p, ambient.r, ambient.q
    p, r, q = target.p, target.r, target.q
    d1 = gcd(q0 * r, q * r0)
    v = r0 * p - p0 * r
    d2 = gcd(d1, v)
    _, a, _ = xgcd(q0 * r, q * r0)
    a = a % (q * r0 // d1) + bezout_shift * (q * r0 // d1)
    b = (d1 - a * q0 * r) // (q * r0)
    assert a * q0 * r + b * q * r0 == d1

    A1 = q0**2 * q**2 * r0**2 // d1**2
    B1 = (2 * a * v * q * q0**2 * r0 + 2 * d1 * q * q0 * r0 * p0) // (d1 * d2)
    C1 = (a**2 * v**2 * q0**2 + 2 * a * d1 * p0 * q0 * v + d1**2 * q0**2) // d2**2
    Q1 = (A1, B1, C1)

    forms = {}
    lattices = {}
    M = q * r0
    for branch in BRANCHES:
        xc, yc = _xy_coeffs(ambient, target, d1, d2, a, branch)
        qk = _k_times_q_form(ambient, xc, yc)
        if any(c % q for c in qk):
            raise InvariantViolation(f"q does not divide the {branch} form {qk}")
        forms[branch] = tuple(c // q for c in qk)
        # C12, C22 numerators are linear in (m, n): read coefficients off the unit vectors
        c12m, c22m = _c_numerators(ambient, target, branch, xc[0], yc[0])
        c12n, c22n = _c_numerators(ambient, target, branch, xc[1], yc[1])
        c12, c22 = (c12m, c12n), (c22m, c22n)
        L1 = _congruence_lattice(c12[0], c12[1], M)
        alpha = c22[0] * L1[0][0] + c22[1] * L1[1][0]
        beta = c22[0] * L1[0][1] + c22[1] * L1[1][1]
        L2 = _congruence_lattice(alpha, beta, M)
        lattices[branch] = hnf_canonicalize(matmul(L1, L2))[0]

    if forms[ROTATION] != _divide_exact(Q1, q):
        raise InvariantViolation(f"Q1 expansion disagrees with the rotation form for {ambient} / {target}")
    return QFormData(
        ambient=ambient,
        target=target,
        d1=d1,
        d2=d2,
        a=a,
        b=b,
        Q1=Q1,
        Q=forms[ROTATION],
        reflection_form=forms[REFLECTION],
        rotation_lattice=lattices[ROTATION],
        reflection_lattice=lattices[REFLECTION],
    )


def _divide_exact(form: Form, q: int) -> Form:
    if any(c % q for c in form):
        raise InvariantViolation(f"q = {q} does not divide Q1 = {form}")
    return tuple(c // q for c in form)


def _in_lattice(L: Matrix, m: int, n: int) -> bool:
    (l11, l12), (_, l22) = L
    if n % l22:
        return False
    return (m - l12 * (n // l22)) % l11 == 0


def branch_xy(qf: QFormData, branch: str, m: int, n: int) -> tuple[int, int]:
    xc, yc = _xy_coeffs(qf.ambient, qf.target, qf.d1, qf.d2, qf.a, branch)
    return xc[0] * m + xc[1] * n, yc[0] * m + yc[1] * n


def rotation_specs(qf: QFormData, m: int, n: int) -> list[RotationSpec]:
    """The rotation-branch and reflection-branch specs for (m, n)."""
    if m == 0 and n == 0:
        raise ValidationError("(m, n) = (0, 0) does not define a sublattice")
    specs = []
    for branch in BRANCHES:
        x, y = branch_xy(qf, branch, m, n)
        k = _eval(qf.form(branch), m, n)
        p0, r0, q0, D = qf.ambient.p, qf.ambient.r, qf.ambient.q, qf.ambient.D
        if (x * p0 + y * q0) ** 2 + D * (x * r0) ** 2 != qf.target.q * k:
            raise InvariantViolation(f"cos^2 + sin^2 != 1 for {branch} spec at ({m}, {n})")
        specs.append(RotationSpec(branch, m, n, x, y, k, _in_lattice(qf.lattice(branch), m, n)))
    return specs


def coeff_matrix(qf: QFormData, spec: RotationSpec) -> SublatticeHandle:
    """The sublattice defined by spec, in canonical HNF."""
    if not spec.admissible:
        raise NotASublattice(f"({spec.m}, {spec.n}) is not admissible on the {spec.branch} branch")
    M = qf.target.q * qf.ambient.r
    c12, c22 = _c_numerators(qf.ambient, qf.target, spec.branch, spec.x, spec.y)
    if c12 % M or c22 % M:
        raise InvariantViolation(f"non-integral coefficient matrix for {spec}")
    hnf, index = hnf_canonicalize(((spec.y, c12 // M), (spec.x, c22 // M)))
    num = qf.target.r * spec.k
    den = qf.ambient.r * qf.ambient.q
    if num % den or num // den != index:
        raise InvariantViolation(f"index {index} != r k / (r0 q0) for {spec}")
    return SublatticeHandle(qf.ambient, (hnf[0][0], hnf[0][1], hnf[1][1]), qf.target)


def _ellipse_points(form: Form, K: int):
    """All (u, v) != 0 with form(u, v) <= K, for a positive definite integer form."""
    A, B, C = form
    disc = 4 * A * C - B * B
    if K <= 0:
        return
    vmax = isqrt(4 * A * K // disc)
    for v in range(-vmax, vmax + 1):
        rad = B * B * v * v - 4 * A * (C * v * v - K)
        if rad < 0:
            continue
        s = isqrt(rad)
        lo = (-B * v - s) // (2 * A)
        hi = (-B * v + s) // (2 * A) + 1
        for u in range(lo, hi + 1):
            if (u or v) and A * u * u + B * u * v + C * v * v <= K:
                yield u, v


def admissible_points(qf: QFormData, index_max: int):
    """Yield (m, n, branch, k) for every admissible pair with index r k/(r0 q0) <= index_max."""
    r, r0, q0 = qf.target.r, qf.ambient.r, qf.ambient.q
    k_max = index_max * r0 * q0 // r
    if k_max < 1:
        return
    for branch in BRANCHES:
        L = qf.lattice(branch)
        eff = qf.effective_form(branch)
        # reduce the doubled Gram [[2A, B], [B, 2C]] so the ellipse scan is balanced
        red, V = gauss_reduce(GramMatrix(2 * eff[0], eff[1], 2 * eff[2]))
        if red.g11 > 2 * k_max:
            continue
        W = matmul(L, V)
        # diagonal entries are values of the doubled form, hence even
        form_red = (red.g11 // 2, red.g12, red.g22 // 2)
        for u, v in _ellipse_points(form_red, k_max):
            m = W[0][0] * u + W[0][1] * v
            n = W[1][0] * u + W[1][1] * v
            k = _eval(qf.form(branch), m, n)
            if (k * r) % (r0 * q0):
                raise InvariantViolation(f"non-integral index at ({m}, {n}) on {branch} branch")
            yield m, n, branch, k


def enumerate_similar(
    ambient: ClassTuple, target: ClassTuple, index_max: int, bezout_shift: int = 0
) -> dict[int, dict[SublatticeHandle, int]]:
    """Distinct sublattices of Omega(ambient) similar to Omega(target), by index.

    Each handle maps to its witness count: the number of (m, n, branch)
    triples producing it.
    """
    qf = build_q_form(ambient, target, bezout_shift)
    omega = gram_of(ambient, scaled=True)
    p, q = target.p, target.q
    found: dict[SublatticeHandle, int] = {}
    for m, n, branch, k in admissible_points(qf, index_max):
        x, y = branch_xy(qf, branch, m, n)
        handle = coeff_matrix(qf, RotationSpec(branch, m, n, x, y, k, True))
        if handle in found:
            found[handle] += 1
            continue
        red = gauss_reduce(sublattice_gram(omega, handle.matrix))[0]
        if red.entries != (k * q, k * p, k * q):
            raise InvariantViolation(f"{handle} reduces to {red.entries}, expected k = {k} times ({q}, {p}, {q})")
        found[handle] = 1
    by_index: dict[int, dict[SublatticeHandle, int]] = {}
    for handle in sorted(found, key=lambda h: (h.index, h.hnf)):
        by_index.setdefault(handle.index, {})[handle] = found[handle]
    return by_index


def candidate_targets(ambient: ClassTuple, index_max: int) -> list[ClassTuple]:
    """Classes that can occur below index_max: r <= index_max * q0 * r0.

    The q bound follows from r >= (sqrt(3)/2) q / sqrt(D).
    """
    r_max = index_max * ambient.q * ambient.r
    q_max = isqrt(4 * ambient.D * r_max * r_max // 3)
    return [c for c in enumerate_classes(ambient.D, q_max) if c.r <= r_max]


def _similar_chunk(args):
    ambient, targets, index_max = args
    return [enumerate_similar(ambient, t, index_max) for t in targets]


def enumerate_all_wr(
    ambient: ClassTuple, index_max: int, threads: int = 1
) -> dict[int, dict[SublatticeHandle, int]]:
    """Every WR sublattice of Omega(ambient) with index <= index_max, with witness counts."""
    if index_max < 1:
        raise ValidationError(f"index_max must be >= 1, got {index_max}")
    targets = candidate_targets(ambient, index_max)
    if threads > 1 and len(targets) > 1:
        chunks = [targets[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = [res for chunk in pool.map(_similar_chunk, [(ambient, c, index_max) for c in chunks]) for res in chunk]
    else:
        parts = [enumerate_similar(ambient, t, index_max) for t in targets]
    merged: dict[SublatticeHandle, int] = {}
    for part in parts:
        for handles in part.values():
            for h, w in handles.items():
                if h in merged:
                    raise InvariantViolation(f"{h.hnf} appears under two similarity classes")
                merged[h] = w
    by_index: dict[int, dict[SublatticeHandle, int]] = {}
    for h in sorted(merged, key=lambda h: (h.index, h.hnf)):
        by_index.setdefault(h.index, {})[h] = merged[h]
    return by_index
