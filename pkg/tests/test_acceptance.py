"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py``; the verdicts are printed in the
terminal summary under "acceptance criteria".
"""

import math
import random

import pytest

from conftest import HEX, RECT2, SQUARE
from wrlat import (
    build_q_form,
    coeff_matrix,
    conic_points,
    enumerate_classes,
    gram_of,
    growth_report,
    phi_bound_check,
    reduced,
    rotation_specs,
    sandwich_check,
    sigma_series,
    sublattice_gram,
    wr_zeta_coeffs,
)
from wrlat.arith import totient_sieve
from wrlat.cli import verify
from wrlat.oracle import pell_classes
from wrlat.sublattices import BRANCHES, _eval

SMALL_D = (1, 2, 3, 5, 6, 7, 10, 11)


@pytest.mark.slow
def test_criterion_1_oracle_equivalence(verdict):
    details = []
    ok = True
    for ambient in (HEX, SQUARE, RECT2):
        same, diffs, total = verify(ambient, 200)
        ok &= same
        details.append(f"{ambient.text}: {total} sublattices, {len(diffs)} diffs")
    verdict(ok, "; ".join(details))


def test_criterion_2_golden_micro_counts(verdict):
    hexa = wr_zeta_coeffs(HEX, 4).as_list()
    square = wr_zeta_coeffs(SQUARE, 4).as_list()
    verdict(hexa == [1, 0, 1, 1] and square == [1, 1, 0, 1], f"hex {hexa}, square {square}")


def test_criterion_3_class_parameterization(verdict):
    sizes = {}
    ok = True
    for D in (1, 2, 3, 5, 6, 7, 10):
        mine = set(enumerate_classes(D, 2000))
        direct = set(pell_classes(D, 2000))
        ok &= mine == direct
        sizes[D] = len(mine)
    listed = [c.text for c in enumerate_classes(3, 40)]
    expected = ["1,1,2,3", "1,4,7,3", "1,15,26,3", "13,20,37,3", "11,21,38,3"]
    ok &= listed == expected
    verdict(ok, f"class counts {sizes}; D=3 q<=40: {listed}")


def test_criterion_4_sigma_calibration(verdict):
    N = 5000
    C = sigma_series(N).cumulative()
    target = math.pi**2 / 12
    rel = abs(C / N**2 - target) / target
    verdict(rel <= 0.02, f"C({N}) = {C}, relative error {rel:.5f}")


def test_criterion_5_sandwich(verdict):
    lines = []
    ok = True
    for D in (1, 2, 3, 5, 6, 7):
        rep = sandwich_check(D, 2.0, 1000, box=1000)
        margins_ok = all(v >= 0 for k, v in rep.margins.items() if k != "lower_with_tail")
        ok &= margins_ok and rep.ok
        worst = min(rep.margins.values())
        lines.append(
            f"D={D} min margin {worst:.4g} (zeta_d tail {rep.zeta_d_tail:.2g}, epstein tail {rep.epstein_tail:.2g})"
        )
    verdict(ok, "; ".join(lines))


@pytest.mark.slow
def test_criterion_6_growth_law(verdict):
    series = wr_zeta_coeffs(HEX, 2**14)
    rows = growth_report(series, [2**10, 2**11, 2**12, 2**13])
    ok = all(1.8 <= row.doubling <= 2.6 for row in rows)
    ok &= rows[-1].C_over_N2 <= 0.05
    detail = ", ".join(f"C({row.N})={row.C} x{row.doubling:.3f}" for row in rows)
    verdict(ok, f"{detail}; C/N^2 = {rows[-1].C_over_N2:.5f}")


def _random_pairs(count, seed=20240611):
    rng = random.Random(seed)
    pools = {D: enumerate_classes(D, 300) for D in SMALL_D}
    return [(rng.choice(pools[D]), rng.choice(pools[D])) for D in rng.choices(SMALL_D, k=count)]


def _admissible_samples(qf, branch, rng, count):
    (l11, l12), (l21, l22) = qf.lattice(branch)
    out = []
    while len(out) < count:
        u, v = rng.randint(-6, 6), rng.randint(-6, 6)
        if u or v:
            out.append((l11 * u + l12 * v, l21 * u + l22 * v))
    return out


def test_criterion_7_structural_invariants(verdict):
    """Invariants of the classification form, with the index and Gram identity on admissible pairs.

    The sublattice attached to (m, n) exists only on the admissible lattice of
    its branch; see test_criterion_7_literal for the unrestricted statement.
    """
    rng = random.Random(7)
    failures = []
    checked = 0
    for ambient, target in _random_pairs(500):
        qf = build_q_form(ambient, target)
        q, r, p = target.q, target.r, target.p
        r0q0 = ambient.r * ambient.q
        if any(c % q for c in qf.Q1):
            failures.append(f"{ambient}/{target}: q does not divide Q1")
        A, B, C = qf.Q
        if not (A > 0 and 4 * A * C - B * B > 0):
            failures.append(f"{ambient}/{target}: Q not positive definite")
        for _ in range(10):
            m, n = rng.randint(-50, 50), rng.randint(-50, 50)
            if _eval(qf.Q1, m, n) % q:
                failures.append(f"{ambient}/{target}: q does not divide Q1({m},{n})")
        G = gram_of(ambient, scaled=True)
        for branch in BRANCHES:
            for m, n in _admissible_samples(qf, branch, rng, 4):
                spec = next(s for s in rotation_specs(qf, m, n) if s.branch == branch)
                k = spec.k
                if (r * k) % r0q0:
                    failures.append(f"{ambient}/{target}: r0q0 does not divide r*k at ({m},{n}) {branch}")
                    continue
                H = sublattice_gram(G, coeff_matrix(qf, spec).matrix)
                if reduced(H).entries != (k * q, k * p, k * q):
                    failures.append(f"{ambient}/{target}: Gram identity fails at ({m},{n}) {branch}")
                checked += 1
    verdict(not failures, f"500 pairs, {checked} sublattices checked, {len(failures)} failures {failures[:3]}")


def test_criterion_7_literal(verdict):
    """r0 q0 | r Q(m, n) for every integer pair (m, n), as literally stated.

    This divisibility is false in general: ambient (1,2,3,2) against itself has
    Q = 3m^2 + 2mn + 3n^2 and r Q(1,1) / (r0 q0) = 16/6. It is kept here,
    unweakened, so the gate reports it.
    """
    rng = random.Random(7)
    bad_pairs = 0
    example = None
    for ambient, target in _random_pairs(500):
        qf = build_q_form(ambient, target)
        r0q0 = ambient.r * ambient.q
        for _ in range(10):
            m, n = rng.randint(-50, 50), rng.randint(-50, 50)
            if (m or n) and (target.r * _eval(qf.Q, m, n)) % r0q0:
                bad_pairs += 1
                example = example or f"{ambient}/{target} at ({m},{n})"
                break
    verdict(bad_pairs == 0, f"{bad_pairs}/500 pairs violate it; e.g. {example}")


def test_criterion_8_phi_machinery(verdict):
    N = 10_000
    phi = totient_sieve(N)
    sums = [0] * (N + 1)
    for d in range(1, N + 1):
        for n in range(d, N + 1, d):
            sums[n] += int(phi[d])
    identity_ok = all(sums[n] == n for n in range(1, N + 1))
    bound_fail = [(D, n) for D in (1, 2, 3, 5) for n in range(1, 1001) if not phi_bound_check(D, n)[2]]
    verdict(identity_ok and not bound_fail, f"divisor-sum identity {identity_ok}, bound failures {bound_fail[:5]}")


def test_criterion_9_conic_points(verdict):
    small = conic_points(3, 7)
    heights = sorted(pt.q for pt in conic_points(3, 10_000))

    def count(N):
        return sum(1 for h in heights if h <= N)

    ratios = {N: count(2 * N) / count(N) for N in (625, 1250, 2500, 5000)}
    ok = len(small) == 10 and all(x <= 2.5 for x in ratios.values())
    detail = ", ".join(f"{N}:{x:.3f}" for N, x in ratios.items())
    verdict(ok, f"{len(small)} points with q <= 7; doublings {detail}")
