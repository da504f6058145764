"""End-to-end acceptance checks, one test per criterion.

Each test states its tolerance inline; exact-arithmetic criteria assert
identically-zero residuals.  Run with -v to get one pass/fail line per
criterion.
"""

import json
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from kspin import cli, sampling
from kspin.bounds import (
    ke_admissible_r,
    ke_eigenvalue,
    kirchberg_bound,
    middle_eigenvalue,
    newton_recover,
    ricci_eigendata,
    sigma_r_bound,
    special_eigenvalue,
    weitzenboeck_inversion,
)
from kspin.fiber import (
    RicciModel,
    TangentVector,
    build_fiber,
    c_minus,
    c_plus,
    clifford_minus,
    clifford_mul,
    clifford_plus,
    contraction_suite,
    iota_minus,
    iota_plus,
    j_map,
    omega_action,
)
from kspin.report import all_pass, failing
from kspin.scalars import QG
from kspin.sphere import build_sphere, dirac_spectrum, eq44_check, killing_spinor_space
from kspin.torus import (
    build_torus,
    commutator_suite,
    operator_identity_suite,
    product_operator_suite,
)
from kspin.twistor import (
    TwistorParams,
    build_connection,
    parallel_sections,
    twistor_kernel,
    weitzenboeck_check,
)


def test_01_fiber_algebra_exact_for_m_up_to_6():
    # all identities exact (zero tolerance), m = 1..6, every grade; < 30 s
    t0 = time.monotonic()
    for m in range(1, 7):
        ctx = build_fiber(m)
        rng = random.Random(m)
        phi = sampling.spinor(ctx, rng)

        for a in range(ctx.n):
            X = TangentVector.basis(ctx, a)
            for b in range(a, ctx.n):
                Y = TangentVector.basis(ctx, b)
                anti = (clifford_mul(X, clifford_mul(Y, phi))
                        + clifford_mul(Y, clifford_mul(X, phi)))
                want = phi.scale(ctx.scalar(-2 if a == b else 0))
                assert (anti - want).is_zero()

        counts = {}
        for mask in range(ctx.dim):
            state = ctx.basis_spinor(mask)
            r = mask.bit_count()
            eig = ctx.scalar(0, 2 * r - m)
            assert (omega_action(state) - state.scale(eig)).is_zero()
            counts[r] = counts.get(r, 0) + 1
        assert counts == {r: math.comb(m, r) for r in range(m + 1)}

        X = sampling.tangent(ctx, rng)
        for r in range(m + 1):
            hom = sampling.spinor(ctx, rng, grade=r)
            up, down = clifford_plus(X, hom), clifford_minus(X, hom)
            if not up.is_zero():
                assert up.grade() == r + 1
            if not down.is_zero():
                assert down.grade() == r - 1
            assert (up + down - clifford_mul(X, hom)).is_zero()

            psi = sampling.spinor(ctx, rng, grade=r + 1) if r < m else None
            if psi is not None and not psi.is_zero():
                emb = iota_plus(psi)
                assert (c_plus(emb) - psi).is_zero() and c_minus(emb).is_zero()
                norm = sum((c.norm_sq() for c in emb), ctx.scalar(0))
                assert norm == psi.norm_sq() * QG(Fraction(1, 2 * (r + 1)))
            if r >= 1:
                low = sampling.spinor(ctx, rng, grade=r - 1)
                emb = iota_minus(low)
                assert (c_minus(emb) - low).is_zero() and c_plus(emb).is_zero()
                norm = sum((c.norm_sq() for c in emb), ctx.scalar(0))
                assert norm == low.norm_sq() * QG(Fraction(1, 2 * (m - r + 1)))

        jj = j_map(j_map(phi))
        sign = -1 if (m * (m + 1) // 2) % 2 else 1
        assert (jj - phi.scale(ctx.scalar(sign))).is_zero()
        for r in range(m + 1):
            hom = sampling.spinor(ctx, rng, grade=r)
            assert j_map(hom).grade() == m - r

        ric = RicciModel(ctx, [Fraction(rng.randint(-9, 9), rng.randint(1, 5))
                               for _ in range(m)])
        records = contraction_suite(ric)
        assert all_pass(records), failing(records)
        assert all(r["mode"] == "exact" and r["residual"] == 0 for r in records)
    assert time.monotonic() - t0 < 30


def test_02_torus_identities_on_100_seeded_fields():
    # exact, zero tolerance, m <= 3, band <= 2; < 2 min
    t0 = time.monotonic()
    tags = set()
    for i in range(100):
        m = i % 3 + 1
        band = 1 + (i // 3) % 2
        grade = i % (m + 1)
        rng = random.Random(1000 + i)
        tor = build_torus(m, capacity=band + 3)
        phi = sampling.spinor_field(tor, rng, band=band, nmodes=3)
        psi = sampling.spinor_field(tor, rng, band=band, nmodes=3)
        graded = sampling.spinor_field(tor, rng, band=band, nmodes=2,
                                       grade=grade)
        X = sampling.vector_field(tor, rng, band=1)
        records = (operator_identity_suite(phi, psi)
                   + commutator_suite(X, phi)
                   + weitzenboeck_check(graded, grade))
        assert all_pass(records), (i, failing(records))
        assert all(r["mode"] == "exact" and r["residual"] == 0
                   for r in records)
        tags |= {r["eq_tag"] for r in records if r["eq_tag"]}
    assert {"1.7", "2.7", "3.1", "3.2", "3.3"} <= tags
    assert time.monotonic() - t0 < 120


def test_03_twistor_kernels_are_constants():
    # dim = binomial(m, r), nullity 0 off the zero mode; exact; < 2 min
    t0 = time.monotonic()
    for m in range(1, 5):
        for r in range(m + 1):
            rep = twistor_kernel(m, r, band=2)
            assert rep.total_dim == math.comb(m, r), (m, r, rep.total_dim)
            assert rep.all_parallel, (m, r)
    assert time.monotonic() - t0 < 120


def test_04_parallel_sections_match_kernels():
    # connection kernels vs twistor kernels, both variants; exact; < 2 min
    t0 = time.monotonic()
    for m in range(2, 5):
        band = 2 if m <= 3 else 1
        for r in range(1, m):
            if 2 * r == m:
                continue
            expected = twistor_kernel(m, r, band).total_dim
            for variant in ("full", "reduced"):
                conn = build_connection(TwistorParams(m, r), variant)
                got = parallel_sections(conn, band).total_dim
                assert got == expected, (m, r, variant, got, expected)
    assert time.monotonic() - t0 < 120


def test_05_coefficient_identities_exact():
    ic = weitzenboeck_inversion(4, 1)
    assert ic.plus_minus_dirac_sq == -6 and ic.plus_minus_scal == 2
    for m in range(2, 9):
        for r in range(m + 1):
            if 2 * r == m:
                continue
            ic = weitzenboeck_inversion(m, r)
            assert ic.minus_plus_dirac_sq + ic.plus_minus_dirac_sq == 1
            assert ic.minus_plus_scal + ic.plus_minus_scal == 0
            lo, hi = 2 * (r + 1), 2 * (m - r + 1)
            assert (ic.minus_plus_dirac_sq / lo
                    + ic.plus_minus_dirac_sq / hi) == 1
            assert (ic.minus_plus_scal / lo
                    + ic.plus_minus_scal / hi) == Fraction(-1, 4)
    for m in range(1, 9):
        for r in sorted(ke_admissible_r(m)):
            ke_eigenvalue(m, r, Fraction(7, 3))  # re-derives internally
    for m in range(1, 16, 2):
        r = (m - 1) // 2
        for S in (1, 2, Fraction(9, 4), 30):
            assert sigma_r_bound(m, r, S) == kirchberg_bound(m, S)
            assert ke_eigenvalue(m, r, S) == special_eigenvalue(
                m, r, S, "anti-holomorphic")


def test_06_eigendata_and_newton_recovery():
    S = Fraction(35, 2)
    for m in range(2, 7):
        for r in range(1, (m + 1) // 2):
            if 2 * r >= m:
                continue
            rep = ricci_eigendata(m, r, S, "anti-holomorphic")
            assert sum(v * mu for v, mu in rep.pairs) == S
            expected = {v: mu for v, mu in rep.pairs if v != 0}
            if rep.zero_multiplicity:
                expected[Fraction(0)] = rep.zero_multiplicity
            got = {v: mu for v, mu in newton_recover(rep.power_sums(2 * m))}
            assert got == expected, (m, r)
    for m in (2, 4, 6):
        with pytest.raises(ValueError):
            ricci_eigendata(m, m // 2, S, "anti-holomorphic")


def test_07_sphere_model_cross_validated():
    # float tolerances: levels 1e-8, drift 1e-9, residuals 1e-6; < 1 min
    t0 = time.monotonic()
    spectrum = dirac_spectrum(16)
    evs = build_sphere(16).dirac().eigenvalues()
    lam_sq = float(np.min(np.abs(evs))) ** 2
    assert abs(lam_sq - 1.0) <= 1e-8
    assert kirchberg_bound(1, 2) == sigma_r_bound(1, 0, 2) == 1
    for v, mult in ((1, 2), (2, 4), (3, 6)):
        assert spectrum.multiplicity(v) == mult and spectrum.multiplicity(-v) == mult
    assert spectrum.integer_deviation <= 1e-8
    assert spectrum.oracle_deviation <= 1e-8
    assert spectrum.oracle_drift < 1e-9
    assert spectrum.refinement_drift < 1e-9

    space = killing_spinor_space(16)
    assert space.dimension == 2
    assert space.residual <= 1e-6

    records = eq44_check(16)
    assert all_pass(records), failing(records)
    assert all(r["residual"] <= 1e-6 for r in records)
    assert time.monotonic() - t0 < 60


def test_08_middle_type_sits_below_the_bound():
    for m in (2, 4, 6, 8, 10, 12):
        for S in (1, 2, Fraction(17, 3), 12):
            value, verdict = middle_eigenvalue(m, S)
            assert value < kirchberg_bound(m, S), (m, S)
            assert verdict == "excluded"


def test_09_product_torus_suite():
    # split-operator relations and grade bookkeeping; exact; < 1 min
    t0 = time.monotonic()
    for m1, m2 in ((1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)):
        t1 = build_torus(m1, capacity=3)
        t2 = build_torus(m2, capacity=3)
        records = product_operator_suite(t1, t2, seed=5)
        assert all_pass(records), (m1, m2, failing(records))
        assert all(r["mode"] == "exact" and r["residual"] == 0
                   for r in records)
    assert time.monotonic() - t0 < 60


def test_10_reports_are_deterministic(tmp_path):
    for argv in (["bounds", "--m", "6"],
                 ["verify-identities", "--m", "2", "--r", "1", "--seed", "3"],
                 ["twistor-kernel", "--m", "2", "--r", "1"]):
        first = tmp_path / "first.json"
        second = tmp_path / "second.json"
        assert cli.main(argv + ["--format", "json", "--out", str(first)]) == 0
        assert cli.main(argv + ["--format", "json", "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()
        json.loads(first.read_text(encoding="utf-8"))
