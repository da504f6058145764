import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kspin.bounds import kirchberg_bound, sigma_r_bound
from kspin.report import all_pass, failing
from kspin.sphere import (
    SPHERE_SCAL,
    SphereSpinorBasis,
    _collocation_block,
    _collocation_levels,
    _d_column,
    build_sphere,
    dirac_spectrum,
    eq44_check,
    killing_spinor_space,
)


# -- basis --------------------------------------------------------------------

def test_rejects_out_of_range_truncation():
    with pytest.raises(ValueError, match="truncation order"):
        build_sphere(1)
    with pytest.raises(ValueError, match="truncation order"):
        build_sphere(65)


def test_basis_dimensions_and_counts():
    basis = build_sphere(10)
    assert basis.component_counts() == {v: 2 * v for v in range(1, 11)}
    assert basis.dimension == 2 * 10 * 11
    assert basis.weight_dimension() == 10 * 11


def test_profiles_are_orthonormal():
    assert build_sphere(12).gram_residual() <= 1e-12


def test_gram_holds_at_top_truncation():
    # quadrature stress case: the highest supported order
    assert build_sphere(64).gram_residual() <= 1e-12


def test_rotation_coefficients_match_closed_forms():
    theta = np.linspace(0.2, 2.9, 7)
    half = _d_column(5, 1, 1, theta)
    assert np.allclose(half[1], np.cos(theta / 2), atol=1e-14)
    assert np.allclose(half[3], (3 * np.cos(theta) - 1) / 2 * np.cos(theta / 2),
                       atol=1e-13)
    lower = _d_column(3, 1, -1, theta)
    assert np.allclose(lower[1], -np.sin(theta / 2), atol=1e-14)
    whole = _d_column(4, 2, 0, theta)
    assert np.allclose(whole[2], -np.sin(theta) / math.sqrt(2), atol=1e-14)


# -- operator invariants -------------------------------------------------------

def test_dirac_is_hermitian_and_odd():
    dirac = build_sphere(24).dirac()
    assert dirac.hermiticity_residual() <= 1e-12
    assert dirac.grading_residual() <= 1e-12


def test_fundamental_form_eigenvalues():
    basis = build_sphere(8)
    omega = basis.omega()
    for tmu in (-3, 1, 7):
        block = omega.block(tmu)
        n = block.shape[0] // 2
        want = np.diag([-1j] * n + [1j] * n)
        assert np.max(np.abs(block - want)) <= 1e-10


def test_spectrum_is_symmetric():
    evs = build_sphere(12).dirac().eigenvalues()
    assert np.allclose(np.sort(-evs), evs, atol=1e-10)


# -- spectrum ------------------------------------------------------------------

def test_interior_levels_and_multiplicities():
    spectrum = dirac_spectrum(16)
    assert spectrum.interior_max == 12
    assert spectrum.positive_levels == [(v, 2 * v) for v in range(1, 13)]
    assert sorted((abs(v), c) for v, c in spectrum.negative_levels) == \
        [(v, 2 * v) for v in range(1, 13)]
    assert spectrum.integer_deviation <= 1e-8
    assert spectrum.converged


def test_smallest_eigenvalue_saturates_bounds():
    spectrum = dirac_spectrum(16)
    evs = build_sphere(16).dirac().eigenvalues()
    lam = float(np.min(np.abs(evs)))
    assert abs(lam - 1.0) <= 1e-8
    assert spectrum.multiplicity(1) == 2 and spectrum.multiplicity(-1) == 2
    assert spectrum.multiplicity(2) == 4 and spectrum.multiplicity(-2) == 4
    assert kirchberg_bound(1, SPHERE_SCAL) == Fraction(1)
    assert sigma_r_bound(1, 0, SPHERE_SCAL) == Fraction(1)
    assert abs(lam ** 2 - float(kirchberg_bound(1, SPHERE_SCAL))) <= 1e-8


def test_oracle_agreement_and_refinement():
    spectrum = dirac_spectrum(16)
    assert spectrum.oracle_deviation <= 1e-8
    assert spectrum.oracle_drift < 1e-9
    assert spectrum.refinement_drift < 1e-9
    assert all_pass(spectrum.checks), failing(spectrum.checks)
    ids = {c["id"] for c in spectrum.checks}
    assert {"sphere.spectrum.oracle_match", "sphere.spectrum.refinement",
            "sphere.spectrum.bound_saturation"} <= ids


def test_spectrum_consistent_across_truncations():
    coarse = dict(dirac_spectrum(8).positive_levels)
    fine = dict(dirac_spectrum(12).positive_levels)
    for v in coarse:
        assert fine[v] == coarse[v]


def test_summary_serializes():
    spectrum = dirac_spectrum(8)
    blob = json.loads(json.dumps(spectrum.summary()))
    assert blob["label"] == "sphere.spectrum"
    assert blob["positive_levels"][0] == [1, 2]


# -- collocation oracle --------------------------------------------------------

def test_small_collocation_sweep_is_exact():
    got = _collocation_levels(3, 4)
    want = np.array([1, 1, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3], dtype=float)
    assert got.shape == want.shape
    assert np.max(np.abs(got - want)) <= 1e-10


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=-6, max_value=6).filter(lambda k: k != 0),
       st.integers(min_value=6, max_value=14))
def test_sector_blocks_have_symmetric_spectra(k, n):
    tmu = 2 * k - (1 if k > 0 else -1)
    ev = np.sort(np.linalg.eigvals(_collocation_block(tmu, n).astype(float)).real)
    assert np.allclose(ev, -ev[::-1], atol=1e-8)


# -- parallel sections ---------------------------------------------------------

def test_killing_space_has_dimension_two():
    space = killing_spinor_space(16)
    assert space.dimension == 2
    assert space.constant == Fraction(-1, 2)
    assert space.residual <= 1e-6
    assert space.rejected == 2
    assert {tmu for tmu, _ in space.vectors} <= {-1, 1}
    assert np.allclose(space.eigenvalues, 1.0, atol=1e-8)
    assert all_pass(space.checks), failing(space.checks)


def test_killing_summary_serializes():
    blob = json.loads(json.dumps(killing_spinor_space(8).summary()))
    assert blob["label"] == "sphere.killing"
    assert blob["dimension"] == 2


def test_curvature_identity_coefficients():
    records = eq44_check(16)
    assert all_pass(records), failing(records)
    tags = {r["eq_tag"] for r in records}
    assert tags == {"4.4", "2.14"}
    for r in records:
        if r["id"].startswith("sphere.eq44.component"):
            assert r["payload"]["total_coefficient"] == Fraction(1)
