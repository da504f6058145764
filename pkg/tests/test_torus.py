import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kspin import sampling
from kspin.fiber import SpinorVector, TangentVector, build_fiber
from kspin.scalars import QG
from kspin.torus import (
    BandError,
    FourierSpinorField,
    TorusContext,
    apply_D,
    apply_Dc,
    apply_Dminus,
    apply_Dplus,
    build_torus,
    clifford_field,
    commutator_suite,
    covariant_derivative,
    dirac_of_vector,
    operator_identity_suite,
    product_context,
    product_field,
    product_operator_suite,
    rough_laplacian,
)


def single_mode(tor, k, rng, grade=None, band=None):
    v = sampling.spinor(tor.fiber, rng, grade=grade)
    return tor.spinor_field(band if band is not None else max(abs(c) for c in k) if any(k) else 0,
                            {tuple(k): v})


# -- plumbing ---------------------------------------------------------------

def test_wavevector_validation():
    tor = build_torus(2, capacity=3)
    with pytest.raises(ValueError):
        tor.wavevector((1, 0))  # wrong length
    with pytest.raises(TypeError):
        tor.wavevector((1, 0, Fraction(1, 2), 0))
    with pytest.raises(BandError):
        tor.spinor_field(5, {})
    with pytest.raises(BandError):
        # mode sits outside the declared band
        v = tor.fiber.basis_spinor(0)
        tor.spinor_field(1, {(2, 0, 0, 0): v})


def test_band_widening_overflow():
    tor = build_torus(1, capacity=2)
    rng = random.Random(0)
    phi = sampling.spinor_field(tor, rng, band=2, nmodes=2)
    X = sampling.vector_field(tor, rng, band=1, nmodes=1)
    with pytest.raises(BandError):
        clifford_field(X, phi)
    with pytest.raises(BandError):
        covariant_derivative(X, phi)


def test_constant_fields_are_parallel():
    tor = build_torus(2, capacity=2)
    rng = random.Random(3)
    phi = tor.constant_spinor_field(sampling.spinor(tor.fiber, rng))
    X = sampling.vector_field(tor, rng, band=1, nmodes=2)
    assert covariant_derivative(X, phi).is_zero()
    for op in (apply_D, apply_Dc, apply_Dplus, apply_Dminus, rough_laplacian):
        assert op(phi).is_zero()


def test_frame_derivative_is_fourier_multiplier():
    tor = build_torus(2, capacity=2)
    rng = random.Random(5)
    k = (1, -2, 0, 1)
    phi = single_mode(tor, k, rng, band=2)
    for j in range(4):
        got = covariant_derivative(j, phi)
        want = phi.scale(tor.fiber.scalar(0, k[j]))
        assert (got - want).is_zero()


@pytest.mark.parametrize("m", [1, 2, 3])
def test_nabla_preserves_grade(m):
    tor = build_torus(m, capacity=4)
    rng = random.Random(7 + m)
    r = rng.randrange(m + 1)
    phi = sampling.spinor_field(tor, rng, band=1, nmodes=3, grade=r)
    X = sampling.vector_field(tor, rng, band=1, nmodes=2)
    out = covariant_derivative(X, phi)
    assert out.grades() in ([], [r])


# -- Dirac operators on single modes ------------------------------------------

@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(min_value=-3, max_value=3), min_size=4, max_size=4),
       st.integers(min_value=0, max_value=10 ** 6))
def test_dirac_square_is_mode_norm(k, seed):
    # oracle: c(k)c(k) = -|k|^2, so (i c(k))^2 multiplies by sum k_l^2
    tor = build_torus(2, capacity=3)
    phi = single_mode(tor, tuple(k), random.Random(seed), band=3)
    norm2 = sum(c * c for c in k)
    got = apply_D(apply_D(phi))
    assert (got - phi.scale(norm2)).is_zero()


def test_rough_laplacian_matches_mode_multiplier():
    tor = build_torus(2, capacity=2)
    rng = random.Random(11)
    k = (2, -1, 0, 2)
    phi = single_mode(tor, k, rng, band=2)
    got = rough_laplacian(phi)
    assert (got - phi.scale(sum(c * c for c in k))).is_zero()


def test_dirac_variants_mode_preserving_and_grade_shifting():
    tor = build_torus(3, capacity=2)
    rng = random.Random(13)
    phi = sampling.spinor_field(tor, rng, band=2, nmodes=3, grade=1)
    up, down = apply_Dplus(phi), apply_Dminus(phi)
    assert set(up.support()) <= set(phi.support())
    assert set(down.support()) <= set(phi.support())
    assert up.grades() in ([], [2])
    assert down.grades() in ([], [0])


@pytest.mark.parametrize("m", [1, 2, 3])
def test_operator_identity_suite(m):
    tor = build_torus(m, capacity=4)
    rng = random.Random(17 + m)
    for _ in range(3):
        phi = sampling.spinor_field(tor, rng, band=2, nmodes=3)
        psi = sampling.spinor_field(tor, rng, band=2, nmodes=3)
        checks = operator_identity_suite(phi, psi)
        assert all(c["status"] == "pass" for c in checks), checks
        assert all(c["residual"] == 0 for c in checks)


def test_parseval_pairing_values():
    tor = build_torus(1, capacity=1)
    ctx = tor.fiber
    one = ctx.basis_spinor(0)
    phi = tor.spinor_field(1, {(1, 0): one, (0, 0): one.scale(QG(2))})
    psi = tor.spinor_field(1, {(1, 0): one.scale(QG(0, 1))})
    # only shared modes contribute; inner is Hermitian in the second slot
    assert phi.l2_inner(psi) == QG(0, -1)
    assert phi.l2_norm_sq() == QG(5)


# -- commutator rules ----------------------------------------------------------

@pytest.mark.parametrize("m", [1, 2])
def test_commutator_suite_full(m):
    tor = build_torus(m, capacity=4)
    rng = random.Random(23 + m)
    phi = sampling.spinor_field(tor, rng, band=1, nmodes=3)
    X = sampling.vector_field(tor, rng, band=1, nmodes=2)
    checks = commutator_suite(X, phi)
    assert len(checks) == 13
    assert all(c["status"] == "pass" for c in checks), [
        c["id"] for c in checks if c["status"] != "pass"]


def test_commutator_suite_m3_once():
    tor = build_torus(3, capacity=4)
    rng = random.Random(29)
    phi = sampling.spinor_field(tor, rng, band=2, nmodes=2)
    X = sampling.vector_field(tor, rng, band=1, nmodes=2)
    checks = commutator_suite(X, phi)
    assert all(c["status"] == "pass" for c in checks)


def test_commutator_tag_filter():
    tor = build_torus(1, capacity=3)
    rng = random.Random(31)
    phi = sampling.spinor_field(tor, rng, band=1, nmodes=2)
    X = sampling.vector_field(tor, rng, band=1, nmodes=1)
    checks = commutator_suite(X, phi, tags=("3.1", "3.2", "3.3"))
    assert [c["eq_tag"] for c in checks] == ["3.1", "3.2", "3.2", "3.3", "3.3"]
    assert all(c["status"] == "pass" for c in checks)


def test_cosine_field_example():
    # X = cos(x_1) e_2 has modes +-(1,0,...) with coefficient e_2/2
    tor = build_torus(2, capacity=4)
    ctx = tor.fiber
    rng = random.Random(37)
    half_e2 = TangentVector.basis(ctx, 1).scale(ctx.scalar(Fraction(1, 2)))
    X = tor.vector_field(1, {(1, 0, 0, 0): half_e2, (-1, 0, 0, 0): half_e2})
    assert X.is_real()
    phi = single_mode(tor, (0, 1, -1, 0), rng, band=1)
    checks = commutator_suite(X, phi, tags=("3.1",))
    assert checks[0]["status"] == "pass"


def test_dirac_of_vector_splits_into_graded_parts():
    tor = build_torus(2, capacity=4)
    rng = random.Random(41)
    phi = sampling.spinor_field(tor, rng, band=1, nmodes=2)
    X = sampling.vector_field(tor, rng, band=1, nmodes=2)
    total = dirac_of_vector(X, phi)
    split = dirac_of_vector(X, phi, "plus") + dirac_of_vector(X, phi, "minus")
    assert (total - split).is_zero()


def test_constant_x_constant_phi_all_zero():
    tor = build_torus(2, capacity=2)
    rng = random.Random(43)
    X = tor.constant_vector_field(sampling.tangent(tor.fiber, rng))
    phi = tor.constant_spinor_field(sampling.spinor(tor.fiber, rng))
    lhs = apply_D(clifford_field(X, phi)) + clifford_field(X, apply_D(phi))
    assert lhs.is_zero()
    assert dirac_of_vector(X, phi).is_zero()


# -- products ------------------------------------------------------------------

def test_product_grade_dimension_example():
    # two circles-of-surfaces: middle grade of the product has dimension 2
    t1 = build_torus(1, capacity=2)
    t2 = build_torus(1, capacity=2)
    suite = product_operator_suite(t1, t2, seed=0, trials=1)
    dims = next(c for c in suite if c["id"] == "product.grade_decomposition")
    assert dims["status"] == "pass"
    assert dims["payload"]["dims"]["1"] == {"0x1": 1, "1x0": 1}


@pytest.mark.parametrize("m1,m2", [(1, 1), (1, 2), (2, 1)])
def test_product_operator_suite(m1, m2):
    t1 = build_torus(m1, capacity=3)
    t2 = build_torus(m2, capacity=3)
    checks = product_operator_suite(t1, t2, seed=m1 * 10 + m2, trials=3)
    assert all(c["status"] == "pass" for c in checks), [
        c["id"] for c in checks if c["status"] != "pass"]


def test_product_field_modes_concatenate():
    t1 = build_torus(1, capacity=1)
    t2 = build_torus(1, capacity=1)
    rng = random.Random(47)
    f1 = single_mode(t1, (1, 0), rng, band=1)
    f2 = single_mode(t2, (0, -1), rng, band=1)
    prod = product_field(f1, f2)
    assert prod.support() == [(1, 0, 0, -1)]
    assert prod.torus.fiber.m == 2


def test_product_requires_matching_modes():
    t1 = build_torus(1, capacity=1)
    t2 = TorusContext(build_fiber(1, mode="float"), capacity=1)
    with pytest.raises(ValueError):
        product_context(t1, t2)
