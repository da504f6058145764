from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kspin.bounds import (
    BoundQuery,
    EigendataReport,
    classification_report,
    dim_bound,
    friedrich_bound,
    hamiltonian_form_coefficient,
    ke_admissible_r,
    ke_eigenvalue,
    killing_dim,
    kirchberg_bound,
    lemma26_bound,
    middle_eigenvalue,
    newton_recover,
    normalized_ricci_coefficient,
    ricci_eigendata,
    sigma_r_bound,
    special_eigenvalue,
    wbf_coefficient,
    weitzenboeck_inversion,
)
from kspin.twistor import rank_bound


# -- lower bounds --------------------------------------------------------------

def test_friedrich_values():
    assert friedrich_bound(2, 2) == 1
    assert friedrich_bound(4, 12) == 4
    assert friedrich_bound(6, 1) == Fraction(3, 10)


def test_friedrich_domain():
    with pytest.raises(ValueError):
        friedrich_bound(1, 2)
    with pytest.raises(ValueError):
        friedrich_bound(4, 0)
    with pytest.raises(ValueError):
        friedrich_bound(4, -3)


@given(st.integers(min_value=2, max_value=40),
       st.fractions(min_value=Fraction(1, 100), max_value=100),
       st.fractions(min_value=Fraction(1, 100), max_value=100))
def test_friedrich_monotone_in_curvature(n, s1, s2):
    lo, hi = min(s1, s2), max(s1, s2)
    assert friedrich_bound(n, lo) <= friedrich_bound(n, hi)


def test_kirchberg_values():
    assert kirchberg_bound(1, 2) == 1
    assert kirchberg_bound(3, 12) == 4
    assert kirchberg_bound(2, 4) == 2
    assert kirchberg_bound(4, 12) == 4


def test_kirchberg_beats_friedrich():
    # the Kaehler refinement is at least as strong in every dimension
    for m in range(1, 12):
        assert kirchberg_bound(m, 12) >= friedrich_bound(2 * m, 12)


def test_sigma_r_values():
    assert sigma_r_bound(1, 0, 2) == 1
    assert sigma_r_bound(4, 1, 12) == 4
    with pytest.raises(ValueError):
        sigma_r_bound(3, 4, 2)
    with pytest.raises(ValueError):
        sigma_r_bound(3, 1, 0)


def test_sigma_r_symmetry_and_kirchberg_match():
    for m in range(1, 16, 2):
        r = (m - 1) // 2
        assert sigma_r_bound(m, r, 12) == kirchberg_bound(m, 12)
    for m in range(1, 9):
        for r in range(m + 1):
            assert sigma_r_bound(m, r, 7) == sigma_r_bound(m, m - r, 7)


def test_lemma26():
    assert lemma26_bound(2, 4) == 2
    for m, r in ((3, 1), (5, 2), (6, 1)):
        assert lemma26_bound(2 * (r + 1), 8) == sigma_r_bound(m, r, 8)
    # decreasing in k towards infS/4
    vals = [lemma26_bound(k, 4) for k in range(2, 30)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert all(v > 1 for v in vals)
    with pytest.raises(ValueError):
        lemma26_bound(1, 4)


def test_bound_query_dispatch():
    assert BoundQuery("Friedrich", 2, n=2).evaluate() == (1, "1.10")
    assert BoundQuery("Kirchberg-odd", 12, m=3).evaluate() == (4, "1.12")
    assert BoundQuery("Kirchberg-even", 4, m=2).evaluate() == (2, "1.13")
    assert BoundQuery("Sigma-r", 2, m=1, r=0).evaluate() == (1, "2.10")
    assert BoundQuery("sigma-r", 8, m=4, r=3).evaluate()[1] == "2.11"


def test_bound_query_validation():
    with pytest.raises(ValueError):
        BoundQuery("friedrich", 2)  # no dimension
    with pytest.raises(ValueError):
        BoundQuery("friedrich", 2, m=2, n=6)
    with pytest.raises(ValueError):
        BoundQuery("friedrich", 2, n=5)
    with pytest.raises(ValueError):
        BoundQuery("friedrich", 0, m=2)
    with pytest.raises(ValueError):
        BoundQuery("newton", 2, m=2)
    with pytest.raises(ValueError):
        BoundQuery("kirchberg-odd", 2, m=2).evaluate()
    with pytest.raises(ValueError):
        BoundQuery("sigma-r", 2, m=2).evaluate()


# -- forced eigenvalues --------------------------------------------------------

def test_special_eigenvalue_values():
    assert special_eigenvalue(3, 1, 20, "anti-holomorphic") == Fraction(20, 3)
    assert special_eigenvalue(1, 0, 2, "anti-holomorphic") == 1
    assert special_eigenvalue(1, 1, 2, "holomorphic") == 1
    with pytest.raises(ValueError):
        special_eigenvalue(3, 1, 20, "mixed")


def test_special_eigenvalue_side_symmetry():
    for m in range(1, 7):
        for r in range(m + 1):
            assert (special_eigenvalue(m, r, 9, "anti-holomorphic")
                    == special_eigenvalue(m, m - r, 9, "holomorphic"))


def test_special_eigenvalue_meets_bound():
    # equality case of the type-r estimate below the middle
    for m in range(2, 9):
        for r in range((m - 1) // 2 + 1):
            assert (special_eigenvalue(m, r, 16, "anti-holomorphic")
                    == sigma_r_bound(m, r, 16))


def test_middle_eigenvalue():
    value, verdict = middle_eigenvalue(2, 4)
    assert value == Fraction(4, 3) and verdict == "excluded"
    assert value < kirchberg_bound(2, 4) == 2
    value, verdict = middle_eigenvalue(4, 20)
    assert value == 6 and verdict == "excluded"
    assert kirchberg_bound(4, 20) == Fraction(20, 3)
    assert middle_eigenvalue(6, 0) == (0, "parallel")
    with pytest.raises(ValueError):
        middle_eigenvalue(3, 4)


def test_middle_eigenvalue_always_below_even_bound():
    for m in range(2, 13, 2):
        for s in (1, 4, Fraction(7, 3), 100):
            value, verdict = middle_eigenvalue(m, s)
            assert verdict == "excluded"
            assert value < kirchberg_bound(m, s)


# -- operator-square inversion ---------------------------------------------------

def test_weitzenboeck_inversion_printed_values():
    co = weitzenboeck_inversion(4, 1)
    assert (co.plus_minus_dirac_sq, co.plus_minus_scal) == (-6, 2)
    assert (co.minus_plus_dirac_sq, co.minus_plus_scal) == (7, -2)


def test_weitzenboeck_inversion_middle_is_singular():
    with pytest.raises(ValueError):
        weitzenboeck_inversion(4, 2)
    with pytest.raises(ValueError):
        weitzenboeck_inversion(2, 1)


def test_weitzenboeck_inversion_consistency():
    for m in range(1, 11):
        for r in range(m + 1):
            if 2 * r == m:
                continue
            co = weitzenboeck_inversion(m, r)
            a = (co.minus_plus_dirac_sq, co.minus_plus_scal)
            b = (co.plus_minus_dirac_sq, co.plus_minus_scal)
            # the sum returns the plain operator square
            assert (a[0] + b[0], a[1] + b[1]) == (1, 0)
            # eliminating the square instead couples the two composites
            c = Fraction(-(2 * r + 1) * (m - r + 1), (2 * m - 2 * r + 1) * (r + 1))
            assert b[0] == c * a[0]
            assert b[1] == c * a[1] + Fraction(m - r + 1, 2 * (2 * m - 2 * r + 1))
            cc = Fraction(-(2 * m - 2 * r + 1) * (r + 1), (2 * r + 1) * (m - r + 1))
            assert a[0] == cc * b[0]
            assert a[1] == cc * b[1] + Fraction(r + 1, 2 * (2 * r + 1))


# -- Einstein background --------------------------------------------------------

def test_ke_eigenvalue_values():
    assert ke_eigenvalue(3, 1, 21) == 7
    assert ke_eigenvalue(1, 0, 2) == 1
    for m in range(1, 9):
        # the internal re-derivation asserts the rational identity; touch it
        ke_eigenvalue(m, m // 3, 5)


def test_ke_killing_type_rigidity():
    for m in range(1, 16, 2):
        rk = (m - 1) // 2
        s = Fraction(13, 2)
        assert ke_eigenvalue(m, rk, s) == special_eigenvalue(m, rk, s, "anti-holomorphic")
        for r in range(1, m):
            if r == rk:
                continue
            assert ke_eigenvalue(m, r, s) != special_eigenvalue(m, r, s, "anti-holomorphic")


def test_ke_admissible_r():
    assert ke_admissible_r(3) == {0, 1}
    assert ke_admissible_r(4) == {0, 2}
    assert ke_admissible_r(1) == {0}
    for m in range(1, 9):
        roots = {r for r in range(m // 2 + 1)
                 if r * (m - 2 * r) * (m - 2 * r - 1) == 0}
        assert ke_admissible_r(m) == roots


# -- Ricci eigendata -------------------------------------------------------------

def test_ricci_eigendata_table():
    rep = ricci_eigendata(5, 1, 30, "anti-holomorphic")
    assert rep.pairs == ((5, 6), (0, 4))
    assert rep.trace() == 30
    assert rep.zero_multiplicity == 4


def test_ricci_eigendata_einstein_case():
    rep = ricci_eigendata(3, 1, 18, "anti-holomorphic")
    assert rep.zero_multiplicity == 0
    assert rep.pairs == ((3, 6),)
    assert rep.trace() == 18


def test_ricci_eigendata_mirror():
    anti = ricci_eigendata(5, 1, 30, "anti-holomorphic")
    holo = ricci_eigendata(5, 4, 30, "holomorphic")
    assert anti.pairs == holo.pairs


def test_ricci_eigendata_rejects_wrong_side():
    with pytest.raises(ValueError):
        ricci_eigendata(4, 2, 10, "anti-holomorphic")
    with pytest.raises(ValueError):
        ricci_eigendata(5, 2, 10, "holomorphic")
    with pytest.raises(ValueError):
        ricci_eigendata(5, 0, 10, "anti-holomorphic")
    with pytest.raises(ValueError):
        ricci_eigendata(5, 1, 0, "anti-holomorphic")


def test_eigendata_report_invariants():
    with pytest.raises(ValueError):
        EigendataReport(2, 1, Fraction(5), "anti-holomorphic",
                        [(Fraction(1), 4)], 0)  # trace mismatch
    with pytest.raises(ValueError):
        EigendataReport(2, 1, Fraction(4), "anti-holomorphic",
                        [(Fraction(2), 2)], 0)  # multiplicities sum to 2, not 4
    with pytest.raises(ValueError):
        EigendataReport(2, 1, Fraction(0), "anti-holomorphic",
                        [(Fraction(0), -4), (Fraction(0), 8)], 0)


def test_power_sums_shape():
    rep = ricci_eigendata(5, 1, 30, "anti-holomorphic")
    assert rep.power_sums(4) == [6 * 5 ** s for s in range(1, 5)]


# -- Newton round trip -----------------------------------------------------------

def test_newton_recover_exact():
    sums = [6 * Fraction(5) ** s for s in range(1, 11)]
    assert newton_recover(sums) == [(5, 6), (0, 4)]
    assert newton_recover([0, 0, 0, 0]) == [(0, 4)]
    assert newton_recover([2, 2, 2, 2]) == [(1, 2), (0, 2)]


def test_newton_recover_is_inverse_of_power_sums():
    for m, r, s, kind in ((5, 1, 30, "anti-holomorphic"),
                          (3, 1, 18, "anti-holomorphic"),
                          (6, 2, Fraction(35, 2), "anti-holomorphic"),
                          (5, 4, 30, "holomorphic")):
        rep = ricci_eigendata(m, r, s, kind)
        expected = {v: mu for v, mu in rep.pairs if v != 0}
        if rep.zero_multiplicity:
            expected[Fraction(0)] = rep.zero_multiplicity
        got = {v: mu for v, mu in newton_recover(rep.power_sums(2 * m))}
        assert got == expected


def test_newton_recover_two_cluster_fallback():
    # eigenvalues 3, 3, 1, 1: not a single repeated value, so the numeric
    # branch has to cluster
    sums = [2 * 3 ** s + 2 * 1 ** s for s in range(1, 5)]
    got = newton_recover(sums)
    assert [mu for _, mu in got] == [2, 2]
    assert abs(got[0][0] - 3) < 1e-8 and abs(got[1][0] - 1) < 1e-8


def test_newton_recover_rejects_complex_spectrum():
    with pytest.raises(ValueError):
        newton_recover([0, -2, 0, 2])
    with pytest.raises(ValueError):
        newton_recover([])


# -- structure reports -----------------------------------------------------------

def test_dim_bound():
    assert dim_bound(4, 1) == 11
    assert dim_bound(1, 0) == 2
    assert dim_bound(3, 1) == 7
    for m in range(1, 6):
        for r in range(m + 1):
            assert dim_bound(m, r) == rank_bound(m, r)


def test_killing_dim():
    assert killing_dim(3) == 6
    assert killing_dim(1) == 2
    assert killing_dim(5) == 20
    with pytest.raises(ValueError):
        killing_dim(4)


def test_wbf_coefficient():
    assert wbf_coefficient(4, 1) == Fraction(1, 15)
    assert wbf_coefficient(3, 1) == Fraction(1, 24)
    assert wbf_coefficient(4, 2) == 0
    assert normalized_ricci_coefficient(3) == Fraction(1, 8)
    assert hamiltonian_form_coefficient(3) == Fraction(1, 16)
    with pytest.raises(ValueError):
        wbf_coefficient(4, 0)
    with pytest.raises(ValueError):
        wbf_coefficient(4, 4)


def test_classification_anti():
    rep = classification_report(7, 2, "anti-holomorphic")
    assert rep["kaehler_einstein_complex_dim"] == 5
    assert rep["ricci_flat_complex_dim"] == 2
    assert rep["einstein_factor_model"] == "complex projective space"
    assert rep["killing_dim_projective"] == 20
    assert rep["spinor_shape"]["parallel_grade"] == 0
    assert rep["spinor_shape"]["twistor_grade"] == 2


def test_classification_even_limit_case():
    # even m with r one below the middle leaves a one-dimensional flat factor
    for l in (2, 3, 4):
        rep = classification_report(2 * l, l - 1, "anti-holomorphic")
        assert rep["ricci_flat_complex_dim"] == 1


def test_classification_holo():
    rep = classification_report(7, 5, "holomorphic")
    assert rep["kaehler_einstein_complex_dim"] == 5
    assert rep["ricci_flat_complex_dim"] == 2
    assert rep["spinor_shape"]["parallel_grade"] == 2
    assert rep["spinor_shape"]["twistor_grade"] == 3


def test_classification_model_alternatives():
    assert (classification_report(4, 1, "anti-holomorphic")["einstein_factor_model"]
            .startswith("twistor space"))


def test_classification_rejects_bad_type():
    with pytest.raises(ValueError):
        classification_report(4, 2, "anti-holomorphic")
    with pytest.raises(ValueError):
        classification_report(4, 2, "holomorphic")
    with pytest.raises(ValueError):
        classification_report(4, 0, "anti-holomorphic")
    with pytest.raises(ValueError):
        classification_report(4, 1, "holomorphic")
