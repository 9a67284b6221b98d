import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdiff.domain import HalfPlanes, TheoremMode
from qdiff.errors import EnumerationBudgetError, PoleInCoefficient
from qdiff.series import (CoefficientSet, SeriesCoefficients, check_cj_bounds,
                          degree, expand_c_coefficients, monomials,
                          multi_indices, oracle_R_taylor, term_count, weight)


def test_degree_weight():
    assert (degree((1, 0, 2)), weight((1, 0, 2))) == (3, 7)
    assert (degree((0, 0, 0)), weight((0, 0, 0))) == (0, 0)
    assert (degree((2,)), weight((2,))) == (2, 2)


@pytest.mark.parametrize("w,t", [(0, 3), (3, 1), (4, 3), (6, 6)])
def test_multi_indices_have_requested_weight(w, t):
    taus = list(multi_indices(w, t))
    assert len(set(taus)) == len(taus)
    assert all(len(tau) == t and weight(tau) == w for tau in taus)


def test_taylor_of_y():
    vals = oracle_R_taylor(CoefficientSet(["1"]), 0.3, 6)
    assert vals == [1, 0, 0, 0, 0, 0]


def test_taylor_of_geometric():
    vals = oracle_R_taylor(CoefficientSet(["1"], ["1"]), 2j, 7)
    assert vals == [1, -1, 1, -1, 1, -1, 1]


def _c(a, b, j, z=0.0, method="enumeration"):
    return SeriesCoefficients(CoefficientSet(a, b), max(j, 2), method).c(j, z)


@pytest.mark.parametrize("method", ["enumeration", "division"])
def test_c2_constant_example(method):
    assert _c(["0.1", "0.2"], ["0.3"], 2, method=method) == pytest.approx(0.17, abs=1e-15)


@pytest.mark.parametrize("method", ["enumeration", "division"])
def test_c3_constant_example(method):
    assert _c(["1", "0", "0"], ["1", "0"], 3, method=method) == 1


def test_no_denominator():
    a = ["1/z", "2", "z"]
    sc = SeriesCoefficients(CoefficientSet(a), 7, "enumeration")
    z = 1.5 + 0.5j
    want = [0, 1 / z, 2, z, 0, 0, 0, 0]
    assert np.allclose(sc.values_at(z), want, rtol=0, atol=1e-15)


def test_c2_c3_monomials_match_closed_forms(oracle):
    assert sorted(m.render() for m in monomials(2, 4, 3)) == ["-a1*b1", "a2"]
    got = {m.render().lstrip("-"): m.coeff for m in monomials(3, 4, 3)}
    assert got == oracle["c3_monomials"]


def test_c4_pinned(oracle):
    """c_4 = a4 - a3 b1 + a2 b1^2 - a2 b2 - a1 b1^3 + 2 a1 b1 b2 - a1 b3.

    The cross term a1*b1*b2 occurs with multiplicity two: written out as a
    sum of unit-coefficient terms it appears twice, which is the 2^3 = 8
    term count.  Symbolic series division confirms the coefficient 2.
    """
    got = {}
    for m in monomials(4, 4, 3):
        key = m.render()
        key = key[1:] if key.startswith("-") else key
        key = key.split("*", 1)[1] if key[0].isdigit() else key
        got[key] = m.coeff
    assert got == oracle["c4_monomials"]
    assert got["a1*b1*b2"] == 2
    assert term_count(4, 4, 3) == 8


@pytest.mark.parametrize("j", range(2, 7))
def test_term_count(j):
    assert term_count(j, 6, 6) == 2 ** (j - 1)


@pytest.mark.parametrize("j", range(2, 7))
def test_unique_top_degree_monomial(j):
    """Exactly one monomial of degree j: (-1)^(j-1) a1 b1^(j-1)."""
    top = [m for m in monomials(j, 6, 6) if m.degree == j]
    assert len(top) == 1
    m = top[0]
    assert (m.a, m.coeff) == (1, (-1) ** (j - 1))
    assert m.tau[0] == j - 1 and sum(m.tau) == j - 1


def test_values_match_frozen_oracle(oracle):
    for case in oracle["c_values"]:
        coeffs = CoefficientSet(case["a"], case["b"])
        for method in ("enumeration", "division"):
            sc = SeriesCoefficients(coeffs, case["J"], method)
            for pt in case["points"]:
                z = complex(*pt["z"])
                got = sc.values_at(z)[2:]
                want = np.array([complex(*c) for c in pt["c"]])
                assert np.allclose(got, want, rtol=1e-12, atol=1e-13), (method, z)


coef_text = st.sampled_from(["0", "1", "-0.5", "1/z", "z", "z^2-1", "(0.3+0.4i)", "exp(z)/3", "1/(z+5)"])


@settings(max_examples=60, deadline=None)
@given(st.lists(coef_text, min_size=1, max_size=4), st.lists(coef_text, max_size=4),
       st.complex_numbers(min_magnitude=0.5, max_magnitude=2, allow_nan=False))
def test_routes_agree(a, b, z):
    coeffs = CoefficientSet(a, b)
    enum = expand_c_coefficients(coeffs, 8).values_at(z)
    div = oracle_R_taylor(coeffs, z, 8)
    for j in range(2, 9):
        want = div[j - 1]
        assert abs(enum[j] - want) <= 1e-10 * max(1.0, abs(want))


def test_values_are_cached_and_read_only():
    sc = SeriesCoefficients(CoefficientSet(["1/z", "z"], ["1"]), 5)
    v = sc.values_at(2.0)
    assert sc.values_at(2.0) is v
    with pytest.raises(ValueError):
        v[2] = 0


def test_pole_in_coefficient_is_labelled():
    sc = SeriesCoefficients(CoefficientSet(["0", "1/z"], ["1/(z-1)"]), 4)
    with pytest.raises(PoleInCoefficient) as info:
        sc.values_at(1.0)
    assert info.value.which == "b1"


def test_enumeration_budget():
    coeffs = CoefficientSet(["1"])
    with pytest.raises(ValueError):
        expand_c_coefficients(coeffs, 1)
    with pytest.raises(EnumerationBudgetError):
        expand_c_coefficients(coeffs, 14)
    expand_c_coefficients(coeffs, 13)


def test_bounds_pass_under_hypotheses():
    grid = HalfPlanes(3).patch_grid(100)
    sc = SeriesCoefficients(CoefficientSet(["0.05", "0.15/z"], ["1/z"]), 6)
    rep = check_cj_bounds(sc, grid, TheoremMode.T1, 3)
    assert rep.passed and rep.checked == 500 and rep.worst_ratio < 1


def test_bounds_zero_coefficients():
    sc = SeriesCoefficients(CoefficientSet(["0", "0"], ["0"]), 6)
    rep = check_cj_bounds(sc, HalfPlanes(3).patch_grid(50), TheoremMode.T1, 3)
    assert rep.passed and rep.worst_ratio == 0


def test_bounds_violation_has_witness():
    sc = SeriesCoefficients(CoefficientSet(["0.05", "0.1"], ["z"]), 4)
    grid = HalfPlanes(3).patch_grid(30)
    rep = check_cj_bounds(sc, grid, TheoremMode.T1, 3)
    assert not rep.passed
    j, z, v, bound = rep.violations[0]
    assert complex(z) in set(grid.tolist()) and v >= bound
