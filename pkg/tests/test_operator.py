import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdiff.domain import HalfPlanes, Rectangle, TheoremMode
from qdiff.errors import BallViolation, DomainViolation, Unreachable, UnsupportedQ
from qdiff.operator import (ScalingRule, TruncationPolicy, apply_T,
                            choose_truncation, operator_polynomial, tail_bound,
                            theoretical_contraction)
from qdiff.series import CoefficientSet, SeriesCoefficients

T1, T2, T3, T4 = TheoremMode


def _sc(a, b=(), J=8):
    return SeriesCoefficients(CoefficientSet(a, b), J)


@pytest.mark.parametrize("mode", list(TheoremMode))
def test_zero_is_fixed(mode):
    a = ["0.1", "1/z"] if mode.has_linear_term else ["0", "1/z"]
    sc = _sc(a, ["1/z"])
    lam = sc.coeffs.lam
    pol = TruncationPolicy(8, 4)
    assert apply_T(mode, sc, 6, lam, 7 + 1j, 0, pol) == 0


def test_single_term_example():
    sc = _sc(["0", "1"], J=2)
    val = apply_T(T2, sc, 4, 0, 5 + 2j, 0.1, TruncationPolicy(2, 0))
    assert val == pytest.approx(6.25e-4, rel=1e-14)


def test_double_sum_by_hand():
    """T1 with c_2 constant: sum_m lam^m c_2 (y/q^(m+1))^2."""
    lam, q, y = 0.3, 3.0, 0.2
    sc = _sc([str(lam), "1"], J=2)
    val = apply_T(T1, sc, q, lam, 4.0, y, TruncationPolicy(2, 5))
    c2 = 1 - 0  # a2 - a1*b1 with no denominator
    want = sum(lam ** m * c2 * (y / q ** (m + 1)) ** 2 for m in range(6))
    assert val == pytest.approx(want, rel=1e-14)


def test_modulus_rule_uses_abs_q():
    q = 4j
    sc = _sc(["0", "1"], J=2)
    c = apply_T(T2, sc, q, 0, 5.0, 0.1, TruncationPolicy(2, 0), ScalingRule.COMPLEX)
    m = apply_T(T2, sc, q, 0, 5.0, 0.1, TruncationPolicy(2, 0), ScalingRule.MODULUS)
    assert c == pytest.approx((0.1 / q) ** 2)
    assert m == pytest.approx((0.1 / 4) ** 2)


def test_operator_polynomial_has_no_constant_or_linear_term():
    sc = _sc(["0.1", "1/z", "z^-2"], ["1/z"])
    g = operator_polynomial(T1, sc, 3, 0.1, 4 - 2j, TruncationPolicy(8, 5))
    assert g[0] == 0 and g[1] == 0 and np.any(g[2:] != 0)


def test_ball_and_domain_violations():
    sc = _sc(["0", "1"], J=2)
    pol = TruncationPolicy(2, 0)
    with pytest.raises(BallViolation):
        apply_T(T2, sc, 4, 0, 5, 0.3, pol)
    with pytest.raises(DomainViolation):
        apply_T(T2, sc, 4, 0, 1, 0.1, pol, domain=HalfPlanes(2))
    with pytest.raises(DomainViolation):
        apply_T(T4, sc, 6, 0, 5 + 5j, 0.1, pol, domain=Rectangle(4, 4))


def test_tail_matches_direct_summation(oracle):
    for row in oracle["tails"]:
        mode = TheoremMode(row["mode"])
        got = tail_bound(mode, row["q"], TruncationPolicy(row["J"], row["M"]))
        assert got == pytest.approx(row["tail"], rel=1e-9), row


def test_tail_small_example():
    # T1, |q| = 3, J = 2, M = 0: everything but the (2, 0) term 2/81
    total = sum(2 ** (j - 1) * 3.0 ** (-j * (m + 2)) for j in range(2, 200) for m in range(200))
    assert tail_bound(T1, 3, TruncationPolicy(2, 0)) == pytest.approx(total - 2 / 81, rel=1e-12)


def test_tail_infinite_policy():
    for mode, q in ((T1, 3), (T2, 4), (T3, 6), (T4, 6)):
        assert tail_bound(mode, q, TruncationPolicy(math.inf, math.inf)) == 0


def test_tail_below_threshold():
    with pytest.raises(UnsupportedQ):
        tail_bound(T1, 2.5, TruncationPolicy(4, 2))
    with pytest.raises(UnsupportedQ):
        tail_bound(T4, 5, TruncationPolicy(4, 0))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(T1, 3), (T1, 4.5), (T3, 6), (T3, 9)]),
       st.integers(2, 12), st.integers(0, 10))
def test_tail_monotone(case, J, M):
    mode, q = case
    t = tail_bound(mode, q, TruncationPolicy(J, M))
    assert tail_bound(mode, q, TruncationPolicy(J + 1, M)) <= t
    assert tail_bound(mode, q, TruncationPolicy(J, M + 1)) <= t


@pytest.mark.parametrize("mode,q,tol", [(T1, 3, 1e-6), (T1, 3, 1e-8), (T2, 4, 1e-10),
                                        (T3, 6, 1e-6), (T4, 6, 1e-6), (T1, 3j, 1e-6)])
def test_choose_truncation_is_minimal(mode, q, tol):
    pol = choose_truncation(mode, q, tol)
    assert tail_bound(mode, q, pol) <= tol
    if pol.J_max > 2:
        assert tail_bound(mode, q, TruncationPolicy(pol.J_max - 1, math.inf)) > tol
    if pol.M_max > 0:
        assert tail_bound(mode, q, TruncationPolicy(pol.J_max, pol.M_max - 1)) > tol


def test_choose_truncation_frozen():
    for tol, want in ((1e-6, (8, 5)), (1e-8, (11, 7))):
        pol = choose_truncation(T1, 3, tol)
        assert (pol.J_max, pol.M_max) == want


def test_unreachable_tolerances():
    with pytest.raises(Unreachable):
        choose_truncation(T1, 3, 0)
    # at |q| = 6 the T4 tail (2/|q|)^(J+1) cannot reach 1e-14 with J <= 13
    with pytest.raises(Unreachable):
        choose_truncation(T4, 6, 1e-14)
    assert tail_bound(T4, 6, TruncationPolicy(13, 0)) > 1e-14


def test_theoretical_constants():
    assert theoretical_contraction(T1, 3) == pytest.approx(2 / 3)
    assert theoretical_contraction(T1, 10) == pytest.approx(2 / 3)
    assert theoretical_contraction(T2, 4, 2) == pytest.approx(1 / 2)
    assert theoretical_contraction(T3, 6) == pytest.approx(3 / 4)
    assert theoretical_contraction(T4, 6) == pytest.approx(1 / 4)
