"""The four contraction operators, as pointwise maps.

For T1/T3 (linear coefficient ``lam``)::

    T[y](z) = sum_{j>=2} sum_{m>=0} lam^m c_j(z/q^(m+1)) y(z/q^(m+1))^j

and for T2/T4 (``a_1 = 0``)::

    T[y](z) = sum_{j>=2} c_j(z/q) y(z/q)^j

Every inner value ``y(z/q^k)`` is replaced by ``s_k * y(z)`` with
``s_k = q^-k`` (complex rule, default) or ``|q|^-k`` (modulus rule).  The
operator at a fixed ``z`` is then a polynomial in ``y(z)`` whose coefficients
are computed once per point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .domain import DomainSpec, TheoremMode
from .errors import BallViolation, DomainViolation, Unreachable, UnsupportedQ
from .series import SeriesCoefficients

#: slack on the ball radius 1/|q|
BALL_SLACK = 1e-12
#: highest power of y retained by automatic truncation (2^(J-1) <= 4096)
J_CAP = 13


class ScalingRule(enum.Enum):
    COMPLEX = "complex"
    MODULUS = "modulus"

    def factor(self, q: complex, k: int) -> complex:
        if self is ScalingRule.COMPLEX:
            return complex(q) ** -k
        return complex(abs(q) ** -k)


@dataclass(frozen=True)
class TruncationPolicy:
    """``J_max``/``M_max`` may be ``math.inf`` when used only for bounds."""

    J_max: int | float
    M_max: int | float
    tail_tol: float = 0.0

    def as_dict(self) -> dict:
        return {"J_max": self.J_max, "M_max": self.M_max, "tail_tol": self.tail_tol}


def operator_polynomial(mode: TheoremMode, sc: SeriesCoefficients, q: complex,
                        lam: complex, z: complex, policy: TruncationPolicy,
                        rule: ScalingRule = ScalingRule.COMPLEX) -> np.ndarray:
    """Coefficients ``g_0..g_J`` with ``T[y](z) = sum_j g_j y(z)^j``."""
    J = int(policy.J_max)
    if J > sc.J:
        raise ValueError(f"policy needs c_j up to j={J}, series has J={sc.J}")
    q = complex(q)
    z = complex(z)
    g = np.zeros(J + 1, dtype=complex)
    js = np.arange(2, J + 1)
    M = int(policy.M_max) if mode.has_linear_term else 0
    lam_m = complex(1.0)
    qpow = complex(1.0)
    for m in range(M + 1):
        qpow = qpow * q
        s = rule.factor(q, m + 1)
        vals = sc.values_at(z / qpow)
        g[2:] += lam_m * vals[2:J + 1] * s ** js
        lam_m = lam_m * lam
        if lam_m == 0:
            break
    return g


def horner(g: np.ndarray, y):
    acc = np.zeros_like(y, dtype=complex) if isinstance(y, np.ndarray) else 0j
    for coef in g[::-1]:
        acc = acc * y + coef
    return acc


def apply_T(mode: TheoremMode, sc: SeriesCoefficients, q: complex, lam: complex,
            z: complex, y_at_z: complex, policy: TruncationPolicy,
            rule: ScalingRule = ScalingRule.COMPLEX,
            domain: DomainSpec | None = None) -> complex:
    """Truncated operator value at ``z`` given ``y(z) = y_at_z``."""
    if abs(y_at_z) > 1.0 / abs(q) + BALL_SLACK:
        raise BallViolation(f"|y|={abs(y_at_z):.6g} exceeds 1/|q|={1 / abs(q):.6g}")
    if domain is not None and not domain.contains(complex(z)):
        raise DomainViolation(f"z={z!r} is outside {domain}")
    g = operator_polynomial(mode, sc, q, lam, z, policy, rule)
    return complex(horner(g, complex(y_at_z)))


# -- truncation error -------------------------------------------------------

def _sum_rows(row, start, ratio):
    """sum_{j >= start} row(j), for rows decaying at least like ``ratio``."""
    total = 0.0
    j = start
    term = row(j)
    while term > 1e-18 * total and term > 0 and j < start + 2000:
        total += term
        j += 1
        term = row(j)
    # geometric remainder bound
    return total + term / (1.0 - ratio)


def tail_bound(mode: TheoremMode, q: complex, policy: TruncationPolicy) -> float:
    """Upper bound on the modulus of the terms dropped by ``policy``.

    Sums the per-term majorants of the existence proofs over all ``(j, m)``
    outside ``2 <= j <= J_max, 0 <= m <= M_max``.
    """
    aq = abs(q)
    if aq < mode.q_threshold:
        raise UnsupportedQ(f"|q|={aq:g} is below the {mode.value} threshold "
                           f"{mode.q_threshold:g}")
    J, M = policy.J_max, policy.M_max
    if J < 2:
        raise ValueError("J_max must be at least 2")

    if mode is TheoremMode.T2:
        x = 2.0 / aq ** 2
        return 0.0 if J == math.inf else x ** (J + 1) / (1.0 - x)
    if mode is TheoremMode.T4:
        x = 2.0 / aq
        return 0.0 if J == math.inf else x ** (J + 1) / (1.0 - x) / (2.0 * aq)

    if mode is TheoremMode.T1:
        # term(j, m) = 2^(j-1) |q|^(-j(m+2))
        def row_full(j):
            return 2.0 ** (j - 1) * aq ** (-2.0 * j) / (1.0 - aq ** (-j))

        def row_from(j, m0):
            return 2.0 ** (j - 1) * aq ** (-j * (m0 + 2.0)) / (1.0 - aq ** (-j))
        ratio = 2.0 / aq ** 2
    else:
        # term(j, m) = (1/(2|q|)) (2/|q|)^j |q|^(-(j+1) m)
        def row_full(j):
            return (2.0 / aq) ** j / (2.0 * aq) / (1.0 - aq ** (-(j + 1.0)))

        def row_from(j, m0):
            return row_full(j) * aq ** (-(j + 1.0) * m0)
        ratio = 2.0 / aq

    dropped = 0.0
    if M != math.inf:
        top = J if J != math.inf else None
        if top is None:
            dropped += _sum_rows(lambda j: row_from(j, M + 1), 2, ratio)
        else:
            dropped += sum(row_from(j, M + 1) for j in range(2, int(top) + 1))
    if J != math.inf:
        dropped += _sum_rows(row_full, int(J) + 1, ratio)
    return dropped


def choose_truncation(mode: TheoremMode, q: complex, tol: float,
                      j_cap: int = J_CAP, m_cap: int = 400) -> TruncationPolicy:
    """Smallest ``J_max`` (then ``M_max``) whose tail bound is within ``tol``."""
    if not tol > 0:
        raise Unreachable(tol, "geometric tails never vanish; tol must be positive")
    for J in range(2, j_cap + 1):
        if not mode.has_linear_term:
            if tail_bound(mode, q, TruncationPolicy(J, 0)) <= tol:
                return TruncationPolicy(J, 0, tol)
            continue
        if tail_bound(mode, q, TruncationPolicy(J, math.inf)) > tol:
            continue
        for M in range(m_cap + 1):
            if tail_bound(mode, q, TruncationPolicy(J, M)) <= tol:
                return TruncationPolicy(J, M, tol)
    raise Unreachable(tol, f"tail tolerance {tol:g} needs J_max > {j_cap} "
                           f"for {mode.value} at |q|={abs(q):g}")


def theoretical_contraction(mode: TheoremMode, q: complex, rho: float | None = None) -> float:
    """Lipschitz constant of T on the ball, as established for each mode."""
    if mode is TheoremMode.T1:
        return 2.0 / 3.0
    if mode is TheoremMode.T2:
        rho = abs(q) / 2.0 if rho is None else rho
        return 1.0 / rho
    if mode is TheoremMode.T3:
        return 0.75
    return 0.25
