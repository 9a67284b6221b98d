"""Sampled hypothesis gates, residual audit and the auxiliary inequalities.

Hypothesis checks evaluate every modulus bound on a finite grid.  A pass is
evidence on that grid, not a proof over the whole domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domain import HalfPlanes, TheoremMode, default_domain, domain_matches
from .errors import PoleInCoefficient, PoleOnGrid
from .extend import DENOMINATOR_POLE, _Evaluator, rhs_parts
from .series import CoefficientSet
from .solver import ProblemSpec, SolutionField

#: relative slack on modulus bounds
BOUND_RTOL = 1e-12
#: absolute slack on the |a_1| = max |a_j| condition
MAX_ATOL = 1e-12


def _cx(z):
    return None if z is None else [z.real, z.imag]


@dataclass
class Check:
    name: str
    passed: bool
    worst_ratio: float
    witness: dict | None = None

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "worst_ratio": self.worst_ratio, "witness": self.witness}


@dataclass
class ModeVerdict:
    mode: TheoremMode
    domain: dict
    grid_size: int
    checks: list = field(default_factory=list)

    @property
    def applicable(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def witnesses(self) -> list:
        return [c.witness for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {"mode": self.mode.value,
                "verdict": "applicable" if self.applicable else "violated",
                "domain": self.domain, "grid_size": self.grid_size,
                "checks": [c.as_dict() for c in self.checks]}


@dataclass
class HypothesisReport:
    q: complex
    verdicts: dict

    @property
    def applicable_modes(self) -> list:
        return [m for m, v in self.verdicts.items() if v.applicable]

    def as_dict(self) -> dict:
        return {"schema": 1, "q": _cx(self.q),
                "note": "sampled on a finite grid; evidence, not proof",
                "applicable_modes": [m.value for m in self.applicable_modes],
                "verdicts": {m.value: v.as_dict() for m, v in self.verdicts.items()}}


class _BoundCheck:
    """Accumulates ``measured <= bound`` over grid points."""

    def __init__(self, name):
        self.name = name
        self.worst = 0.0
        self.witness = None

    def add(self, z, measured, bound, which=None):
        ok = measured <= bound * (1 + BOUND_RTOL)
        ratio = measured / bound if bound > 0 else (0.0 if measured == 0 else math.inf)
        self.worst = max(self.worst, float(ratio))
        if not ok and self.witness is None:
            self.witness = {"condition": self.name, "point": _cx(complex(z)),
                            "coefficient": which, "measured": measured, "bound": bound}

    def result(self) -> Check:
        return Check(self.name, self.witness is None, self.worst, self.witness)


def _scalar_check(name, passed, measured, bound):
    witness = None if passed else {"condition": name, "point": None,
                                   "measured": measured, "bound": bound}
    if bound:
        ratio = measured / bound
    else:
        ratio = 0.0 if passed else math.inf
    return Check(name, passed, float(ratio), witness)


def _coefficient_values(coeffs, grid):
    out = []
    for z in grid:
        try:
            out.append(coeffs.values_at(complex(z)))
        except PoleInCoefficient as exc:
            raise PoleOnGrid(complex(z), exc.which) from None
    return out


def _mode_verdict(mode, q, coeffs: CoefficientSet, domain, grid, values) -> ModeVerdict:
    aq = abs(q)
    checks = [_scalar_check("q_threshold", aq >= mode.q_threshold, aq, mode.q_threshold)]

    if isinstance(domain, HalfPlanes):
        need = aq if mode is TheoremMode.T1 else aq / 2
        checks.append(_scalar_check("domain", domain.rho >= need * (1 - BOUND_RTOL),
                                    need, domain.rho))
    else:
        r2 = domain.rho ** 2 + domain.sigma ** 2
        checks.append(_scalar_check("domain", r2 <= aq ** 2 * (1 + BOUND_RTOL), r2, aq ** 2))

    a1 = coeffs.a[0]
    if mode.has_linear_term:
        checks.append(_scalar_check("a1_constant", a1.is_constant, 0.0, 0.0))
    else:
        is_zero = a1.is_constant and all(v[0][0] == 0 for v in values)
        checks.append(_scalar_check("a1_zero", is_zero,
                                    max((abs(v[0][0]) for v in values), default=0.0), 0.0))

    a_chk = _BoundCheck("a_bound")
    b_chk = _BoundCheck("b_bound")
    lam_chk = _BoundCheck("a1_bound")
    max_chk = _BoundCheck("a1_max")
    for z, (avals, bvals) in zip(grid, values):
        az = abs(z)
        if mode.half_plane:
            cap = math.inf if az == 0 else 1.0 / az
        else:
            cap = aq ** az
        lam = abs(avals[0])
        if mode is TheoremMode.T1:
            lam_chk.add(z, lam, cap, "a1")
            for j, a in enumerate(avals[1:], start=2):
                max_chk.add(z, abs(a), lam + MAX_ATOL, f"a{j}")
        elif mode is TheoremMode.T3:
            lam_chk.add(z, lam, 1.0 / aq, "a1")
        for j, a in enumerate(avals[1:], start=2):
            a_chk.add(z, abs(a), cap, f"a{j}")
        for k, b in enumerate(bvals, start=1):
            b_chk.add(z, abs(b), cap, f"b{k}")
    if mode.has_linear_term:
        checks.append(lam_chk.result())
    if mode is TheoremMode.T1:
        checks.append(max_chk.result())
    checks.extend([a_chk.result(), b_chk.result()])
    return ModeVerdict(mode, domain.as_dict(), len(grid), checks)


def check_hypotheses(p: ProblemSpec, grid=None) -> HypothesisReport:
    """Verdict for each of the four modes.

    Modes whose domain type matches ``p.domain`` are checked on ``grid``
    (default: the audit patch of ``p.domain``); the others on the default
    domain and patch for that mode.
    """
    own_grid = p.domain.patch_grid() if grid is None else np.asarray(grid, dtype=complex).ravel()
    own_values = _coefficient_values(p.coeffs, own_grid)
    verdicts = {}
    for mode in TheoremMode:
        if domain_matches(mode, p.domain):
            domain, g, vals = p.domain, own_grid, own_values
        else:
            domain = default_domain(mode, p.q)
            g = domain.patch_grid()
            vals = _coefficient_values(p.coeffs, g)
        verdicts[mode] = _mode_verdict(mode, p.q, p.coeffs, domain, g, vals)
    return HypothesisReport(p.q, verdicts)


# -- residual of the functional equation ------------------------------------

@dataclass
class ResidualReport:
    max_residual: float
    residuals: np.ndarray
    unreachable: int
    poles: int
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol

    def as_dict(self) -> dict:
        return {"max_residual": self.max_residual, "unreachable": self.unreachable,
                "poles": self.poles, "residual_tol": self.tol, "passed": self.passed}


def residual_on_grid(f: SolutionField, p: ProblemSpec, max_steps: int = 20) -> ResidualReport:
    """``max |y(qz) - R(z, y(z))|`` over grid points where both sides evaluate."""
    ev = _Evaluator(f, p, allow_scaled=True)
    res = np.full(len(f.grid), np.nan)
    unreachable = poles = 0
    for i, (z, y) in enumerate(zip(f.grid, f.values)):
        out = ev.run(complex(z) * p.q, max_steps)
        if out.status == "out_of_reach":
            unreachable += 1
            continue
        if out.status == "pole":
            poles += 1
            continue
        try:
            num, den = rhs_parts(p.coeffs, complex(z), complex(y))
        except PoleInCoefficient:
            poles += 1
            continue
        if abs(den) < DENOMINATOR_POLE:
            poles += 1
            continue
        res[i] = abs(out.value - num / den)
    ok = ~np.isnan(res)
    worst = float(np.max(res[ok])) if np.any(ok) else 0.0
    return ResidualReport(worst, res, unreachable, poles, p.residual_tol)


# -- auxiliary inequalities -------------------------------------------------

def lemma_geometric(q: float, j: int) -> tuple[float, float]:
    """``1/(|q|^j - 1) <= 2/|q|^j`` for ``|q| >= 2, j >= 2``."""
    return 1.0 / (q ** j - 1.0), 2.0 / q ** j


def lemma_quartic(q: float) -> tuple[float, float]:
    """``4/(|q|^4 - 2|q|^2) <= 1/|q|`` for ``|q| >= 2``."""
    return 4.0 / (q ** 4 - 2.0 * q ** 2), 1.0 / q


def lemma_ratio(q: float, j: int) -> tuple[float, float]:
    """``|q|^(j+1)/(|q|^(j+1) - 1) < (|q|/4)^j`` for ``|q| >= 6``."""
    return q ** (j + 1) / (q ** (j + 1) - 1.0), (q / 4.0) ** j


def series_identity(q: float, terms: int = 1000) -> tuple[float, float]:
    """Partial sum and closed form of ``sum_{j>=2} (2/q^2)^(j-1) j (2/q)``."""
    x = 2.0 / q ** 2
    partial = math.fsum(x ** (j - 1) * j * (2.0 / q) for j in range(2, terms + 2))
    closed = (2.0 / q) * (4.0 * q ** 2 - 4.0) / (q ** 2 - 2.0) ** 2
    return partial, closed


@dataclass
class LemmaReport:
    rows: list

    @property
    def passed(self) -> bool:
        return all(r["passed"] for r in self.rows)

    def failures(self) -> list:
        return [r for r in self.rows if not r["passed"]]

    def as_dict(self) -> dict:
        return {"schema": 1, "passed": self.passed, "rows": self.rows}


def default_q_values() -> list[float]:
    return [2.0 + 0.5 * k for k in range(21)]


def check_numeric_lemmas(q_values=None, j_range=None, series_rtol: float = 1e-12) -> LemmaReport:
    q_values = default_q_values() if q_values is None else list(q_values)
    j_range = range(2, 13) if j_range is None else j_range
    rows = []
    for q in q_values:
        if q < 2:
            raise ValueError(f"|q|={q} outside the range |q| >= 2")
        for j in j_range:
            lhs, rhs = lemma_geometric(q, j)
            rows.append({"lemma": "geometric", "q": q, "j": j, "lhs": lhs, "rhs": rhs,
                         "margin": rhs - lhs, "passed": lhs <= rhs})
            if q >= 6:
                lhs, rhs = lemma_ratio(q, j)
                rows.append({"lemma": "ratio", "q": q, "j": j, "lhs": lhs, "rhs": rhs,
                             "margin": rhs - lhs, "passed": lhs < rhs})
        lhs, rhs = lemma_quartic(q)
        rows.append({"lemma": "quartic", "q": q, "j": None, "lhs": lhs, "rhs": rhs,
                     "margin": rhs - lhs, "passed": lhs <= rhs})
        partial, closed = series_identity(q)
        rel = abs(partial - closed) / abs(closed)
        rows.append({"lemma": "series_identity", "q": q, "j": None, "lhs": partial,
                     "rhs": closed, "margin": rel, "passed": rel <= series_rtol})
    return LemmaReport(rows)
