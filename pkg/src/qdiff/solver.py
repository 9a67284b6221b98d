"""Picard iteration of the pointwise operator over a sample grid."""

from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .domain import (DomainSpec, HalfPlanes, Rectangle, TheoremMode,
                     default_domain, domain_matches)
from .errors import (BallEscape, BallViolation, DomainViolation,
                     NonConvergence, UnsupportedCoefficient)
from .operator import (BALL_SLACK, ScalingRule, TruncationPolicy,
                       choose_truncation, operator_polynomial,
                       theoretical_contraction)
from .series import CoefficientSet, SeriesCoefficients


@dataclass
class ProblemSpec:
    q: complex
    mode: TheoremMode
    coeffs: CoefficientSet
    domain: DomainSpec | None = None
    rule: ScalingRule = ScalingRule.COMPLEX
    stop_tol: float = 1e-12
    tail_tol: float = 1e-6
    residual_tol: float = 1e-8

    def __post_init__(self):
        self.q = complex(self.q)
        self.mode = TheoremMode(self.mode)
        self.rule = ScalingRule(self.rule)
        if abs(self.q) <= 1:
            raise ValueError("|q| must exceed 1")
        if self.domain is None:
            self.domain = default_domain(self.mode, self.q)
        if not domain_matches(self.mode, self.domain):
            raise ValueError(f"{type(self.domain).__name__} does not match mode {self.mode.value}")
        # validates a_1 for the mode
        _ = self.lam

    @property
    def lam(self) -> complex:
        lam = self.coeffs.lam
        if not self.mode.has_linear_term and lam != 0:
            raise UnsupportedCoefficient(
                f"mode {self.mode.value} requires a1 = 0, got {self.coeffs.a[0].text!r}")
        return lam

    @cached_property
    def policy(self) -> TruncationPolicy:
        return choose_truncation(self.mode, self.q, self.tail_tol)

    @property
    def L_theoretical(self) -> float:
        return theoretical_contraction(self.mode, self.q, self.domain.rho)

    def new_series(self) -> SeriesCoefficients:
        return SeriesCoefficients(self.coeffs, int(self.policy.J_max), "division")

    def default_start(self) -> complex:
        return complex(1.0 / (2.0 * abs(self.q)))


@dataclass
class SolutionField:
    grid: np.ndarray
    values: np.ndarray
    iterations: np.ndarray
    policy: TruncationPolicy

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values))) if len(self.values) else 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("re_z,im_z,re_y,im_y,iters\n")
        for z, y, n in zip(self.grid.tolist(), self.values.tolist(), self.iterations.tolist()):
            buf.write(f"{z.real!r},{z.imag!r},{y.real!r},{y.imag!r},{n}\n")
        return buf.getvalue()

    def lookup(self, w: complex, tol: float = 1e-12):
        """Index of the grid point equal to ``w`` (up to rounding), else None."""
        if not len(self.grid):
            return None
        d = np.abs(self.grid - w)
        k = int(np.argmin(d))
        return k if d[k] <= tol * (1.0 + abs(w)) else None


@dataclass
class IterationReport:
    L_theoretical: float
    L_empirical: float
    iterations: int
    d01: float
    aposteriori_bound: float
    max_residual: float
    sup_norm: float
    max_iter: int
    changes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "L_theoretical": self.L_theoretical,
            "L_empirical": self.L_empirical,
            "iterations": self.iterations,
            "d01": self.d01,
            "aposteriori_bound": self.aposteriori_bound,
            "max_residual": self.max_residual,
            "sup_norm": self.sup_norm,
            "max_iter": self.max_iter,
            "changes": list(self.changes),
        }


def iteration_budget(stop_tol: float, L: float, d01: float) -> int:
    """Iterations guaranteed by contraction to reach ``stop_tol``, plus 10."""
    if d01 <= 0:
        return 10
    n = math.ceil(math.log(stop_tol * (1.0 - L) / d01) / math.log(L))
    return max(n, 0) + 10


def operator_table(p: ProblemSpec, grid: np.ndarray, sc: SeriesCoefficients | None = None,
                   workers: int = 1) -> np.ndarray:
    """Operator polynomial coefficients for every grid point, shape (n, J+1)."""
    sc = sc or p.new_series()
    lam = p.lam
    policy = p.policy

    def one(z):
        return operator_polynomial(p.mode, sc, p.q, lam, z, policy, p.rule)

    if workers > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, grid))
    else:
        rows = [one(z) for z in grid]
    J = int(policy.J_max)
    return np.array(rows, dtype=complex).reshape(len(grid), J + 1)


def _apply(table: np.ndarray, y: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(y)
    for k in range(table.shape[1] - 1, -1, -1):
        acc = acc * y + table[:, k]
    return acc


def _start_values(p, grid, y0):
    if y0 is None:
        y0 = p.default_start()
    if callable(y0):
        vals = np.array([complex(y0(z)) for z in grid], dtype=complex)
    else:
        vals = np.broadcast_to(np.asarray(y0, dtype=complex), grid.shape).copy()
    if len(vals) and np.max(np.abs(vals)) > 1.0 / abs(p.q) + BALL_SLACK:
        raise BallViolation("start value lies outside the ball |y| <= 1/|q|")
    return vals


def picard_solve(p: ProblemSpec, grid=None, y0=None, workers: int = 1,
                 max_iter: int | None = None,
                 sc: SeriesCoefficients | None = None) -> tuple[SolutionField, IterationReport]:
    """Iterate ``y <- T[y]`` on ``grid`` until the sup-change is below ``stop_tol``.

    Returns the iterate ``y_n`` for which ``sup |T[y_n] - y_n| < stop_tol``;
    ``n`` is reported as the iteration count, so a start that is already a
    fixed point converges at iteration 0.
    """
    grid = p.domain.patch_grid() if grid is None else np.asarray(grid, dtype=complex).ravel()
    for z in grid:
        if not p.domain.contains(z):
            raise DomainViolation(f"grid point {z!r} is outside the construction domain")
    y = _start_values(p, grid, y0)
    table = operator_table(p, grid, sc, workers)
    L = p.L_theoretical

    y_next = _apply(table, y)
    d01 = float(np.max(np.abs(y_next - y))) if len(grid) else 0.0
    budget = iteration_budget(p.stop_tol, L, d01) if max_iter is None else max_iter

    iters = np.full(len(grid), -1, dtype=int)
    changes = []
    n = 0
    while True:
        step = np.abs(y_next - y)
        change = float(np.max(step)) if len(grid) else 0.0
        changes.append(change)
        settled = (step < p.stop_tol) & (iters < 0)
        iters[settled] = n
        over = np.abs(y_next) > 1.0 / abs(p.q) + BALL_SLACK
        if np.any(over):
            k = int(np.argmax(over))
            raise BallEscape(complex(grid[k]), n + 1, complex(y_next[k]))
        if change < p.stop_tol:
            break
        if n >= budget:
            raise NonConvergence(budget, change)
        y = y_next
        n += 1
        y_next = _apply(table, y)
    iters[iters < 0] = n

    ratios = [b / a for a, b in zip(changes, changes[1:]) if a > 0]
    report = IterationReport(
        L_theoretical=L,
        L_empirical=max(ratios, default=0.0),
        iterations=n,
        d01=d01,
        aposteriori_bound=L ** n / (1.0 - L) * d01,
        max_residual=changes[-1],
        sup_norm=float(np.max(np.abs(y))) if len(grid) else 0.0,
        max_iter=budget,
        changes=changes,
    )
    return SolutionField(grid, y, iters, p.policy), report


def iterate(p: ProblemSpec, grid, y, steps: int, sc: SeriesCoefficients | None = None) -> np.ndarray:
    """Apply the operator ``steps`` more times to the values ``y`` on ``grid``."""
    grid = np.asarray(grid, dtype=complex).ravel()
    table = operator_table(p, grid, sc)
    y = np.asarray(y, dtype=complex).copy()
    for _ in range(steps):
        y = _apply(table, y)
    return y


def solve_point(p: ProblemSpec, z: complex, y0=None,
                sc: SeriesCoefficients | None = None) -> complex:
    """Fixed-point value at a single domain point."""
    f, _ = picard_solve(p, np.array([complex(z)]), y0, sc=sc)
    return complex(f.values[0])


def sample_domain(domain: DomainSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random points on the default audit patch of ``domain``."""
    if isinstance(domain, HalfPlanes):
        r = domain.rho
        x = rng.uniform(r, 4 * r, n) * rng.choice([-1.0, 1.0], n)
        y = rng.uniform(-4 * r, 4 * r, n)
    elif isinstance(domain, Rectangle):
        x = rng.uniform(-domain.rho, domain.rho, n)
        y = rng.uniform(-domain.sigma, domain.sigma, n)
    else:
        raise TypeError(domain)
    return x + 1j * y


def sample_ball(radius: float, n: int, rng: np.random.Generator) -> np.ndarray:
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, n))
    return r * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, n))


def empirical_contraction(p: ProblemSpec, samples: int = 100, seed: int = 0) -> float:
    """Largest ``|T y - T h| / |y - h|`` over random points and ball pairs."""
    if samples < 2:
        raise ValueError("samples must be at least 2")
    rng = np.random.default_rng(seed)
    zs = sample_domain(p.domain, samples, rng)
    r = 1.0 / abs(p.q)
    ys = sample_ball(r, samples, rng)
    hs = sample_ball(r, samples, rng)
    table = operator_table(p, zs)
    diff = np.abs(_apply(table, ys) - _apply(table, hs))
    den = np.abs(ys - hs)
    ok = den > 0
    return float(np.max(diff[ok] / den[ok])) if np.any(ok) else 0.0


def ball_membership(f: SolutionField, q: complex) -> bool:
    return f.sup_norm() <= 1.0 / abs(q) + BALL_SLACK
