"""Evaluating a solution away from its construction domain.

Two moves are available from a point ``w`` outside the domain:

* scaled: if ``q^m w`` lies in the domain, ``y(w) = s_m * y(q^m w)`` with
  ``s_m`` from the scaling rule;
* forward: ``y(w) = R(w/q, y(w/q))``, evaluating ``y(w/q)`` recursively.

Direct beats scaled beats forward.  Poles met on a forward step are returned
as data.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PoleError, PoleInCoefficient
from .expr import POLE_THRESHOLD, _ipow
from .series import CoefficientSet
from .solver import ProblemSpec, SolutionField, solve_point

#: forward steps whose denominator falls below this are reported as poles
DENOMINATOR_POLE = 1e-12


def rhs_parts(coeffs: CoefficientSet, z: complex, y: complex) -> tuple[complex, complex]:
    """Numerator and denominator of ``R(z, y)``."""
    avals, bvals = coeffs.values_at(z)
    num = 0j
    ypow = complex(1.0)
    for a in avals:
        ypow *= y
        num += a * ypow
    den = complex(1.0)
    ypow = complex(1.0)
    for b in bvals:
        ypow *= y
        den += b * ypow
    return num, den


@dataclass(frozen=True)
class Step:
    kind: str            # "direct" | "scaled" | "forward"
    point: complex
    value: complex
    m: int = 0           # scaling power for "scaled"

    def as_dict(self) -> dict:
        d = {"kind": self.kind, "point": [self.point.real, self.point.imag],
             "value": [self.value.real, self.value.imag]}
        if self.kind == "scaled":
            d["m"] = self.m
        return d


@dataclass
class ContinuationResult:
    status: str                       # "value" | "pole" | "out_of_reach"
    point: complex
    value: complex | None = None
    path: list = field(default_factory=list)
    reason: str | None = None
    step: int | None = None           # forward step index of a pole
    denominator: float | None = None  # |1 + sum b_k y^k| at a pole

    @property
    def ok(self) -> bool:
        return self.status == "value"

    def as_dict(self) -> dict:
        d = {"schema": 1, "status": self.status,
             "point": [self.point.real, self.point.imag],
             "path": [s.as_dict() for s in self.path]}
        if self.value is not None:
            d["value"] = [self.value.real, self.value.imag]
        if self.reason is not None:
            d["reason"] = self.reason
        if self.step is not None:
            d["step"] = self.step
        if self.denominator is not None:
            d["denominator"] = self.denominator
        return d


class _Evaluator:
    def __init__(self, field_: SolutionField, p: ProblemSpec, allow_scaled: bool):
        self.field = field_
        self.p = p
        self.sc = p.new_series()
        self.allow_scaled = allow_scaled

    def direct(self, w: complex) -> Step:
        k = self.field.lookup(w)
        if k is not None:
            return Step("direct", complex(self.field.grid[k]), complex(self.field.values[k]))
        # off-grid: solve pointwise, seeded by the nearest grid value
        seed = None
        if len(self.field.grid):
            seed = self.field.values[int(np.argmin(np.abs(self.field.grid - w)))]
        return Step("direct", w, solve_point(self.p, w, y0=seed, sc=self.sc))

    def run(self, w: complex, steps_left: int) -> ContinuationResult:
        p = self.p
        if p.domain.contains(w):
            s = self.direct(w)
            return ContinuationResult("value", w, s.value, [s])
        if self.allow_scaled:
            zm = w
            for m in range(1, steps_left + 1):
                zm = zm * p.q
                if p.domain.contains(zm):
                    base = self.direct(zm)
                    value = p.rule.factor(p.q, m) * base.value
                    return ContinuationResult("value", w, value,
                                              [base, Step("scaled", w, value, m)])
        if steps_left <= 0:
            return ContinuationResult("out_of_reach", w,
                                      reason="no path reaches the domain within max_steps")
        prev = self.run(w / p.q, steps_left - 1)
        if not prev.ok:
            if prev.status == "out_of_reach":
                prev.point = w
            return prev
        k = sum(1 for s in prev.path if s.kind == "forward") + 1
        z = w / p.q
        try:
            num, den = rhs_parts(p.coeffs, z, prev.value)
        except PoleInCoefficient as exc:
            return ContinuationResult("pole", w, path=prev.path, step=k,
                                      reason=f"coefficient {exc.which} has a pole at {z!r}")
        if abs(den) < DENOMINATOR_POLE:
            return ContinuationResult("pole", w, path=prev.path, step=k,
                                      denominator=abs(den),
                                      reason="denominator of R vanishes")
        value = num / den
        return ContinuationResult("value", w, value, prev.path + [Step("forward", w, value)])


def evaluate_at(field_: SolutionField, p: ProblemSpec, w: complex, max_steps: int = 20,
                allow_scaled: bool = True) -> ContinuationResult:
    """Value of the solution at ``w`` together with the path that produced it."""
    return _Evaluator(field_, p, allow_scaled).run(complex(w), max_steps)


def replay(path, p: ProblemSpec) -> complex:
    """Recompute a path's final value from its starting (direct) value."""
    if not path or path[0].kind != "direct":
        raise ValueError("a path starts with a direct step")
    value = path[0].value
    for s in path[1:]:
        if s.kind == "scaled":
            value = p.rule.factor(p.q, s.m) * value
        elif s.kind == "forward":
            num, den = rhs_parts(p.coeffs, s.point / p.q, value)
            value = num / den
        else:
            raise ValueError(f"unexpected step {s.kind!r}")
    return value


# -- Cayley transform between {Re z < -rho} and the unit disk ----------------

def cayley_forward(z: complex, rho: float) -> complex:
    den = z + rho - 1
    if abs(den) < POLE_THRESHOLD:
        raise PoleError(0, z)
    return (z + rho + 1) / den


def cayley_inverse(w: complex, rho: float) -> complex:
    den = w - 1
    if abs(den) < POLE_THRESHOLD:
        raise PoleError(0, w)
    return (rho * (1 - w) + 1 + w) / den


# -- Poincare's example f(qz) = q z^2 f(z) -----------------------------------

def _zpow(z: complex, n: int) -> complex:
    return _ipow(z, n) if n >= 0 else 1.0 / _ipow(z, -n)


def poincare_f(z: complex, q: complex, N: int) -> complex:
    """Truncated Laurent sum ``sum_{|n|<=N} q^(-n^2) z^(2n)``."""
    z = complex(z)
    q = complex(q)
    return sum((_zpow(z, 2 * n) / _ipow(q, n * n) for n in range(-N, N + 1)), 0j)


def poincare_residual(z: complex, q: complex, N: int) -> float:
    z = complex(z)
    q = complex(q)
    return abs(poincare_f(q * z, q, N) - q * z * z * poincare_f(z, q, N))


def poincare_boundary_residual(z: complex, q: complex, N: int) -> float:
    """The two terms that do not cancel in ``f(qz) - q z^2 f(z)``."""
    z = complex(z)
    q = complex(q)
    low = _zpow(z, -2 * N) / _ipow(q, N * N + 2 * N)
    high = q * _zpow(z, 2 * N + 2) / _ipow(q, N * N)
    return abs(low - high)


def poincare_terms(z: complex, q: complex, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Matching terms for ``n = -N+1 .. N``.

    First array: the n-th term of ``f(qz)``; second: the (n-1)-th term of
    ``f`` times ``q z^2``.
    """
    z = complex(z)
    q = complex(q)
    ns = range(-N + 1, N + 1)
    lhs = np.array([_zpow(q * z, 2 * n) / _ipow(q, n * n) for n in ns])
    rhs = np.array([q * z * z * _zpow(z, 2 * (n - 1)) / _ipow(q, (n - 1) ** 2) for n in ns])
    return lhs, rhs
