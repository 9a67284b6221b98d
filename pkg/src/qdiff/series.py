"""Expansion of the right-hand side around the fixed point ``y = 0``.

Writing ``R(z, y) = (sum_j a_j y^j) / (1 + sum_k b_k y^k)`` as a power series
in ``y`` gives ``y(qz) - lam*y(z) = sum_{j>=2} c_j(z) y(z)^j``.  Two
independent routes produce the ``c_j``:

* multi-index enumeration: ``c_j`` is the sum over ``a_i b_1^{j_1}...b_t^{j_t}``
  with ``i + w(tau) = j``, weighted by ``(-1)^n n!/(j_1!...j_t!)``,
  ``n = d(tau)``;
* truncated power-series division of the numerator polynomial by the
  denominator polynomial, after evaluating the coefficients numerically.

The division route is the fast default; enumeration is kept for auditing
and symbolic output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .domain import TheoremMode
from .errors import (EnumerationBudgetError, PoleError, PoleInCoefficient,
                     UnsupportedCoefficient)
from .expr import Expression, parse_expr

#: enumeration budget: 2^(J-1) monomials (with multiplicity) in c_J
DEFAULT_BUDGET = 4096


def degree(tau: Sequence[int]) -> int:
    return sum(tau)


def weight(tau: Sequence[int]) -> int:
    return sum(k * jk for k, jk in enumerate(tau, start=1))


def multi_indices(w: int, t: int) -> Iterator[tuple[int, ...]]:
    """All ``tau`` of length ``t`` with ``weight(tau) == w``."""
    if t == 0:
        if w == 0:
            yield ()
        return

    def rec(k, remaining):
        # fills slots k..t (1-based), highest slot first
        if k == 1:
            yield (remaining,)
            return
        for jk in range(remaining // k + 1):
            for head in rec(k - 1, remaining - k * jk):
                yield head + (jk,)

    yield from rec(t, w)


@dataclass(frozen=True)
class Monomial:
    """``coeff * a_i * prod_k b_k^{tau_k}``."""

    coeff: int
    a: int
    tau: tuple[int, ...]

    @property
    def degree(self) -> int:
        return 1 + degree(self.tau)

    def render(self) -> str:
        factors = [f"a{self.a}"]
        for k, jk in enumerate(self.tau, start=1):
            if jk == 1:
                factors.append(f"b{k}")
            elif jk > 1:
                factors.append(f"b{k}^{jk}")
        body = "*".join(factors)
        mag = abs(self.coeff)
        sign = "-" if self.coeff < 0 else ""
        return f"{sign}{mag}*{body}" if mag != 1 else f"{sign}{body}"

    def evaluate(self, avals: Sequence[complex], bvals: Sequence[complex]) -> complex:
        v = complex(self.coeff) * avals[self.a - 1]
        for bk, jk in zip(bvals, self.tau):
            for _ in range(jk):
                v *= bk
        return v


@lru_cache(maxsize=None)
def monomials(j: int, p: int, t: int) -> tuple[Monomial, ...]:
    """Signed monomials making up ``c_j`` for numerator degree ``p`` and
    denominator degree ``t``."""
    out = []
    for i in range(1, min(p, j) + 1):
        for tau in multi_indices(j - i, t):
            n = degree(tau)
            mult = math.factorial(n)
            for jk in tau:
                mult //= math.factorial(jk)
            out.append(Monomial((-1) ** n * mult, i, tau))
    return tuple(out)


def term_count(j: int, p: int, t: int) -> int:
    """Number of terms in ``c_j`` counted with multiplicity."""
    return sum(abs(m.coeff) for m in monomials(j, p, t))


class CoefficientSet:
    """Numerator coefficients ``a_1..a_p`` and denominator ``b_1..b_t``."""

    def __init__(self, a: Sequence[Expression | str], b: Sequence[Expression | str] = ()):
        self.a = tuple(parse_expr(x) if isinstance(x, str) else x for x in a)
        self.b = tuple(parse_expr(x) if isinstance(x, str) else x for x in b)
        if not self.a:
            raise ValueError("at least one numerator coefficient is required")

    @property
    def p(self) -> int:
        return len(self.a)

    @property
    def t(self) -> int:
        return len(self.b)

    @property
    def lam(self) -> complex:
        """The linear coefficient ``a_1``; only constants are supported."""
        a1 = self.a[0]
        if not a1.is_constant:
            raise UnsupportedCoefficient(
                f"a1 = {a1.text!r} depends on z; only constant a1 is supported")
        try:
            return a1(0.0)
        except PoleError:
            raise UnsupportedCoefficient(f"a1 = {a1.text!r} is not finite") from None

    def values_at(self, z: complex) -> tuple[list[complex], list[complex]]:
        avals, bvals = [], []
        for name, exprs, out in (("a", self.a, avals), ("b", self.b, bvals)):
            for k, e in enumerate(exprs, start=1):
                try:
                    out.append(e(z))
                except PoleError:
                    raise PoleInCoefficient(z, f"{name}{k}") from None
        return avals, bvals

    def __repr__(self):
        return (f"CoefficientSet(a={[e.text for e in self.a]}, "
                f"b={[e.text for e in self.b]})")


def _series_divide(avals, bvals, J):
    # Q(y) = N(y)/D(y) mod y^(J+1), D(0) = 1, N(0) = 0
    num = [0j] * (J + 1)
    for j, a in enumerate(avals[:J], start=1):
        num[j] = a
    den = [0j] * (J + 1)
    for k, b in enumerate(bvals[:J], start=1):
        den[k] = b
    out = [0j] * (J + 1)
    for n in range(1, J + 1):
        acc = num[n]
        for k in range(1, n):
            if den[k]:
                acc -= den[k] * out[n - k]
        out[n] = acc
    return out


def oracle_R_taylor(coeffs: CoefficientSet, z: complex, J: int) -> list[complex]:
    """Taylor coefficients ``1..J`` of ``y -> R(z, y)`` at ``y = 0``.

    Entry 0 is always zero (``R(z, 0) = 0``) and is omitted.
    """
    avals, bvals = coeffs.values_at(z)
    return _series_divide(avals, bvals, J)[1:]


def _enumerate(coeffs, avals, bvals, J):
    out = [0j] * (J + 1)
    for j in range(1, J + 1):
        out[j] = sum((m.evaluate(avals, bvals) for m in monomials(j, coeffs.p, coeffs.t)), 0j)
    return out


class SeriesCoefficients:
    """Evaluators for ``c_1 .. c_J``, memoized per evaluation point.

    ``values_at(z)`` returns a read-only array ``[0, c_1(z), ..., c_J(z)]``;
    ``c_1`` equals ``a_1``.
    """

    def __init__(self, coeffs: CoefficientSet, J: int, method: str = "division"):
        if method not in ("division", "enumeration"):
            raise ValueError(f"unknown method {method!r}")
        self.coeffs = coeffs
        self.J = J
        self.method = method
        self._cache: dict[complex, np.ndarray] = {}

    def values_at(self, z: complex) -> np.ndarray:
        z = complex(z)
        hit = self._cache.get(z)
        if hit is not None:
            return hit
        avals, bvals = self.coeffs.values_at(z)
        if self.method == "division":
            vals = _series_divide(avals, bvals, self.J)
        else:
            vals = _enumerate(self.coeffs, avals, bvals, self.J)
        arr = np.array(vals, dtype=complex)
        arr.flags.writeable = False
        # concurrent first writes store identical arrays
        self._cache[z] = arr
        return arr

    def c(self, j: int, z: complex) -> complex:
        if not 1 <= j <= self.J:
            raise IndexError(f"c_{j} outside 1..{self.J}")
        return complex(self.values_at(z)[j])

    @property
    def evaluators(self) -> list:
        """Callables for ``c_2 .. c_J``."""
        return [lambda z, j=j: self.c(j, z) for j in range(2, self.J + 1)]

    def clear_cache(self):
        self._cache.clear()


def expand_c_coefficients(coeffs: CoefficientSet, J: int, method: str = "enumeration",
                          budget: int = DEFAULT_BUDGET) -> SeriesCoefficients:
    if J < 2:
        raise ValueError("truncation order J must be at least 2")
    if 2 ** (J - 1) > budget:
        raise EnumerationBudgetError(
            f"J={J} needs 2^{J - 1} monomials, over the budget of {budget}")
    return SeriesCoefficients(coeffs, J, method)


def cj_bound(mode: TheoremMode, q: complex, j: int, z: complex) -> float:
    """Modulus bound on ``c_j(z)`` implied by the theorem hypotheses."""
    if mode.half_plane:
        az = abs(z)
        return math.inf if az == 0 else 2.0 ** (j - 1) / az
    return 2.0 ** (j - 1) * abs(q) ** (abs(z) * (j - 1))


@dataclass
class BoundReport:
    passed: bool
    worst_ratio: float
    checked: int
    violations: list = field(default_factory=list)   # (j, z, |c_j|, bound)

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "worst_ratio": self.worst_ratio,
            "checked": self.checked,
            "violations": [
                {"j": j, "z": [z.real, z.imag], "modulus": v, "bound": b}
                for j, z, v, b in self.violations
            ],
        }


def check_cj_bounds(sc: SeriesCoefficients, grid, mode: TheoremMode, q: complex) -> BoundReport:
    """Strict bound ``|c_j(z)| < bound`` for ``j = 2..J`` at every grid point."""
    worst = 0.0
    violations = []
    checked = 0
    for z in grid:
        z = complex(z)
        try:
            vals = sc.values_at(z)
        except PoleInCoefficient:
            for j in range(2, sc.J + 1):
                violations.append((j, z, math.inf, cj_bound(mode, q, j, z)))
            worst = math.inf
            checked += sc.J - 1
            continue
        for j in range(2, sc.J + 1):
            checked += 1
            v = abs(vals[j])
            b = cj_bound(mode, q, j, z)
            ratio = v / b if b > 0 else (0.0 if v == 0 else math.inf)
            worst = max(worst, ratio)
            if not v < b:
                violations.append((j, z, v, b))
    return BoundReport(not violations, worst, checked, violations)
