"""Theorem modes and construction domains."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class TheoremMode(enum.Enum):
    """Which of the four contraction constructions applies.

    T1/T3 keep the linear coefficient ``a_1 = lam`` (a constant) and use the
    telescoped double sum; T2/T4 have ``a_1 = 0`` and use a single sum.
    T1/T2 live on the half-planes ``|Re z| >= rho``, T3/T4 on the rectangle
    ``|Re z| <= rho, |Im z| <= sigma``.
    """

    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"

    @property
    def has_linear_term(self) -> bool:
        return self in (TheoremMode.T1, TheoremMode.T3)

    @property
    def half_plane(self) -> bool:
        return self in (TheoremMode.T1, TheoremMode.T2)

    @property
    def q_threshold(self) -> float:
        return 3.0 if self.half_plane else 6.0


@dataclass(frozen=True)
class HalfPlanes:
    """``{z : |Re z| >= rho}``."""

    rho: float

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("rho must be positive")

    def contains(self, z: complex) -> bool:
        return abs(z.real) >= self.rho

    def patch_grid(self, count: int = 256, re_max: float | None = None,
                   im_max: float | None = None) -> np.ndarray:
        """Lattice on the strips ``rho <= |Re z| <= re_max, |Im z| <= im_max``.

        Half the points go to each strip (right strip first).
        """
        re_max = 4 * self.rho if re_max is None else re_max
        im_max = 4 * self.rho if im_max is None else im_max
        if re_max < self.rho or im_max < 0:
            raise ValueError("patch bounds must enclose part of the domain")
        right = count - count // 2
        pts = _lattice(self.rho, re_max, -im_max, im_max, right)
        left = _lattice(self.rho, re_max, -im_max, im_max, count // 2)
        left = -left.real + 1j * left.imag
        return np.concatenate([pts, left])

    def as_dict(self) -> dict:
        return {"kind": "half_planes", "rho": self.rho}


@dataclass(frozen=True)
class Rectangle:
    """``{z : |Re z| <= rho, |Im z| <= sigma}``."""

    rho: float
    sigma: float

    def __post_init__(self):
        if not (self.rho > 0 and self.sigma > 0):
            raise ValueError("rho and sigma must be positive")

    def contains(self, z: complex) -> bool:
        return abs(z.real) <= self.rho and abs(z.imag) <= self.sigma

    def patch_grid(self, count: int = 256, re_max: float | None = None,
                   im_max: float | None = None) -> np.ndarray:
        re_max = self.rho if re_max is None else re_max
        im_max = self.sigma if im_max is None else im_max
        if re_max > self.rho or im_max > self.sigma:
            raise ValueError("patch must lie inside the rectangle")
        return _lattice(-re_max, re_max, -im_max, im_max, count)

    def as_dict(self) -> dict:
        return {"kind": "rectangle", "rho": self.rho, "sigma": self.sigma}


DomainSpec = HalfPlanes | Rectangle


def _lattice(x0, x1, y0, y1, count):
    if count <= 0:
        return np.empty(0, dtype=complex)
    nx = math.isqrt(count)
    if nx * nx < count:
        nx += 1
    ny = -(-count // nx)
    xs = np.linspace(x0, x1, nx) if nx > 1 else np.array([x0])
    ys = np.linspace(y0, y1, ny) if ny > 1 else np.array([(y0 + y1) / 2])
    pts = (xs[:, None] + 1j * ys[None, :]).ravel()
    return pts[:count]


def default_domain(mode: TheoremMode, q: complex) -> DomainSpec:
    """Domain used in the existence proofs for each mode."""
    aq = abs(q)
    if mode is TheoremMode.T1:
        return HalfPlanes(aq)
    if mode is TheoremMode.T2:
        return HalfPlanes(aq / 2)
    side = aq / math.sqrt(2)
    return Rectangle(side, side)


def domain_matches(mode: TheoremMode, domain: DomainSpec) -> bool:
    return isinstance(domain, HalfPlanes) == mode.half_plane
