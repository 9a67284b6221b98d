import math

import numpy as np
import pytest

from qdiff.domain import HalfPlanes, TheoremMode
from qdiff.errors import BallEscape, BallViolation, NonConvergence
from qdiff.operator import TruncationPolicy
from qdiff.series import CoefficientSet
from qdiff.solver import (ProblemSpec, SolutionField, ball_membership,
                          empirical_contraction, iterate, iteration_budget,
                          picard_solve)

T1, T2, T3, T4 = TheoremMode


@pytest.fixture
def plain_t1():
    """The a = (0.1, 1/z), b = (1/z) instance at q = 3."""
    return ProblemSpec(3, T1, CoefficientSet(["0.1", "1/z"], ["1/z"]))


def test_zero_coefficients_converge_in_one_step():
    p = ProblemSpec(3, T1, CoefficientSet(["0", "0"], ["0"]))
    f, rep = picard_solve(p, HalfPlanes(3).patch_grid(64))
    assert rep.iterations == 1
    assert np.all(f.values == 0)
    assert empirical_contraction(p) == 0


def test_zero_start_is_fixed(plain_t1):
    f, rep = picard_solve(plain_t1, y0=0)
    assert rep.iterations == 0 and rep.d01 == 0
    assert np.all(f.values == 0)


def test_successive_change_ratio(plain_t1):
    _, rep = picard_solve(plain_t1)
    assert rep.L_empirical <= 2 / 3 + 1e-6
    assert all(b <= a for a, b in zip(rep.changes, rep.changes[1:]))


def test_iteration_budget():
    assert iteration_budget(1e-12, 0.5, 0) == 10
    n = math.ceil(math.log(1e-12 * 0.5 / 0.1) / math.log(0.5))
    assert iteration_budget(1e-12, 0.5, 0.1) == n + 10


def test_aposteriori_bound_holds(bundled):
    p = bundled["t1_q3"].problem
    grid = bundled["t1_q3"].grid()
    L = 2 / 3
    _, rep = picard_solve(p, grid)
    y0 = np.full(len(grid), p.default_start())
    limit = iterate(p, grid, y0, rep.iterations + 20)
    y = y0
    for n in range(rep.iterations + 1):
        err = float(np.max(np.abs(y - limit)))
        assert err <= L ** n / (1 - L) * rep.d01 + 1e-15
        y = iterate(p, grid, y, 1)


def test_start_independence(plain_t1):
    grid = HalfPlanes(3).patch_grid(100)
    L = plain_t1.L_theoretical
    starts = [plain_t1.default_start(), -0.2j, lambda z: 0.3 / z, 0.0]
    fields = [picard_solve(plain_t1, grid, y0=s)[0].values for s in starts]
    for v in fields[1:]:
        assert np.max(np.abs(v - fields[0])) <= 2 * plain_t1.stop_tol / (1 - L)


def test_start_outside_ball():
    p = ProblemSpec(3, T1, CoefficientSet(["0.1"]))
    with pytest.raises(BallViolation):
        picard_solve(p, y0=0.5)


def test_worker_count_does_not_change_bits(bundled):
    for name in ("t1_q3", "t3_q6"):
        cfg = bundled[name]
        a, ra = picard_solve(cfg.problem, cfg.grid(), workers=1)
        b, rb = picard_solve(cfg.problem, cfg.grid(), workers=8)
        assert a.values.tobytes() == b.values.tobytes()
        assert a.to_csv() == b.to_csv() and ra.as_dict() == rb.as_dict()


def test_nonconvergence_and_escape():
    p = ProblemSpec(3, T1, CoefficientSet(["0.1", "1/z"], ["1/z"]), stop_tol=1e-300)
    with pytest.raises(NonConvergence):
        picard_solve(p, max_iter=2)
    # coefficients far above the hypotheses push iterates out of the ball
    big = ProblemSpec(3, T1, CoefficientSet(["0", "5000"]))
    with pytest.raises(BallEscape) as info:
        picard_solve(big, y0=0.3)
    assert info.value.iteration == 1


def test_empirical_contraction_bundled(bundled):
    limits = {"t1_q3": 2 / 3, "t2_q4": 2 / 4, "t3_q6": 3 / 4, "t4_q6": 1 / 4}
    for name, L in limits.items():
        assert empirical_contraction(bundled[name].problem) <= L + 1e-6


def test_ball_membership():
    pol = TruncationPolicy(2, 0)
    g = np.array([3 + 0j, 4 + 0j])
    assert ball_membership(SolutionField(g, np.zeros(2, complex), np.zeros(2, int), pol), 3)
    bad = np.array([0, 1 / 3 + 0.1], dtype=complex)
    assert not ball_membership(SolutionField(g, bad, np.zeros(2, int), pol), 3)


def test_converged_field_in_ball(bundled):
    cfg = bundled["t1_q3"]
    f, rep = picard_solve(cfg.problem, cfg.grid())
    assert ball_membership(f, cfg.problem.q)
    assert rep.sup_norm == f.sup_norm()


def test_csv_layout(bundled):
    cfg = bundled["t2_q4"]
    f, _ = picard_solve(cfg.problem, cfg.grid())
    lines = f.to_csv().splitlines()
    assert lines[0] == "re_z,im_z,re_y,im_y,iters" and len(lines) == 257
    z_re, z_im = map(float, lines[1].split(",")[:2])
    assert complex(z_re, z_im) == f.grid[0]


def test_mode_requirements():
    with pytest.raises(ValueError):
        ProblemSpec(1, T1, CoefficientSet(["0.1"]))
    with pytest.raises(Exception):
        ProblemSpec(4, T2, CoefficientSet(["0.1", "1/z"]))
