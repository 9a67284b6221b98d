import numpy as np

from qdiff import picard_solve
from qdiff.config import bundled_config, load_config
from qdiff.solver import empirical_contraction
from qdiff.verify import check_hypotheses, residual_on_grid

cfg = load_config(bundled_config("t1_q3"))
p = cfg.problem
grid = cfg.grid()
print(p.mode, p.q, p.domain, p.policy)

# the hypotheses are checked on a sample of the domain: evidence, not proof
hyp = check_hypotheses(p, grid)
print([m.value for m in hyp.applicable_modes])

field, report = picard_solve(p, grid)
print(report.iterations, report.changes)
print("L theoretical", report.L_theoretical, "empirical", report.L_empirical)
print("a-posteriori bound", report.aposteriori_bound)

# the unique solution in the ball is y = 0; a different start gives the same field
other, _ = picard_solve(p, grid, y0=lambda z: 0.3 / z)
print(np.max(np.abs(other.values - field.values)))

# the operator is a contraction on the ball, with lots of room to spare
print(empirical_contraction(p, samples=200))

# how well y(qz) = R(z, y(z)) holds on the grid
print(residual_on_grid(field, p).max_residual)
