from qdiff import picard_solve
from qdiff.config import bundled_config, load_config
from qdiff.extend import evaluate_at, replay

# rectangle mode: points outside the rectangle are reached by stepping the
# equation forward, y(w) = R(w/q, y(w/q))
cfg = load_config(bundled_config("t4_q6"))
p = cfg.problem
field, _ = picard_solve(p, cfg.grid())

for w in (1 + 1j, 9 + 2j, -20 + 15j, 150j):
    r = evaluate_at(field, p, w)
    print(w, r.status, [s.kind for s in r.path], r.value)

# every path can be replayed from its starting value
r = evaluate_at(field, p, 150j)
print(abs(replay(r.path, p) - r.value))

# half-plane mode: points between the half-planes are pulled back by the
# scaling relation y(w) = y(q w)/q
cfg = load_config(bundled_config("t1_q3"))
p = cfg.problem
field, _ = picard_solve(p, cfg.grid())
r = evaluate_at(field, p, field.grid[0] / p.q)
print(r.status, [s.kind for s in r.path])

# the imaginary axis never lands in |Re z| >= rho
print(evaluate_at(field, p, 4j, max_steps=8).as_dict())
