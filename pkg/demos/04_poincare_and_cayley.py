import numpy as np

from qdiff.extend import (cayley_forward, cayley_inverse, poincare_f,
                          poincare_residual)

# f(z) = sum q^(-n^2) z^(2n) satisfies f(qz) = q z^2 f(z); it is analytic
# away from 0, where it has an essential singularity
q = 2.0
zs = np.exp(2j * np.pi * np.arange(100) / 100)
for N in (1, 2, 4, 8, 20):
    print(N, max(poincare_residual(z, q, N) for z in zs))

print(poincare_f(0.5, q, 20), poincare_f(-0.5, q, 20))

# the Cayley map sends the half-plane Re z < -rho into the unit disk
rho = 3.0
rng = np.random.default_rng(0)
z = -rho - rng.exponential(3, 5) + 1j * rng.normal(0, 5, 5)
w = np.array([cayley_forward(v, rho) for v in z])
print(np.abs(w))
print(np.abs(np.array([cayley_inverse(v, rho) for v in w]) - z))
