import numpy as np

from qdiff import CoefficientSet, expand_c_coefficients
from qdiff.series import monomials, oracle_R_taylor, term_count

# R(z, y) = (a1 y + a2 y^2) / (1 + b1 y), written as expression strings
coeffs = CoefficientSet(["0.05", "0.15/z"], ["1/z"])

# c_j(z) are the Taylor coefficients of R in y.  The multi-index route lists
# the monomials symbolically:
for j in range(2, 6):
    print(j, [m.render() for m in monomials(j, coeffs.p, coeffs.t)])

# counted with multiplicity, c_j has 2^(j-1) terms as long as j <= p; at
# j = 7 with p = 6 the missing a7 drops one term
print([term_count(j, 6, 6) for j in range(2, 8)])

# the c_4 cross term appears with coefficient 2
print([m.render() for m in monomials(4, 4, 3)])

# numeric check against plain series division at a point
z = 3.5 + 1j
sc = expand_c_coefficients(coeffs, 8)
enum = sc.values_at(z)[2:]
div = np.array(oracle_R_taylor(coeffs, z, 8)[1:])
print(np.max(np.abs(enum - div)))
