from qdiff.domain import TheoremMode
from qdiff.errors import Unreachable
from qdiff.operator import TruncationPolicy, choose_truncation, tail_bound
from qdiff.verify import check_numeric_lemmas

# the operator is a double series over (j, m); the tail after truncation is
# bounded by the majorants used in the existence arguments
for J in (2, 4, 8, 12):
    print(J, [tail_bound(TheoremMode.T1, 3, TruncationPolicy(J, M)) for M in (0, 2, 5)])

for mode, q in ((TheoremMode.T1, 3), (TheoremMode.T2, 4), (TheoremMode.T3, 6), (TheoremMode.T4, 6)):
    for tol in (1e-6, 1e-8, 1e-10):
        try:
            print(mode.value, tol, choose_truncation(mode, q, tol))
        except Unreachable as exc:
            print(mode.value, tol, "unreachable:", exc)

# the inequalities the contraction estimates lean on
rep = check_numeric_lemmas()
print(rep.passed, len(rep.rows))
