"""
C*-algebras generated by bimodules, and their envelopes
======================================================

Numerics first, then the combinatorial answer.
"""

import numpy as np

from masa_bimodules import SupportRelation, cstar_support, envelope_report, trivial_intersection
from masa_bimodules.oracle import algebra_closure, matrix_unit_space, numeric_tip_check

omega = SupportRelation.from_pairs(5, [(i, i) for i in range(5)] + [(0, 1), (1, 2), (3, 4)])

alg = algebra_closure(matrix_unit_space(omega))
print("numeric block dims:", alg.block_dims, " dim:", alg.dimension)
print("support block dims:", cstar_support(omega).block_dims)
print("sum of squares:", sum(d * d for d in alg.block_dims))

# A unital bimodule has the trivial intersection property, so the envelope
# is the whole generated C*-algebra.
print(trivial_intersection(omega), envelope_report(omega))

# Without the diagonal this can fail. span{I, diag(1,-1,0)} generates the
# diagonal algebra, and the ideal on coordinate 2 meets the span only in 0.
U = [np.eye(3), np.diag([1.0, -1.0, 0.0])]
ok, witness = numeric_tip_check(U)
print("TIP:", ok, " witness block:", sorted(witness.selected))
