"""
Reflexive hulls and CSL decompositions
======================================
"""

import numpy as np

from masa_bimodules import bimodule_support, full_decomposition, ref_hull
from masa_bimodules.oracle import ref_oracle
from masa_bimodules.reflexivity import format_decomposition, intersect_summands

rng = np.random.default_rng(1)

# Two sparse operators on C^4. The bimodule they generate is determined by
# the union of their supports.
A = np.zeros((4, 4))
A[1, 0] = 2.0
A[3, 2] = -1.0
B = np.eye(4) + rng.normal(size=(4, 4)) * (rng.random((4, 4)) < 0.2)
S = [A, B]

omega = bimodule_support(S)
print("support:", omega.pairs())

# ref_hull works on the support; ref_oracle uses the operator definition
# (Tx in the closure of Ux for every x) directly. Bimodules are reflexive.
print("hull == support:", ref_hull(omega) == omega)
print("hull == oracle: ", ref_hull(omega) == ref_oracle(S))

# Each atom contributes a space X that is a sum of two CSL algebras.
certs = full_decomposition(omega)
print(format_decomposition(omega, certs))
assert intersect_summands(certs, omega.ground) == omega
