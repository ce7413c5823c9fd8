"""
When are two subgroup modules *-isomorphic?
===========================================

Only the subgroup order and index matter, not the subgroups themselves.
"""

import numpy as np

from masa_bimodules import build_group, e_star, generate_subgroup, module_iso_decide, small_group_isomorphic
from masa_bimodules.blocks import permutation_unitary
from masa_bimodules.support import SupportRelation

G = build_group("product:(cyclic:2,cyclic:4)")
H1 = generate_subgroup(G, {G.index_of((0, 1))})           # cyclic of order 4
H2 = generate_subgroup(G, {G.index_of((0, 2)), G.index_of((1, 0))})  # Klein four

print("H1 ~ H2 as groups?", small_group_isomorphic(H1, H2))
v = module_iso_decide(G, H1, G, H2)
print("modules isomorphic?", v.isomorphic, " witness:", list(v.witness))

# The witness permutation gives a unitary U with U M(H1*) U* = M(H2*).
U = permutation_unitary(v.witness)
T = np.where(e_star(G, H1.elements).to_mask(), 1.0, 0.0)
image = SupportRelation.from_mask(np.abs(U @ T @ U.T) > 0)
print("image support == H2*:", image == e_star(G, H2.elements))

# Across groups: Z6 with {0,3} and S3 with a subgroup of order 2.
Z6, S3 = build_group("cyclic:6"), build_group("symmetric:3")
print(module_iso_decide(Z6, {0, 3}, S3, {0, 1}).to_dict())

# Same order, different index: never isomorphic.
Z4 = build_group("cyclic:4")
print(module_iso_decide(Z4, {0, 2}, Z6, {0, 3}).isomorphic)
