"""
Modules built from group subsets
================================

A subset E of a finite group G gives a support E* = {(g, h) : g^-1 h in E}
and with it the space M(E*) of matrices living on that support.
"""

from masa_bimodules import build_group, e_star, left_cosets, module_properties, star_closure

# Z4 and the subgroup {0, 2}
Z4 = build_group("cyclic:4")
omega = e_star(Z4, {0, 2})
print(omega.to_mask().astype(int))

# The flags can be read off E alone or off the support; they agree.
for E in ({0, 2}, {1}, {0, 1}, {0, 1, 2, 3}):
    r = module_properties(Z4, E)
    print(sorted(E), "unital" if r.unital else "-", "self-adjoint" if r.selfadjoint else "-",
          "algebra" if r.algebra else "-")

# The von Neumann algebra generated by M(E*) splits along left cosets of <E>.
Z8 = build_group("cyclic:8")
_, blocks = star_closure(e_star(Z8, {2}))
print("components:", blocks.classes)
print("cosets:    ", left_cosets(Z8, module_properties(Z8, {2}).generated_subgroup).classes)
assert blocks.dims_multiset() == (4, 4)

# Non-abelian case: a transposition in S3
S3 = build_group("symmetric:3")
t = next(x for x in S3.elements() if S3.element_order(x) == 2)
_, blocks = star_closure(e_star(S3, {0, t}))
print("S3, <(transposition)> blocks:", blocks.dims_multiset())
