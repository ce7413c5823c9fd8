"""Block structure of C*(M(Ω)), ideals, envelopes and the coset classification."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .groups import (
    FiniteGroup,
    GroupError,
    Subgroup,
    _check_elements,
    generate_subgroup,
    index,
    is_subgroup,
    left_cosets,
)
from .support import BlockStructure, NotUnitalError, SupportRelation, components, e_star

MAX_IDEAL_CLASSES = 20


class NotIsomorphicError(ValueError):
    pass


def _require_unital(omega: SupportRelation) -> None:
    if not omega.contains_diagonal():
        raise NotUnitalError(
            "support is not unital; use star_closure for the von Neumann algebra of a non-unital module"
        )


def cstar_support(omega: SupportRelation) -> BlockStructure:
    """Classes of the full matrix blocks making up C*(M(omega)).

    For unital omega the generated C*-algebra is M of the equivalence
    relation spanned by omega, a direct sum of full matrix algebras.
    """
    _require_unital(omega)
    return components(omega)


@dataclass(frozen=True)
class IdealMask:
    selected: frozenset

    def rectangles(self, blocks: BlockStructure) -> SupportRelation:
        return SupportRelation.from_blocks(blocks.ground, [blocks.classes[i] for i in sorted(self.selected)])


def _masks_descending(k: int):
    # larger-indexed blocks first, so the reported witness is deterministic
    for m in range((1 << k) - 1, 0, -1):
        yield frozenset(i for i in range(k) if m >> i & 1)


def trivial_intersection(omega: SupportRelation) -> tuple[bool, IdealMask | None]:
    """Check that every nonzero ideal of C*(M(omega)) meets M(omega).

    Ideals are sums of blocks.  Masks are visited in descending bit order and
    the first one whose rectangles miss omega is returned as the witness.
    Beyond MAX_IDEAL_CLASSES blocks only single blocks are swept; this is
    exact because omega meets a sum of blocks iff it meets one of them.
    """
    blocks = cstar_support(omega)
    k = len(blocks.classes)
    if k > MAX_IDEAL_CLASSES:
        candidates = (frozenset([i]) for i in reversed(range(k)))
    else:
        candidates = _masks_descending(k)
    for sel in candidates:
        mask = IdealMask(sel)
        if len(omega & mask.rectangles(blocks)) == 0:
            return False, mask
    return True, None


def envelope_report(omega: SupportRelation) -> tuple:
    """Block dimensions of the C*-envelope, largest first.

    The trivial intersection property holds for every unital support, so the
    envelope is C*(M(omega)) itself.
    """
    ok, witness = trivial_intersection(omega)
    if not ok:
        raise AssertionError(f"unital support failed the trivial intersection property at {witness}")
    return cstar_support(omega).dims_multiset()


@dataclass(frozen=True)
class ClassificationVerdict:
    isomorphic: bool
    subgroup_orders: tuple
    indices: tuple
    group_orders: tuple
    witness: tuple | None = None

    def to_dict(self) -> dict:
        return {
            "isomorphic": self.isomorphic,
            "group_orders": list(self.group_orders),
            "subgroup_orders": list(self.subgroup_orders),
            "indices": list(self.indices),
            "witness": None if self.witness is None else list(self.witness),
        }


def _as_subgroup(G: FiniteGroup, H) -> Subgroup:
    if isinstance(H, Subgroup):
        if H.parent != G:
            raise GroupError("subgroup belongs to a different group")
        els = H.elements
    else:
        els = tuple(sorted(_check_elements(G, H)))
    if not is_subgroup(G, els):
        raise GroupError(
            f"{list(els)} is not a subgroup of {G.name}; the classification needs subgroups "
            "(use subset_module_invariants for unital subsets)"
        )
    return Subgroup(G, tuple(els))


def _witness(G1, H1, G2, H2) -> tuple:
    c1 = left_cosets(G1, H1).classes
    c2 = left_cosets(G2, H2).classes
    f = [0] * G1.order
    for a, b in zip(c1, c2):
        for x, y in zip(a, b):
            f[x] = y
    return tuple(f)


def verify_witness(G1, H1, G2, H2, f) -> bool:
    """(f x f) maps H1* onto H2*."""
    if sorted(f) != list(range(G2.order)) or len(f) != G1.order:
        return False
    return e_star(G1, H1.elements).permuted(f) == e_star(G2, H2.elements)


def permutation_unitary(f) -> np.ndarray:
    """Permutation matrix U with U e_g = e_{f(g)}."""
    n = len(f)
    U = np.zeros((n, n))
    U[list(f), list(range(n))] = 1.0
    return U


def verify_unitary(G1, H1, G2, H2, f, tol: float = 1e-12) -> bool:
    """U M(H1*) U^* == M(H2*), checked numerically on matrix units."""
    U = permutation_unitary(f)
    target = e_star(G2, H2.elements).to_mask()
    src = e_star(G1, H1.elements)
    hits = np.zeros_like(target)
    for g, h in src.pairs():
        E = np.zeros((G1.order, G1.order))
        E[h, g] = 1.0
        img = U @ E @ U.T
        nz = np.abs(img) > tol
        if not (nz <= target).all():
            return False
        hits |= nz
    return bool((hits == target).all())


def module_iso_unitary(G1: FiniteGroup, H1, G2: FiniteGroup, H2) -> tuple:
    """Bijection f: G1 -> G2 carrying left cosets of H1 onto left cosets of H2.

    Cosets are paired in order of least representative and matched in
    ascending order inside each coset.
    """
    H1, H2 = _as_subgroup(G1, H1), _as_subgroup(G2, H2)
    if H1.order != H2.order or index(G1, H1) != index(G2, H2):
        raise NotIsomorphicError(
            f"no witness: orders {H1.order} vs {H2.order}, indices {index(G1, H1)} vs {index(G2, H2)}"
        )
    f = _witness(G1, H1, G2, H2)
    if not (verify_witness(G1, H1, G2, H2, f) and verify_unitary(G1, H1, G2, H2, f)):
        raise AssertionError("constructed witness failed verification")
    return f


def module_iso_decide(G1: FiniteGroup, H1, G2: FiniteGroup, H2) -> ClassificationVerdict:
    """Decide *-isomorphism of M(H1*) and M(H2*) from orders and indices."""
    H1, H2 = _as_subgroup(G1, H1), _as_subgroup(G2, H2)
    orders = (H1.order, H2.order)
    indices = (index(G1, H1), index(G2, H2))
    iso = orders[0] == orders[1] and indices[0] == indices[1]
    witness = module_iso_unitary(G1, H1, G2, H2) if iso else None
    return ClassificationVerdict(iso, orders, indices, (G1.order, G2.order), witness)


def subset_module_invariants(G: FiniteGroup, E: Iterable[int]) -> tuple[int, int]:
    """(|<E>|, [G:<E>]), complete invariants for unital subsets E."""
    E = _check_elements(G, E)
    if G.identity not in E:
        raise GroupError("subset must contain the identity (M(E*) must be unital)")
    H = generate_subgroup(G, E)
    return H.order, index(G, H)


def bruteforce_module_iso(G1: FiniteGroup, H1, G2: FiniteGroup, H2):
    """Search all bijections G1 -> G2 for one carrying H1* onto H2*.

    Returns the first witness in lexicographic order, or None.  Test oracle
    only; cost is |G2|!.
    """
    if G1.order != G2.order:
        return None
    src = e_star(G1, H1.elements if isinstance(H1, Subgroup) else H1)
    dst = e_star(G2, H2.elements if isinstance(H2, Subgroup) else H2)
    for f in itertools.permutations(range(G2.order)):
        if src.permuted(f) == dst:
            return f
    return None
