"""Support relations for bimodules over the diagonal masa.

A relation on ``Γ = {0..n-1}`` is stored as ``n`` integer bitsets, one per
matrix row.  Row ``h`` has bit ``g`` set when the pair ``(g, h)`` is present,
i.e. when the matrix unit with a one at row ``h``, column ``g`` (the operator
``e_h ⊗ e_g^*``, mapping ``e_g`` to ``e_h``) lies in the module.  With this
orientation ``compose`` agrees with operator products without transposes.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .groups import (
    CosetPartition,
    FiniteGroup,
    GroupError,
    Subgroup,
    _check_elements,
    generate_subgroup,
    left_cosets,
)


class RelationError(ValueError):
    pass


class NotUnitalError(RelationError):
    """Raised when an operation needs the diagonal inside the support."""


def _bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class SupportRelation:
    ground: int
    rows: tuple

    def __post_init__(self):
        if self.ground < 1:
            raise RelationError("ground size must be positive")
        if len(self.rows) != self.ground:
            raise RelationError(f"expected {self.ground} rows, got {len(self.rows)}")
        limit = 1 << self.ground
        if any(r < 0 or r >= limit for r in self.rows):
            raise RelationError("row bitset references elements outside the ground set")

    # construction
    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "SupportRelation":
        rows = [0] * n
        for g, h in pairs:
            if not (0 <= g < n and 0 <= h < n):
                raise RelationError(f"pair ({g}, {h}) outside ground set of size {n}")
            rows[h] |= 1 << g
        return cls(n, tuple(rows))

    @classmethod
    def from_mask(cls, mask) -> "SupportRelation":
        """From a boolean n x n array indexed [row h, column g]."""
        mask = np.asarray(mask, dtype=bool)
        n = mask.shape[0]
        rows = tuple(sum(1 << int(g) for g in np.nonzero(mask[h])[0]) for h in range(n))
        return cls(n, rows)

    @classmethod
    def empty(cls, n: int) -> "SupportRelation":
        return cls(n, (0,) * n)

    @classmethod
    def full(cls, n: int) -> "SupportRelation":
        return cls(n, ((1 << n) - 1,) * n)

    @classmethod
    def diagonal(cls, n: int) -> "SupportRelation":
        return cls(n, tuple(1 << h for h in range(n)))

    @classmethod
    def from_blocks(cls, n: int, classes) -> "SupportRelation":
        rows = [0] * n
        for c in classes:
            bits = sum(1 << g for g in c)
            for h in c:
                rows[h] |= bits
        return cls(n, tuple(rows))

    # queries
    def __contains__(self, pair) -> bool:
        g, h = pair
        return bool(self.rows[h] >> g & 1)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs())

    def __len__(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def pairs(self) -> list[tuple[int, int]]:
        """Sorted list of (g, h) pairs."""
        return sorted((g, h) for h, r in enumerate(self.rows) for g in _bits(r))

    def column(self, g: int) -> int:
        """Bitset of all h with (g, h) present."""
        return sum(1 << h for h, r in enumerate(self.rows) if r >> g & 1)

    def to_mask(self) -> np.ndarray:
        n = self.ground
        mask = np.zeros((n, n), dtype=bool)
        for h, r in enumerate(self.rows):
            for g in _bits(r):
                mask[h, g] = True
        return mask

    def transpose(self) -> "SupportRelation":
        return SupportRelation(self.ground, tuple(self.column(h) for h in range(self.ground)))

    def _check(self, other: "SupportRelation") -> None:
        if self.ground != other.ground:
            raise RelationError(f"ground size mismatch: {self.ground} vs {other.ground}")

    def __or__(self, other):
        self._check(other)
        return SupportRelation(self.ground, tuple(a | b for a, b in zip(self.rows, other.rows)))

    def __and__(self, other):
        self._check(other)
        return SupportRelation(self.ground, tuple(a & b for a, b in zip(self.rows, other.rows)))

    def __sub__(self, other):
        self._check(other)
        return SupportRelation(self.ground, tuple(a & ~b for a, b in zip(self.rows, other.rows)))

    def __le__(self, other) -> bool:
        self._check(other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def complement(self) -> "SupportRelation":
        return SupportRelation.full(self.ground) - self

    def contains_diagonal(self) -> bool:
        return all(r >> h & 1 for h, r in enumerate(self.rows))

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def is_composition_closed(self) -> bool:
        return compose(self, self) <= self

    def permuted(self, f) -> "SupportRelation":
        """Image under (f x f) for a permutation f given as an index list."""
        return SupportRelation.from_pairs(self.ground, ((f[g], f[h]) for g, h in self.pairs()))

    def __repr__(self):
        return f"SupportRelation(ground={self.ground}, pairs={self.pairs()})"


def compose(omega1: SupportRelation, omega2: SupportRelation) -> SupportRelation:
    """Support of M(omega1)·M(omega2): pairs (g, h) with (g, k) in omega2, (k, h) in omega1.

    For group relations this reverses the factor order:
    compose(E*, F*) == (F·E)*.
    """
    omega1._check(omega2)
    out = []
    for r in omega1.rows:
        acc = 0
        for k in _bits(r):
            acc |= omega2.rows[k]
        out.append(acc)
    return SupportRelation(omega1.ground, tuple(out))


def adjoint_support(omega: SupportRelation) -> SupportRelation:
    return omega.transpose()


def e_star(G: FiniteGroup, E: Iterable[int]) -> SupportRelation:
    """E* = {(g, h) : g^-1 h in E}."""
    E = _check_elements(G, E)
    rows = [0] * G.order
    for g in G.elements():
        for e in E:
            rows[G.mul(g, e)] |= 1 << g
    return SupportRelation(G.order, tuple(rows))


@dataclass(frozen=True)
class BlockStructure:
    """Partition of Γ into classes, ordered by least element."""

    classes: tuple

    @property
    def ground(self) -> int:
        return sum(len(c) for c in self.classes)

    @property
    def block_dims(self) -> tuple:
        return tuple(len(c) for c in self.classes)

    def dims_multiset(self) -> tuple:
        return tuple(sorted(self.block_dims, reverse=True))

    def relation(self) -> SupportRelation:
        return SupportRelation.from_blocks(self.ground, self.classes)


def components(omega: SupportRelation) -> BlockStructure:
    """Connected components of the undirected graph on Γ with edges omega."""
    pairs = omega.pairs()
    n = omega.ground
    g = [p[0] for p in pairs]
    h = [p[1] for p in pairs]
    graph = coo_matrix((np.ones(len(pairs)), (g, h)), shape=(n, n))
    _, labels = connected_components(graph, directed=False)
    groups: dict[int, list[int]] = {}
    for x, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(x)
    classes = sorted(tuple(v) for v in groups.values())
    return BlockStructure(tuple(classes))


def star_closure(omega: SupportRelation) -> tuple[SupportRelation, BlockStructure]:
    """Smallest equivalence relation containing omega, with its classes.

    Elements touched by no pair end up as singleton classes.
    """
    blocks = components(omega)
    return blocks.relation(), blocks


@dataclass(frozen=True)
class ModuleReport:
    unital: bool
    selfadjoint: bool
    algebra: bool
    von_neumann: bool
    generated_subgroup: Subgroup | None
    coset_classes: CosetPartition | None


class BiconditionalMismatch(AssertionError):
    pass


def group_predicates(G: FiniteGroup, E: frozenset) -> tuple[bool, bool, bool]:
    """(1 in E, E == E^-1, E·E ⊆ E), computed inside the group."""
    return (
        G.identity in E,
        G.inverse_set(E) == E,
        G.product_set(E, E) <= E,
    )


def support_predicates(omega: SupportRelation) -> tuple[bool, bool, bool]:
    """(diagonal ⊆ Ω, Ω symmetric, Ω∘Ω ⊆ Ω), computed on the relation."""
    return omega.contains_diagonal(), omega.is_symmetric(), omega.is_composition_closed()


def module_properties(G: FiniteGroup, E: Iterable[int]) -> ModuleReport:
    """Unital / self-adjoint / algebra flags of M(E*), checked both ways.

    Raises BiconditionalMismatch if the group-side and support-side answers
    disagree.
    """
    E = _check_elements(G, E)
    omega = e_star(G, E)
    grp = group_predicates(G, E)
    sup = support_predicates(omega)
    if grp != sup:
        raise BiconditionalMismatch(f"group side {grp} != support side {sup} for E={sorted(E)}")
    unital, selfadjoint, algebra = sup
    H = cosets = None
    if E:
        H = generate_subgroup(G, E)
        cosets = left_cosets(G, H)
    return ModuleReport(unital, selfadjoint, algebra, unital and selfadjoint and algebra, H, cosets)


def parse_relation(text: str, source: str = "<relation>") -> SupportRelation:
    """Parse the relation literal format: ground size, then one ``g h`` pair per line."""
    lines = text.splitlines()
    entries = [(i + 1, ln) for i, ln in enumerate(lines) if ln.strip() and not ln.lstrip().startswith("#")]
    if not entries:
        raise RelationError(f"{source}: empty relation literal")
    lineno, first = entries[0]
    try:
        n = int(first.strip())
    except ValueError:
        col = len(first) - len(first.lstrip()) + 1
        raise RelationError(f"{source}:{lineno}:{col}: expected ground size") from None
    pairs = []
    for lineno, ln in entries[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise RelationError(f"{source}:{lineno}:1: expected 'g h', got {ln.strip()!r}")
        vals = []
        for tok in parts:
            col = ln.index(tok) + 1
            try:
                v = int(tok)
            except ValueError:
                raise RelationError(f"{source}:{lineno}:{col}: not an integer: {tok!r}") from None
            if not 0 <= v < n:
                raise RelationError(f"{source}:{lineno}:{col}: {v} outside 0..{n - 1}")
            vals.append(v)
        pairs.append(tuple(vals))
    return SupportRelation.from_pairs(n, pairs)


def read_relation(path) -> SupportRelation:
    path = Path(path)
    return parse_relation(path.read_text(), source=str(path))


def format_relation(omega: SupportRelation) -> str:
    lines = [str(omega.ground)] + [f"{g} {h}" for g, h in omega.pairs()]
    return "\n".join(lines) + "\n"


__all__ = [
    "BlockStructure",
    "GroupError",
    "ModuleReport",
    "RelationError",
    "SupportRelation",
    "adjoint_support",
    "components",
    "compose",
    "e_star",
    "format_relation",
    "module_properties",
    "parse_relation",
    "read_relation",
    "star_closure",
]
