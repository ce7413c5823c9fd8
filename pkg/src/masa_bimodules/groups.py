"""Finite groups as Cayley tables over dense indices 0..n-1.

Element 0 is always the identity.  Groups are built from short spec strings
(``cyclic:4``, ``dihedral:3``, ``symmetric:3``, ``product:(cyclic:2,cyclic:4)``)
or from an explicit multiplication table.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

MAX_SYMMETRIC_DEGREE = 5
MAX_ISO_ORDER = 12


class GroupError(ValueError):
    """Raised for invalid group data, specs or subgroup arguments."""


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[a, b]`` is the index of ``a*b``.  ``labels`` are display names only.
    """

    table: np.ndarray
    inverse: np.ndarray
    name: str = "group"
    labels: tuple = field(default=())

    identity = 0

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def elements(self) -> range:
        return range(self.order)

    def label(self, a: int) -> str:
        return str(self.labels[a]) if self.labels else str(a)

    def index_of(self, label) -> int:
        """Index of the element whose label equals ``label``."""
        for i, lab in enumerate(self.labels):
            if lab == label or str(lab) == str(label):
                return i
        raise GroupError(f"{self.name} has no element labelled {label!r}")

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def product_set(self, E: Iterable[int], F: Iterable[int]) -> frozenset:
        """The set E·F = {e*f}."""
        F = list(F)
        return frozenset(self.mul(e, f) for e in E for f in F)

    def inverse_set(self, E: Iterable[int]) -> frozenset:
        return frozenset(self.inv(e) for e in E)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, a) -> bool:
        return a in self._set

    @property
    def _set(self) -> frozenset:
        return frozenset(self.elements)

    def as_group(self) -> FiniteGroup:
        """Re-index the subgroup as a standalone group (identity stays at 0)."""
        pos = {g: i for i, g in enumerate(self.elements)}
        m = len(self.elements)
        table = np.empty((m, m), dtype=np.int64)
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements):
                table[i, j] = pos[self.parent.mul(a, b)]
        labels = tuple(self.parent.labels[g] for g in self.elements) if self.parent.labels else ()
        return from_table(table, name=f"sub({self.parent.name})", labels=labels)


@dataclass(frozen=True)
class CosetPartition:
    parent: FiniteGroup
    subgroup: Subgroup
    classes: tuple

    def class_of(self, g: int) -> tuple:
        for c in self.classes:
            if g in c:
                return c
        raise GroupError(f"element {g} not in any coset")


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.int64)
    arr.setflags(write=False)
    return arr


def from_table(table, name: str = "table", labels: Sequence = ()) -> FiniteGroup:
    """Validate a multiplication table and return the group.

    The identity is moved to index 0 if it sits elsewhere.  Errors name the
    first failing element or triple.
    """
    t = np.asarray(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise GroupError(f"table must be a nonempty square array, got shape {t.shape}")
    n = t.shape[0]
    if not np.issubdtype(t.dtype, np.integer):
        raise GroupError("table entries must be integers")
    if t.min() < 0 or t.max() >= n:
        raise GroupError(f"table entries must lie in 0..{n - 1}")
    t = t.astype(np.int64)
    labels = tuple(labels) if labels else tuple(range(n))

    ids = [e for e in range(n) if np.array_equal(t[e], np.arange(n)) and np.array_equal(t[:, e], np.arange(n))]
    if not ids:
        raise GroupError("table has no two-sided identity")
    e = ids[0]
    if e != 0:
        perm = np.arange(n)
        perm[0], perm[e] = e, 0  # perm[new] = old; a transposition is its own inverse
        t = perm[t[np.ix_(perm, perm)]]
        labels = tuple(labels[perm[i]] for i in range(n))

    # associativity, vectorized over c
    for a in range(n):
        for b in range(n):
            lhs = t[t[a, b]]
            rhs = t[a][t[b]]
            bad = np.nonzero(lhs != rhs)[0]
            if bad.size:
                c = int(bad[0])
                raise GroupError(f"table is not associative at triple ({a}, {b}, {c})")

    inverse = np.empty(n, dtype=np.int64)
    for a in range(n):
        right = np.nonzero(t[a] == 0)[0]
        if right.size == 0 or t[right[0], a] != 0:
            raise GroupError(f"element {a} has no inverse")
        inverse[a] = right[0]
    return FiniteGroup(_freeze(t), _freeze(inverse), name=name, labels=labels)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic order must be positive")
    idx = np.arange(n)
    return from_table((idx[:, None] + idx[None, :]) % n, name=f"cyclic:{n}")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; index k + n*j stands for r^k s^j."""
    if n < 1:
        raise GroupError("dihedral parameter must be positive")
    m = 2 * n
    table = np.empty((m, m), dtype=np.int64)
    for x in range(m):
        a, i = x % n, x // n
        for y in range(m):
            b, j = y % n, y // n
            k = (a + (b if i == 0 else -b)) % n
            table[x, y] = k + n * ((i + j) % 2)
    labels = tuple(f"r{k}" if j == 0 else f"sr{k}" for j in range(2) for k in range(n))
    return from_table(table, name=f"dihedral:{n}", labels=labels)


def symmetric(n: int) -> FiniteGroup:
    """Symmetric group on n points; elements are permutation tuples in lexicographic order."""
    if not 1 <= n <= MAX_SYMMETRIC_DEGREE:
        raise GroupError(f"symmetric degree must be in 1..{MAX_SYMMETRIC_DEGREE}")
    perms = list(itertools.permutations(range(n)))
    pos = {p: i for i, p in enumerate(perms)}
    m = len(perms)
    table = np.empty((m, m), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            # (p*q)(x) = p(q(x))
            table[i, j] = pos[tuple(p[q[x]] for x in range(n))]
    return from_table(table, name=f"symmetric:{n}", labels=tuple(perms))


def direct_product(A: FiniteGroup, B: FiniteGroup) -> FiniteGroup:
    """A x B with index a*|B| + b for the pair (a, b)."""
    na, nb = A.order, B.order
    ia = np.repeat(np.arange(na), nb)
    ib = np.tile(np.arange(nb), na)
    table = A.table[np.ix_(ia, ia)] * nb + B.table[np.ix_(ib, ib)]
    la = A.labels or tuple(range(na))
    lb = B.labels or tuple(range(nb))
    labels = tuple((la[a], lb[b]) for a in range(na) for b in range(nb))
    return from_table(table, name=f"product:({A.name},{B.name})", labels=labels)


def read_table_file(path) -> FiniteGroup:
    """Load a group table file: first line n, then n rows of n indices."""
    path = Path(path)
    lines = [ln for ln in path.read_text().splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise GroupError(f"{path}: empty table file")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise GroupError(f"{path}:1: expected the group order") from None
    if len(lines) != n + 1:
        raise GroupError(f"{path}: expected {n} table rows, found {len(lines) - 1}")
    rows = []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != n:
            raise GroupError(f"{path}:{lineno}: expected {n} entries, found {len(parts)}")
        try:
            rows.append([int(p) for p in parts])
        except ValueError as exc:
            raise GroupError(f"{path}:{lineno}: {exc}") from None
    return from_table(np.array(rows), name=path.name)


def write_table_file(G: FiniteGroup, path) -> None:
    rows = [str(G.order)] + [" ".join(str(int(x)) for x in row) for row in G.table]
    Path(path).write_text("\n".join(rows) + "\n")


_SIMPLE = re.compile(r"^(cyclic|dihedral|symmetric):(\d+)$")


def _split_pair(body: str, spec: str) -> tuple[str, str]:
    depth = 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return body[:i], body[i + 1:]
    raise GroupError(f"malformed product spec {spec!r}: expected product:(A,B)")


def build_group(spec) -> FiniteGroup:
    """Build a group from a spec string, a table file path or a table array.

    >>> build_group("product:(cyclic:2,cyclic:4)").order
    8
    """
    if isinstance(spec, FiniteGroup):
        return spec
    if not isinstance(spec, (str, Path)):
        return from_table(spec)
    if isinstance(spec, Path):
        return read_table_file(spec)
    s = spec.strip().replace(" ", "")
    if s.startswith("table:"):
        return read_table_file(s[len("table:"):])
    m = _SIMPLE.match(s)
    if m:
        kind, n = m.group(1), int(m.group(2))
        return {"cyclic": cyclic, "dihedral": dihedral, "symmetric": symmetric}[kind](n)
    if s.startswith("product:(") and s.endswith(")"):
        left, right = _split_pair(s[len("product:("):-1], spec)
        return direct_product(build_group(left), build_group(right))
    if Path(spec).is_file():
        return read_table_file(spec)
    raise GroupError(f"malformed group spec {spec!r}")


def _check_elements(G: FiniteGroup, E: Iterable[int]) -> frozenset:
    E = frozenset(int(e) for e in E)
    bad = [e for e in E if not 0 <= e < G.order]
    if bad:
        raise GroupError(f"element index {min(bad)} out of range for group of order {G.order}")
    return E


def generate_subgroup(G: FiniteGroup, E: Iterable[int]) -> Subgroup:
    """Smallest subgroup of G containing E, by closure until stable."""
    E = _check_elements(G, E)
    if not E:
        raise GroupError("cannot generate a subgroup from an empty set")
    gens = E | G.inverse_set(E)
    current = {G.identity} | gens
    frontier = set(current)
    while frontier:
        new = {G.mul(x, g) for x in frontier for g in gens} - current
        current |= new
        frontier = new
    return Subgroup(G, tuple(sorted(current)))


def is_subgroup(G: FiniteGroup, elements: Iterable[int]) -> bool:
    S = _check_elements(G, elements)
    if G.identity not in S:
        return False
    return all(G.mul(a, b) in S for a in S for b in S) and all(G.inv(a) in S for a in S)


def subgroup(G: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    """Wrap a set already closed under the group operations, or raise."""
    S = _check_elements(G, elements)
    if not is_subgroup(G, S):
        raise GroupError(f"{sorted(S)} is not a subgroup of {G.name}")
    return Subgroup(G, tuple(sorted(S)))


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, found as joins of cyclic subgroups (fine for small G)."""
    cyclics = {generate_subgroup(G, [g]).elements for g in G.elements()}
    found = set(cyclics)
    frontier = set(cyclics)
    while frontier:
        new = set()
        for H in frontier:
            for C in cyclics:
                K = generate_subgroup(G, set(H) | set(C)).elements
                if K not in found:
                    new.add(K)
        found |= new
        frontier = new
    return [Subgroup(G, els) for els in sorted(found, key=lambda s: (len(s), s))]


def left_cosets(G: FiniteGroup, H: Subgroup) -> CosetPartition:
    """Left cosets gH, ordered by least representative."""
    if not is_subgroup(G, H.elements):
        raise GroupError(f"{list(H.elements)} is not closed in {G.name}")
    seen = set()
    classes = []
    for g in G.elements():
        if g in seen:
            continue
        coset = tuple(sorted(G.mul(g, h) for h in H.elements))
        seen.update(coset)
        classes.append(coset)
    return CosetPartition(G, H, tuple(classes))


def index(G: FiniteGroup, H: Subgroup) -> int:
    return len(left_cosets(G, H).classes)


def _as_group(X) -> FiniteGroup:
    return X.as_group() if isinstance(X, Subgroup) else X


def _generating_sequence(G: FiniteGroup) -> list[int]:
    """Greedy generators, largest element order first."""
    gens: list[int] = []
    span = {0}
    for g in sorted(G.elements(), key=lambda x: (-G.element_order(x), x)):
        if g not in span:
            gens.append(g)
            span = set(generate_subgroup(G, gens).elements)
        if len(span) == G.order:
            break
    return gens


def _extend(A: FiniteGroup, B: FiniteGroup, gens, images) -> dict | None:
    """Extend gens -> images to a homomorphism A -> B, or None on conflict."""
    phi = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, im in zip(gens, images):
                y, fy = A.mul(x, g), B.mul(phi[x], im)
                if y in phi:
                    if phi[y] != fy:
                        return None
                else:
                    phi[y] = fy
                    nxt.append(y)
        frontier = nxt
    return phi


def small_group_isomorphic(A, B) -> bool:
    """Decide whether two small groups (or subgroups) are isomorphic.

    Search over images of a generating sequence of A, restricted to elements
    of B with matching order; each candidate is extended to a homomorphism and
    accepted if bijective.
    """
    A, B = _as_group(A), _as_group(B)
    if max(A.order, B.order) > MAX_ISO_ORDER:
        raise GroupError(f"isomorphism search supports orders up to {MAX_ISO_ORDER}")
    if A.order != B.order:
        return False
    orders_a = [A.element_order(x) for x in A.elements()]
    orders_b = [B.element_order(x) for x in B.elements()]
    if sorted(orders_a) != sorted(orders_b):
        return False
    if A.order == 1:
        return True
    gens = _generating_sequence(A)
    pools = [[y for y in B.elements() if orders_b[y] == orders_a[g]] for g in gens]
    for images in itertools.product(*pools):
        if len(set(images)) < len(images):
            continue
        phi = _extend(A, B, gens, images)
        if phi is not None and len(set(phi.values())) == B.order:
            return True
    return False
