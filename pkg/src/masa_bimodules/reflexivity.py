"""Reflexive hulls and CSL-algebra decompositions of unital masa bimodules.

Subsets of Γ are taken as any iterable of indices and returned as frozensets.
A projection P in the diagonal masa is identified with the set A it projects
onto; ``X_A`` is the space of operators T with φ(A)^⊥ T P_A = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .support import NotUnitalError, RelationError, SupportRelation, _bits, compose

ZERO_TOL = 1e-12


def _mask(A: Iterable[int], n: int) -> int:
    m = 0
    for a in A:
        if not 0 <= a < n:
            raise RelationError(f"element {a} outside ground set of size {n}")
        m |= 1 << a
    return m


def _set(m: int) -> frozenset:
    return frozenset(_bits(m))


class PhiMap:
    """The map A -> φ(A) of a bimodule support, cached on atoms.

    φ is join-preserving, so the value on any A is the union of atom values.
    """

    def __init__(self, omega: SupportRelation):
        self.source = omega
        self.atoms = tuple(omega.column(g) for g in range(omega.ground))

    def bits(self, A_mask: int) -> int:
        out = 0
        for g in _bits(A_mask):
            out |= self.atoms[g]
        return out

    def __call__(self, A: Iterable[int]) -> frozenset:
        return _set(self.bits(_mask(A, self.source.ground)))


def map_phi(omega: SupportRelation, A: Iterable[int]) -> frozenset:
    """{h : (g, h) in omega for some g in A}."""
    return PhiMap(omega)(A)


def bimodule_support(S: Sequence, tol: float = ZERO_TOL) -> SupportRelation:
    """Support of the smallest diagonal-masa bimodule containing the matrices S."""
    mats = [np.asarray(T) for T in S]
    if not mats:
        raise RelationError("need at least one matrix")
    n = mats[0].shape[0]
    for T in mats:
        if T.shape != (n, n):
            raise RelationError(f"size mismatch: expected {(n, n)}, got {T.shape}")
    mask = np.zeros((n, n), dtype=bool)
    for T in mats:
        mask |= np.abs(T) > tol
    return SupportRelation.from_mask(mask)


def ref_hull(omega: SupportRelation) -> SupportRelation:
    """Reflexive hull of M(omega), rebuilt from the atom values of φ.

    Finite-dimensional masa bimodules are reflexive, so the result always
    equals omega; the equality is asserted.
    """
    phi = PhiMap(omega)
    hull = SupportRelation.from_pairs(
        omega.ground, ((g, h) for g in range(omega.ground) for h in _bits(phi.atoms[g]))
    )
    assert hull == omega, "reflexive hull differs from the bimodule support"
    return hull


def _require_unital(omega: SupportRelation) -> None:
    if not omega.contains_diagonal():
        raise NotUnitalError("decomposition needs a unital bimodule (diagonal contained in the support)")


def _rect(n: int, cols: int, rows: int) -> SupportRelation:
    """All pairs (g, h) with g in cols and h in rows (bitsets)."""
    return SupportRelation(n, tuple(cols if rows >> h & 1 else 0 for h in range(n)))


def _x_space_bits(omega: SupportRelation, phi: PhiMap, a: int) -> SupportRelation:
    n = omega.ground
    full = (1 << n) - 1
    return SupportRelation.full(n) - _rect(n, a, full & ~phi.bits(a))


def x_space(omega: SupportRelation, A: Iterable[int]) -> SupportRelation:
    """Support of {T : φ(A)^⊥ T P_A = 0}, i.e. everything but A x (Γ \\ φ(A))."""
    _require_unital(omega)
    return _x_space_bits(omega, PhiMap(omega), _mask(A, omega.ground))


def _implication(n: int, src: int, dst: int) -> SupportRelation:
    """Pairs (g, h) with g in src implying h in dst."""
    full = (1 << n) - 1
    return SupportRelation.full(n) - _rect(n, src, full & ~dst)


def _summands(omega, phi, a):
    n = omega.ground
    full = (1 << n) - 1
    X = _x_space_bits(omega, phi, a)
    q = phi.bits(a) & ~a
    a1 = X & _implication(n, q, q)
    a2 = X & _implication(n, full & ~q, full & ~q)
    return X, q, a1, a2


def csl_summands(omega: SupportRelation, A: Iterable[int]) -> tuple[SupportRelation, SupportRelation]:
    """The two CSL algebras whose sum is ``x_space(omega, A)``.

    With Q = φ(A) \\ A the summands are the pairs of X leaving Q invariant
    and the pairs of X leaving Γ \\ Q invariant.
    """
    _require_unital(omega)
    _, _, a1, a2 = _summands(omega, PhiMap(omega), _mask(A, omega.ground))
    return a1, a2


def _delta_b(omega, phi, a):
    n = omega.ground
    fa = phi.bits(a)
    full = (1 << n) - 1
    return _implication(n, a, a) & _implication(n, full & ~fa, full & ~fa)


def delta_decomposition(omega: SupportRelation, A: Iterable[int]) -> SupportRelation:
    """Support of the CSL algebra B with B + B^* equal to the diagonal of X_A.

    B leaves both A and φ(A) invariant in the sense g in A => h in A and
    g outside φ(A) => h outside φ(A).
    """
    _require_unital(omega)
    if not omega.is_symmetric():
        raise RelationError("the self-adjoint decomposition needs a symmetric support")
    return _delta_b(omega, PhiMap(omega), _mask(A, omega.ground))


def is_csl_algebra_support(omega: SupportRelation) -> bool:
    """Contains the diagonal, closed under composition, equal to its own hull."""
    return omega.contains_diagonal() and compose(omega, omega) <= omega and ref_hull(omega) == omega


@dataclass(frozen=True)
class DecompositionCertificate:
    atom: int
    x_support: SupportRelation
    q_set: frozenset
    summand_a1: SupportRelation
    summand_a2: SupportRelation
    selfadjoint_summand_b: SupportRelation | None = None
    verified: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.verified.values())

    def to_dict(self) -> dict:
        out = {
            "atom": self.atom,
            "q_set": sorted(self.q_set),
            "x_support": self.x_support.pairs(),
            "summand_a1": self.summand_a1.pairs(),
            "summand_a2": self.summand_a2.pairs(),
            "selfadjoint_summand_b": None if self.selfadjoint_summand_b is None else self.selfadjoint_summand_b.pairs(),
            "verified": dict(sorted(self.verified.items())),
        }
        return out


def _certificate(omega, phi, g, symmetric):
    a = 1 << g
    X, q, a1, a2 = _summands(omega, phi, a)
    checks = {
        "union_identity": (a1 | a2) == X,
        "a1_diagonal": a1.contains_diagonal(),
        "a2_diagonal": a2.contains_diagonal(),
        "a1_closed": a1.is_composition_closed(),
        "a2_closed": a2.is_composition_closed(),
        "contains_module": omega <= X,
    }
    b = None
    if symmetric:
        b = _delta_b(omega, phi, a)
        checks["b_diagonal"] = b.contains_diagonal()
        checks["b_closed"] = b.is_composition_closed()
        checks["b_identity"] = (b | b.transpose()) == (X & X.transpose())
    return DecompositionCertificate(g, X, _set(q), a1, a2, b, checks)


def full_decomposition(omega: SupportRelation) -> list[DecompositionCertificate]:
    """One certificate per atom; their X spaces intersect to omega.

    For symmetric omega each certificate also carries the self-adjoint
    summand B_g.
    """
    _require_unital(omega)
    phi = PhiMap(omega)
    symmetric = omega.is_symmetric()
    return [_certificate(omega, phi, g, symmetric) for g in range(omega.ground)]


def intersect_summands(certs: Sequence[DecompositionCertificate], n: int) -> SupportRelation:
    """⋂ over certificates of (A1 ∪ A2)."""
    out = SupportRelation.full(n)
    for c in certs:
        out = out & (c.summand_a1 | c.summand_a2)
    return out


def intersect_selfadjoint(certs: Sequence[DecompositionCertificate], n: int) -> SupportRelation:
    """⋂ over certificates of (B ∪ B^T)."""
    out = SupportRelation.full(n)
    for c in certs:
        if c.selfadjoint_summand_b is None:
            raise RelationError("certificates carry no self-adjoint summand")
        b = c.selfadjoint_summand_b
        out = out & (b | b.transpose())
    return out


def intersect_all_subsets(omega: SupportRelation) -> SupportRelation:
    """⋂ of X_A over all 2^n subsets A; equals the atom-only intersection."""
    _require_unital(omega)
    phi = PhiMap(omega)
    out = SupportRelation.full(omega.ground)
    for a in range(1 << omega.ground):
        out = out & _x_space_bits(omega, phi, a)
    return out


def format_decomposition(omega: SupportRelation, certs: Sequence[DecompositionCertificate]) -> str:
    lines = [f"ground size {omega.ground}, {len(omega)} pairs"]
    for c in certs:
        lines.append(f"atom {c.atom}: Q = {sorted(c.q_set)}")
        lines.append(f"  X  = {c.x_support.pairs()}")
        lines.append(f"  A1 = {c.summand_a1.pairs()}")
        lines.append(f"  A2 = {c.summand_a2.pairs()}")
        if c.selfadjoint_summand_b is not None:
            lines.append(f"  B  = {c.selfadjoint_summand_b.pairs()}")
        verdicts = ", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in sorted(c.verified.items()))
        lines.append(f"  checks: {verdicts}")
    n = omega.ground
    lines.append(f"intersection of A1+A2 equals module: {intersect_summands(certs, n) == omega}")
    if certs and certs[0].selfadjoint_summand_b is not None:
        lines.append(f"intersection of B+B* equals module: {intersect_selfadjoint(certs, n) == omega}")
    return "\n".join(lines) + "\n"
