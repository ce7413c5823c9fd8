"""Dense complex-matrix checks for the support-level results.

Matrices are plain ``numpy`` complex arrays.  "w*-closure" and "WOT-closure"
are read as linear span throughout, which is exact in finite dimension.

Tolerances: rank decisions use ``RANK_TOL`` relative to the largest singular
value, entry scans use ``ZERO_TOL`` absolute.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .blocks import IdealMask, _masks_descending
from .support import SupportRelation

RANK_TOL = 1e-9
ZERO_TOL = 1e-12
MEMBER_TOL = 1e-9
MAX_DIM = 16
MAX_REF_DIM = 6


class ToleranceError(ArithmeticError):
    """Rank decision too close to the threshold to trust."""


class SizeError(ValueError):
    pass


def _vec(mats) -> np.ndarray:
    mats = np.asarray(mats, dtype=complex)
    return mats.reshape(mats.shape[0], -1)


def configure(rank_tol: float | None = None, member_tol: float | None = None) -> None:
    """Override the rank and span-membership tolerances for this process."""
    global RANK_TOL, MEMBER_TOL
    if rank_tol is not None:
        RANK_TOL = rank_tol
    if member_tol is not None:
        MEMBER_TOL = member_tol


def _orth_rows(rows: np.ndarray, tol: float | None = None, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis (as rows) of the row span, with a guard band on the rank.

    Singular values are compared against ``tol * scale``; ``scale`` defaults
    to the largest singular value.
    """
    tol = RANK_TOL if tol is None else tol
    if rows.size == 0 or rows.shape[0] == 0:
        return np.zeros((0, rows.shape[1] if rows.ndim == 2 else 0), dtype=complex)
    _, s, vh = np.linalg.svd(rows, full_matrices=False)
    if scale is None:
        scale = s[0] if s.size else 0.0
    if s.size == 0 or scale == 0:
        return np.zeros((0, rows.shape[1]), dtype=complex)
    rel = s / scale
    ambiguous = (rel > tol * 1e-3) & (rel <= tol)
    if ambiguous.any():
        raise ToleranceError(f"singular value ratio {rel[ambiguous][0]:.3e} too close to tolerance {tol}")
    return vh[: int((rel > tol).sum())]


def _kernel(M: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Orthonormal kernel basis (columns); rank cutoff tol * max(1, largest singular value)."""
    tol = RANK_TOL if tol is None else tol
    M = np.atleast_2d(M)
    # vh must be square; the left factor is never needed in full
    _, s, vh = np.linalg.svd(M, full_matrices=M.shape[0] < M.shape[1])
    cutoff = tol * max(1.0, s[0] if s.size else 0.0)
    rank = int((s > cutoff).sum())
    return vh[rank:].conj().T


class SpanSpace:
    """Subspace of n x n complex matrices, kept as an orthonormal basis."""

    def __init__(self, basis: Sequence, tol: float | None = None, *, check: bool = True):
        basis = np.asarray(basis, dtype=complex)
        if basis.ndim != 3 or basis.shape[1] != basis.shape[2]:
            raise ValueError("basis must be a list of square matrices of equal size")
        self.dim = basis.shape[1]
        self.tol = tol
        self.basis = basis
        self._orth = _orth_rows(_vec(basis), tol) if len(basis) else np.zeros((0, self.dim**2), complex)
        if check and self._orth.shape[0] != len(basis):
            raise ToleranceError(f"basis of {len(basis)} matrices has rank {self._orth.shape[0]}")

    @classmethod
    def span(cls, mats: Iterable, dim: int | None = None, tol: float | None = None) -> "SpanSpace":
        """Span of arbitrary matrices; dependent ones are dropped."""
        mats = [np.asarray(m, dtype=complex) for m in mats]
        if not mats:
            if dim is None:
                raise ValueError("dimension needed for an empty span")
            return cls(np.zeros((0, dim, dim)), tol)
        n = mats[0].shape[0]
        orth = _orth_rows(_vec(mats), tol)
        return cls(orth.reshape(-1, n, n), tol)

    def __len__(self) -> int:
        return len(self.basis)

    @property
    def orthonormal(self) -> np.ndarray:
        return self._orth.reshape(-1, self.dim, self.dim)

    def residual(self, T) -> float:
        """Frobenius distance from T to the span, relative to max(1, |T|)."""
        v = np.asarray(T, dtype=complex).reshape(-1)
        r = v - self._orth.T @ (self._orth.conj() @ v)
        return float(np.linalg.norm(r) / max(1.0, np.linalg.norm(v)))

    def __contains__(self, T) -> bool:
        return self.residual(T) < MEMBER_TOL


def matrix_unit(n: int, g: int, h: int) -> np.ndarray:
    """e_h ⊗ e_g^*: a one at row h, column g."""
    E = np.zeros((n, n), dtype=complex)
    E[h, g] = 1.0
    return E


def matrix_unit_space(omega: SupportRelation) -> SpanSpace:
    n = omega.ground
    return SpanSpace([matrix_unit(n, g, h) for g, h in omega.pairs()] or np.zeros((0, n, n)))


def random_support_matrix(omega: SupportRelation, seed) -> np.ndarray:
    """Independent entries on Ω with modulus uniform in [0.5, 1] and uniform phase."""
    rng = np.random.default_rng(seed)
    n = omega.ground
    r = rng.uniform(0.5, 1.0, (n, n))
    theta = rng.uniform(0.0, 2 * np.pi, (n, n))
    return np.where(omega.to_mask(), r * np.exp(1j * theta), 0.0)


def numeric_support(T, tol: float = ZERO_TOL) -> SupportRelation:
    return SupportRelation.from_mask(np.abs(np.asarray(T)) > tol)


@dataclass
class AlgebraStructure:
    algebra_basis: SpanSpace
    central_projections: list
    block_dims: tuple
    multiplicities: tuple
    center_dim: int

    def projection_supports(self, tol: float = 1e-9) -> list[tuple]:
        """Indices i with P e_i ≠ 0, one tuple per central projection."""
        return [tuple(int(i) for i in np.nonzero(np.real(np.diag(P)) > tol)[0]) for P in self.central_projections]

    @property
    def dimension(self) -> int:
        return len(self.algebra_basis)


def _generators(S: SpanSpace) -> list[np.ndarray]:
    gens = []
    for b in S.orthonormal:
        gens.append(b)
        gens.append(b.conj().T)
    return gens


def _center_basis(A: SpanSpace, gens) -> list[np.ndarray]:
    blocks = A.orthonormal
    cols = []
    for b in blocks:
        cols.append(np.concatenate([(b @ g - g @ b).reshape(-1) for g in gens]))
    M = np.array(cols).T
    coeffs = _kernel(M)
    return [np.tensordot(c, blocks, axes=1) for c in coeffs.T]


def _split_center(center, A: SpanSpace, rng) -> list[np.ndarray] | None:
    n = A.dim
    h = np.zeros((n, n), dtype=complex)
    for z in center:
        a, b = rng.integers(1, 1000, size=2) / 997.0
        h += a * (z + z.conj().T) + b * 1j * (z - z.conj().T)
    w, V = np.linalg.eigh(h)
    scale = max(1.0, float(np.abs(w).max()))
    clusters: list[list[int]] = []
    for i in range(n):
        if clusters and abs(w[i] - w[clusters[-1][-1]]) < 1e-7 * scale:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    projs = []
    for c in clusters:
        vecs = V[:, c]
        P = vecs @ vecs.conj().T
        if P in A:
            projs.append(P)
    if len(projs) != len(center):
        return None
    return projs


def _least_index(P) -> int:
    return int(np.nonzero(np.real(np.diag(P)) > 1e-9)[0][0])


def algebra_closure(S, unital: bool = True, cap: int = MAX_DIM, seed: int = 0) -> AlgebraStructure:
    """The *-algebra generated by a span (with I if ``unital``) and its block structure.

    Central projections are ordered by the least basis index in their range.
    """
    S = S if isinstance(S, SpanSpace) else SpanSpace.span(S)
    if len(S) == 0:
        raise ValueError("need a nonempty generating set")
    n = S.dim
    if n > cap:
        raise SizeError(f"dimension {n} exceeds the configured cap {cap}")
    gens = _generators(S)
    start = list(gens) + ([np.eye(n, dtype=complex)] if unital else [])
    A = SpanSpace.span(start)
    while True:
        cand = list(A.orthonormal) + [b @ g for b in A.orthonormal for g in gens]
        B = SpanSpace.span(cand)
        if len(B) == len(A):
            break
        A = B

    center = _center_basis(A, gens)
    rng = np.random.default_rng(seed)
    projs = _split_center(center, A, rng)
    if projs is None:
        projs = _split_center(center, A, rng)
    if projs is None:
        raise ToleranceError("could not split the center into minimal projections (eigenvalue collision)")
    projs.sort(key=_least_index)

    dims, mults = [], []
    for P in projs:
        k = len(SpanSpace.span([P @ b for b in A.orthonormal]))
        d = int(round(np.sqrt(k)))
        if d * d != k:
            raise ToleranceError(f"block of dimension {k} is not a full matrix algebra")
        dims.append(d)
        mults.append(int(round(np.real(np.trace(P)))) // d)
    return AlgebraStructure(A, projs, tuple(dims), tuple(mults), len(center))


def _meets(U: SpanSpace, comp: np.ndarray) -> bool:
    """U ∩ {x : comp·x = 0} ≠ {0}."""
    images = np.array([(comp @ u).reshape(-1) for u in U.orthonormal]).T
    return _kernel(images).shape[1] > 0


def numeric_tip_check(U, seed: int = 0) -> tuple[bool, IdealMask | None]:
    """Trivial intersection property of a unital span, by linear algebra.

    Every ideal of C*(U) is p·C*(U) for a sum p of minimal central
    projections; U meets it iff some nonzero u in U has (I - p) u = 0.
    Masks are visited in descending bit order, as for supports.
    """
    U = U if isinstance(U, SpanSpace) else SpanSpace.span(U)
    n = U.dim
    if np.eye(n) not in U:
        raise ValueError("the span must contain the identity")
    alg = algebra_closure(U, unital=True, seed=seed)
    eye = np.eye(n, dtype=complex)
    for sel in _masks_descending(len(alg.central_projections)):
        p = sum(alg.central_projections[i] for i in sel)
        if not _meets(U, eye - p):
            return False, IdealMask(sel)
    return True, None


def commutant(mats: Sequence, n: int) -> SpanSpace:
    """All X commuting with every matrix in ``mats``."""
    units = [matrix_unit(n, g, h) for h in range(n) for g in range(n)]
    cols = [np.concatenate([(E @ m - m @ E).reshape(-1) for m in mats]) for E in units]
    coeffs = _kernel(np.array(cols).T)
    units = np.array(units)
    return SpanSpace([np.tensordot(c, units, axes=1) for c in coeffs.T])


def enve_hypotheses_check(U, S: Sequence, seed: int = 0) -> bool:
    """Check S·C*(U)' ⊆ U and I ∈ span(S ∪ S^*).

    When both hold the trivial intersection property must follow; that is
    asserted against numeric_tip_check.
    """
    U = U if isinstance(U, SpanSpace) else SpanSpace.span(U)
    S = [np.asarray(s, dtype=complex) for s in S]
    for s in S:
        if s not in U:
            raise ValueError("every element of S must lie in the span of U")
    n = U.dim
    comm = commutant(_generators(U), n)
    ok = all((s @ c) in U for s in S for c in comm.orthonormal)
    ok = ok and np.eye(n) in SpanSpace.span(S + [s.conj().T for s in S], dim=n)
    if ok:
        tip, witness = numeric_tip_check(U, seed=seed)
        if not tip:
            raise AssertionError(f"hypotheses hold but the trivial intersection property fails at {witness}")
    return bool(ok)


def bimodule_span(S: Sequence, tol: float = ZERO_TOL) -> SpanSpace:
    """D·S·D computed as span of products P_h T P_g with diagonal atoms."""
    mats = [np.asarray(T, dtype=complex) for T in S]
    n = mats[0].shape[0]
    atoms = [matrix_unit(n, i, i) for i in range(n)]
    prods = [Ph @ T @ Pg for T in mats for Ph in atoms for Pg in atoms]
    prods = [P for P in prods if np.abs(P).max() > tol]
    return SpanSpace.span(prods, dim=n)


def ref_oracle(S: Sequence, tol: float | None = None) -> SupportRelation:
    """Reflexive hull of D·S·D from the definition, over characteristic vectors.

    (g, h) is kept iff for every subset A the vector (e_h ⊗ e_g^*) χ_A lies in
    the span of {M χ_A : M in the bimodule}.
    """
    tol = MEMBER_TOL if tol is None else tol
    mats = [np.asarray(T, dtype=complex) for T in S]
    n = mats[0].shape[0]
    if any(T.shape != (n, n) for T in mats):
        raise ValueError("matrices must be square of equal size")
    if n > MAX_REF_DIM:
        raise SizeError(f"ref_oracle supports dimension up to {MAX_REF_DIM}")
    basis = bimodule_span(mats).orthonormal
    keep = np.ones((n, n), dtype=bool)
    for bits in itertools.product((0.0, 1.0), repeat=n):
        x = np.array(bits, dtype=complex)
        imgs = np.array([M @ x for M in basis]) if len(basis) else np.zeros((0, n))
        # basis matrices have unit norm, so images are judged on an absolute scale
        Q = _orth_rows(imgs, tol, scale=1.0) if len(imgs) else np.zeros((0, n), dtype=complex)
        for h in range(n):
            for g in range(n):
                if not keep[h, g]:
                    continue
                v = matrix_unit(n, g, h) @ x
                r = v - Q.T @ (Q.conj() @ v)
                if np.linalg.norm(r) > tol:
                    keep[h, g] = False
    return SupportRelation.from_mask(keep)


def annihilator_space(omega: SupportRelation) -> tuple[SpanSpace, np.ndarray]:
    """{T : M_λ T M_κ = 0 whenever κ x λ misses omega}, with its constraint matrix.

    Constraints act on row-major vec(T).
    """
    n = omega.ground
    mask = omega.to_mask()  # [h, g]
    rows = []
    for kappa in itertools.product((0, 1), repeat=n):
        kset = [g for g in range(n) if kappa[g]]
        if not kset:
            continue
        allowed = [h for h in range(n) if not mask[h, kset].any()]
        for r in range(1, len(allowed) + 1):
            for lam in itertools.combinations(allowed, r):
                Dl = np.diag([1.0 if h in lam else 0.0 for h in range(n)])
                Dk = np.diag(np.array(kappa, dtype=float))
                # vec(Dl T Dk) = kron(Dl, Dk^T) vec(T) for row-major vec
                rows.append(np.kron(Dl, Dk.T))
    if rows:
        C = np.vstack(rows)
        sol = _kernel(C).T
    else:
        C = np.zeros((0, n * n))
        sol = np.eye(n * n)
    return SpanSpace(sol.reshape(-1, n, n)), C


def lemma42_check(omega: SupportRelation) -> tuple[int, int, float]:
    """(dim of annihilator space, dim of unit span, largest residual).

    Residuals: annihilator basis against the unit span, and matrix units
    against the annihilation constraints.
    """
    ann, C = annihilator_space(omega)
    units = matrix_unit_space(omega)
    res = [units.residual(T) for T in ann.orthonormal]
    for g, h in omega.pairs():
        res.append(float(np.linalg.norm(C @ matrix_unit(omega.ground, g, h).reshape(-1))))
    return len(ann), len(units), max(res, default=0.0)
