import numpy as np
import pytest
from scipy.stats import unitary_group

from masa_bimodules.blocks import cstar_support, trivial_intersection
from masa_bimodules.oracle import (
    SizeError,
    SpanSpace,
    ToleranceError,
    algebra_closure,
    annihilator_space,
    enve_hypotheses_check,
    lemma42_check,
    matrix_unit,
    matrix_unit_space,
    numeric_tip_check,
    random_support_matrix,
    ref_oracle,
)
from masa_bimodules.reflexivity import bimodule_support, ref_hull
from masa_bimodules.support import SupportRelation, star_closure
from masa_bimodules.verify import random_relation

DIAG_COUNTEREXAMPLE = [np.eye(3), np.diag([1.0, -1.0, 0.0])]


def test_span_space_basics():
    S = SpanSpace.span([np.eye(2), 2 * np.eye(2), matrix_unit(2, 0, 1)])
    assert len(S) == 2
    assert np.eye(2) * 5 - 3 * matrix_unit(2, 0, 1) in S
    assert matrix_unit(2, 1, 0) not in S
    with pytest.raises(ToleranceError):
        SpanSpace([np.eye(2), np.eye(2)])


def test_closure_of_identity():
    alg = algebra_closure([np.eye(3)])
    assert alg.dimension == 1
    assert len(alg.central_projections) == 1
    assert np.allclose(alg.central_projections[0], np.eye(3))
    assert alg.block_dims == (1,) and alg.multiplicities == (3,)


def test_closure_of_single_unit_is_full_m2():
    alg = algebra_closure([matrix_unit(2, 0, 1)])
    assert alg.dimension == 4 and alg.block_dims == (2,)


def test_closure_non_unital():
    alg = algebra_closure([matrix_unit(3, 0, 0)], unital=False)
    assert alg.dimension == 1 and alg.block_dims == (1,)
    assert np.allclose(alg.central_projections[0], matrix_unit(3, 0, 0))


def test_closure_with_multiplicity_in_rotated_basis():
    rng = np.random.default_rng(2)
    V = unitary_group.rvs(4, random_state=3)
    gens = [V @ np.kron(rng.normal(size=(2, 2)), np.eye(2)) @ V.conj().T for _ in range(2)]
    alg = algebra_closure(gens)
    assert alg.dimension == 4 and alg.block_dims == (2,) and alg.multiplicities == (2,)
    # a two-block algebra hidden by a unitary change of basis
    W = unitary_group.rvs(5, random_state=4)
    A = np.zeros((5, 5), complex)
    A[:2, :2] = rng.normal(size=(2, 2))
    B = np.zeros((5, 5), complex)
    B[2:, 2:] = rng.normal(size=(3, 3))
    alg = algebra_closure([W @ A @ W.conj().T, W @ B @ W.conj().T])
    assert sorted(alg.block_dims) == [2, 3]
    assert sum(d * d for d in alg.block_dims) == alg.dimension == 13
    total = sum(alg.central_projections)
    assert np.allclose(total, np.eye(5))
    for P in alg.central_projections:
        assert np.allclose(P @ P, P) and np.allclose(P, P.conj().T)
        for b in alg.algebra_basis.orthonormal:
            assert np.allclose(P @ b, b @ P)


def test_closure_matches_cstar_support():
    rng = np.random.default_rng(8)
    for _ in range(30):
        n = int(rng.integers(1, 7))
        omega = random_relation(n, rng, unital=True)
        alg = algebra_closure(matrix_unit_space(omega))
        bs = cstar_support(omega)
        assert alg.block_dims == bs.block_dims
        assert alg.projection_supports() == list(bs.classes)
        assert sum(d * d for d in alg.block_dims) == alg.dimension == len(star_closure(omega)[0])


def test_closure_size_cap():
    with pytest.raises(SizeError):
        algebra_closure([np.eye(4)], cap=3)


def test_tip_counterexample_witness():
    ok, w = numeric_tip_check(DIAG_COUNTEREXAMPLE)
    assert not ok and w.selected == frozenset({2})
    # oracle: u = (a+b, a-b, a). Supported on one coordinate forces a = b = 0;
    # supported on two leaves a free parameter. Check every block by hand-solving.
    coeffs = np.array([[1.0, 1.0], [1.0, -1.0], [1.0, 0.0]])
    for m in range(1, 7):
        outside = [i for i in range(3) if not m >> i & 1]
        meets = np.linalg.matrix_rank(coeffs[outside]) < 2
        assert meets == (bin(m).count("1") == 2)


def test_tip_true_cases():
    assert numeric_tip_check([matrix_unit(3, g, h) for g in range(3) for h in range(3)]) == (True, None)
    rng = np.random.default_rng(4)
    for _ in range(10):
        omega = random_relation(int(rng.integers(1, 5)), rng, unital=True)
        ok, _ = numeric_tip_check(matrix_unit_space(omega))
        assert ok == trivial_intersection(omega)[0] is True


def test_tip_needs_identity():
    with pytest.raises(ValueError, match="identity"):
        numeric_tip_check([np.diag([1.0, 0.0])])


def test_enve_hypotheses_examples():
    n = 3
    diag_units = [matrix_unit(n, i, i) for i in range(n)]
    omega = SupportRelation.from_pairs(n, [(0, 0), (1, 1), (2, 2), (0, 1)])
    assert enve_hypotheses_check(matrix_unit_space(omega), diag_units)
    assert not enve_hypotheses_check(DIAG_COUNTEREXAMPLE, [np.eye(3)])
    full = [matrix_unit(n, g, h) for g in range(n) for h in range(n)]
    assert enve_hypotheses_check(full, [np.eye(n)])
    with pytest.raises(ValueError, match="span of U"):
        enve_hypotheses_check(DIAG_COUNTEREXAMPLE, [matrix_unit(3, 0, 1)])


def test_ref_oracle_examples():
    assert ref_oracle([matrix_unit(2, 0, 1)]).pairs() == [(0, 1)]
    T = np.zeros((3, 3))
    T[:, 0] = [1, 1, 0]
    assert ref_oracle([T]).pairs() == [(0, 0), (0, 1)]
    assert ref_oracle([np.eye(4)]) == SupportRelation.diagonal(4)
    with pytest.raises(SizeError):
        ref_oracle([np.eye(7)])


def test_ref_oracle_matches_hull_random():
    rng = np.random.default_rng(21)
    for _ in range(15):
        n = int(rng.integers(1, 6))
        S = [random_support_matrix(random_relation(n, rng, density=0.3), int(rng.integers(1000)))]
        assert ref_oracle(S) == ref_hull(bimodule_support(S))


def test_random_support_matrix():
    assert not random_support_matrix(SupportRelation.empty(3), 0).any()
    D = random_support_matrix(SupportRelation.diagonal(4), 1)
    assert np.allclose(D, np.diag(np.diag(D)))
    assert ((np.abs(np.diag(D)) >= 0.5) & (np.abs(np.diag(D)) <= 1.0)).all()
    omega = SupportRelation.from_pairs(3, [(0, 1), (2, 2)])
    assert np.array_equal(random_support_matrix(omega, 5), random_support_matrix(omega, 5))


def test_annihilator_space_equals_unit_span():
    rng = np.random.default_rng(6)
    for _ in range(10):
        omega = random_relation(int(rng.integers(1, 5)), rng)
        d_ann, d_units, resid = lemma42_check(omega)
        assert d_ann == d_units == len(omega)
        assert resid < 1e-9
    ann, C = annihilator_space(SupportRelation.empty(2))
    assert len(ann) == 0
    ann, C = annihilator_space(SupportRelation.full(2))
    assert len(ann) == 4 and C.shape[0] == 0
