import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bearing_rigidity import (NumericalError, TOLERANCE_PROFILES,
                              TolerancePolicy, ValidationError,
                              orthogonal_projector, orthonormal_columns,
                              planar_rotation, random_rotation,
                              rank_and_nullspace, rotation_axis_angle,
                              rotation_exp, skew, subspace_contains,
                              subspace_relation)

finite = st.floats(-10.0, 10.0, allow_nan=False, allow_infinity=False)
vectors3 = st.lists(finite, min_size=3, max_size=3).map(np.array)
unit3 = vectors3.filter(lambda v: np.linalg.norm(v) > 0.5).map(
    lambda v: v / np.linalg.norm(v))


def test_policy_defaults_and_profiles():
    pol = TolerancePolicy()
    assert pol.rank_rtol is None
    assert pol.subspace_tol == 1e-8
    assert pol.fd_step == 1e-6
    assert set(TOLERANCE_PROFILES) == {"default", "strict", "relaxed"}
    assert TOLERANCE_PROFILES["strict"].rank_rtol == 1e-12


def test_policy_rejects_nonpositive():
    with pytest.raises(ValidationError):
        TolerancePolicy(rank_rtol=0.0)
    with pytest.raises(ValidationError):
        TolerancePolicy(subspace_tol=-1e-9)


def test_adaptive_rank_threshold_scales_with_shape():
    pol = TolerancePolicy()
    assert pol.effective_rank_rtol((30, 12)) == pytest.approx(3e-9)
    pinned = TolerancePolicy(rank_rtol=1e-10)
    assert pinned.effective_rank_rtol((30, 12)) == 1e-10


@given(unit3)
@settings(max_examples=60, deadline=None)
def test_projector_properties(x):
    P = orthogonal_projector(x)
    np.testing.assert_allclose(P, P.T, atol=1e-12)
    np.testing.assert_allclose(P @ P, P, atol=1e-12)
    np.testing.assert_allclose(P @ x, 0.0, atol=1e-12)
    # eigenvalues are 0 once and 1 twice
    assert np.linalg.matrix_rank(P) == 2


def test_projector_rejects_zero():
    with pytest.raises(ValidationError):
        orthogonal_projector(np.zeros(3))


@given(vectors3, vectors3)
@settings(max_examples=60, deadline=None)
def test_skew_is_cross_product(a, b):
    np.testing.assert_allclose(skew(a) @ b, np.cross(a, b), atol=1e-12)
    np.testing.assert_allclose(skew(a).T, -skew(a), atol=1e-12)


def test_rotation_about_z_quarter_turn():
    R = rotation_axis_angle(np.array([0.0, 0.0, 1.0]), np.pi / 2)
    np.testing.assert_allclose(R @ [1, 0, 0], [0, 1, 0], atol=1e-12)
    np.testing.assert_allclose(R @ [0, 1, 0], [-1, 0, 0], atol=1e-12)


def test_rotation_zero_axis_is_identity():
    np.testing.assert_array_equal(rotation_axis_angle(np.zeros(3), 0.3),
                                  np.eye(3))


def test_rotation_rejects_non_unit_axis():
    with pytest.raises(ValidationError):
        rotation_axis_angle(np.array([0.0, 0.0, 2.0]), 0.1)


def test_planar_rotation_quarter_turn():
    R = planar_rotation(np.pi / 2)
    np.testing.assert_allclose(R, [[0, -1], [1, 0]], atol=1e-12)
    np.testing.assert_allclose(planar_rotation(0.0), np.eye(2), atol=1e-15)


@given(vectors3)
@settings(max_examples=40, deadline=None)
def test_exponential_gives_special_orthogonal(w):
    R = rotation_exp(w)
    np.testing.assert_allclose(R.T @ R, np.eye(3), atol=1e-10)
    assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-10)


@given(st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_random_rotation_is_special_orthogonal(seed):
    R = random_rotation(np.random.default_rng(seed))
    np.testing.assert_allclose(R.T @ R, np.eye(3), atol=1e-10)
    assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-10)


def test_rank_and_nullspace_on_known_matrix():
    pol = TolerancePolicy()
    M = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]])
    rank, null = rank_and_nullspace(M, pol)
    assert rank == 1
    assert null.shape == (3, 2)
    np.testing.assert_allclose(M @ null, 0.0, atol=1e-12)
    np.testing.assert_allclose(null.T @ null, np.eye(2), atol=1e-12)


def test_rank_rejects_nan():
    with pytest.raises(NumericalError):
        rank_and_nullspace(np.array([[np.nan, 1.0]]), TolerancePolicy())


def test_full_rank_gives_empty_nullspace():
    rank, null = rank_and_nullspace(np.eye(4), TolerancePolicy())
    assert rank == 4 and null.shape == (4, 0)


def test_orthonormal_columns_drops_dependent_ones():
    pol = TolerancePolicy()
    A = np.array([[1.0, 2.0], [0.0, 0.0], [1.0, 2.0]])
    Q = orthonormal_columns(A, pol)
    assert Q.shape == (3, 1)
    np.testing.assert_allclose(np.linalg.norm(Q[:, 0]), 1.0)


def test_subspace_relations():
    pol = TolerancePolicy()
    e1 = np.array([[1.0], [0.0], [0.0]])
    e12 = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    e3 = np.array([[0.0], [0.0], [1.0]])
    assert subspace_contains(e12, e1, pol)
    assert not subspace_contains(e1, e12, pol)
    assert subspace_relation(e1, e12, pol) == "A_subset_B"
    assert subspace_relation(e12, e1, pol) == "B_subset_A"
    assert subspace_relation(e12, e12, pol) == "equal"
    assert subspace_relation(e1, e3, pol) == "incomparable"


def test_subspace_relation_under_change_of_basis():
    pol = TolerancePolicy()
    rng = np.random.default_rng(7)
    Q = np.linalg.qr(rng.standard_normal((5, 3)))[0]
    mixed = Q @ rng.standard_normal((3, 3))  # same span, different basis
    assert subspace_relation(Q, mixed, pol) == "equal"
