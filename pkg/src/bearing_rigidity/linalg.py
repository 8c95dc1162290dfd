"""Numeric kernel: tolerance policy, small geometric operators, rank and
subspace computations.

Every rank decision in the package funnels through rank_and_nullspace so that
a single threshold convention applies everywhere: a singular value counts
toward the rank when it exceeds rtol * sigma_max. The default rtol adapts to
the matrix shape (1e-10 * max(rows, cols)); an explicit policy value overrides
it for all shapes.

Subspaces are always handled through orthonormal column bases. Containment of
span(A) in span(B) is decided by the Frobenius residual of A's basis after
projecting out B: || (I - Q_B Q_B^T) Q_A ||_F < subspace_tol.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError

#: Named tolerance presets selectable via the BRL_TOLERANCE_PROFILE env var.
TOLERANCE_PROFILES: dict[str, "TolerancePolicy"]

AXIS_UNIT_TOL = 1e-8


@dataclass(frozen=True)
class TolerancePolicy:
    """Numeric thresholds used across the package.

    rank_rtol None means "adaptive": 1e-10 * max(rows, cols) per matrix.
    """

    rank_rtol: float | None = None
    subspace_tol: float = 1e-8
    fd_step: float = 1e-6

    def __post_init__(self) -> None:
        if self.rank_rtol is not None and not self.rank_rtol > 0:
            raise ValidationError("rank_rtol must be positive")
        if not self.subspace_tol > 0:
            raise ValidationError("subspace_tol must be positive")
        if not self.fd_step > 0:
            raise ValidationError("fd_step must be positive")

    def effective_rank_rtol(self, shape: tuple[int, int]) -> float:
        if self.rank_rtol is not None:
            return self.rank_rtol
        return 1e-10 * max(shape)


TOLERANCE_PROFILES = {
    "default": TolerancePolicy(),
    "strict": TolerancePolicy(rank_rtol=1e-12, subspace_tol=1e-10, fd_step=1e-7),
    "relaxed": TolerancePolicy(rank_rtol=1e-8, subspace_tol=1e-6, fd_step=1e-5),
}


def orthogonal_projector(x: np.ndarray) -> np.ndarray:
    """I - x x^T / ||x||^2, the projector onto the complement of span{x}.

    Idempotent, symmetric, annihilates x. Raises on a (numerically) zero
    vector, which upstream means two agents coincide.
    """
    x = np.asarray(x, dtype=float)
    nrm = np.linalg.norm(x)
    if nrm < 1e-12:
        raise ValidationError("projector of a zero vector is undefined")
    u = x / nrm
    return np.eye(x.shape[0]) - np.outer(u, u)


def skew(x: np.ndarray) -> np.ndarray:
    """3x3 skew-symmetric matrix with skew(x) @ y == cross(x, y)."""
    x = np.asarray(x, dtype=float)
    return np.array([
        [0.0, -x[2], x[1]],
        [x[2], 0.0, -x[0]],
        [-x[1], x[0], 0.0],
    ])


def rotation_axis_angle(axis: np.ndarray, angle: float) -> np.ndarray:
    """Rotation by `angle` about a unit `axis` (Rodrigues form).

    A zero axis is legal and returns the identity; any other non-unit axis is
    rejected rather than silently normalized.
    """
    axis = np.asarray(axis, dtype=float)
    nrm = np.linalg.norm(axis)
    if nrm == 0.0:
        return np.eye(3)
    if abs(nrm - 1.0) > AXIS_UNIT_TOL:
        raise ValidationError(f"rotation axis must be unit or zero, norm {nrm:.3e}")
    K = skew(axis)
    return np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * (K @ K)


def rotation_exp(w: np.ndarray) -> np.ndarray:
    """Rotation exp(skew(w)): angle ||w|| about w. Identity for w = 0."""
    w = np.asarray(w, dtype=float)
    theta = np.linalg.norm(w)
    if theta == 0.0:
        return np.eye(3)
    return rotation_axis_angle(w / theta, theta)


def planar_rotation(angle: float) -> np.ndarray:
    """2x2 counter-clockwise rotation."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniform random element of SO(3) via a normalized quaternion."""
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
        [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
        [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
    ])


def rank_and_nullspace(M: np.ndarray, pol: TolerancePolicy | None = None,
                       ) -> tuple[int, np.ndarray]:
    """Numerical rank and an orthonormal kernel basis, via SVD.

    Returns (rank, N) where N has shape (cols, cols - rank) and orthonormal
    columns spanning the kernel. rank + kernel columns always equals the
    column count.
    """
    pol = pol or TolerancePolicy()
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise ValidationError(f"expected a matrix, got ndim {M.ndim}")
    if not np.all(np.isfinite(M)):
        raise NumericalError("matrix contains NaN or Inf")
    if M.size == 0:
        return 0, np.eye(M.shape[1])
    _, s, Vh = np.linalg.svd(M, full_matrices=True)
    thresh = pol.effective_rank_rtol(M.shape) * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > thresh))
    return rank, Vh[rank:].T.copy()


def orthonormal_columns(A: np.ndarray, pol: TolerancePolicy | None = None) -> np.ndarray:
    """Orthonormal basis for the column span of A (possibly rank deficient)."""
    pol = pol or TolerancePolicy()
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValidationError("expected a matrix of basis columns")
    if A.shape[1] == 0:
        return A.reshape(A.shape[0], 0)
    if not np.all(np.isfinite(A)):
        raise NumericalError("basis matrix contains NaN or Inf")
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    thresh = pol.effective_rank_rtol(A.shape) * (s[0] if s.size else 0.0)
    r = int(np.sum(s > thresh))
    return U[:, :r].copy()


def subspace_contains(B: np.ndarray, A: np.ndarray,
                      pol: TolerancePolicy | None = None) -> bool:
    """Is span(A) contained in span(B)? Inputs need not be orthonormal."""
    pol = pol or TolerancePolicy()
    QA = orthonormal_columns(A, pol)
    QB = orthonormal_columns(B, pol)
    if QA.shape[0] != QB.shape[0]:
        raise ValidationError("subspaces live in different ambient dimensions")
    if QA.shape[1] == 0:
        return True
    resid = QA - QB @ (QB.T @ QA)
    return bool(np.linalg.norm(resid) < pol.subspace_tol)


def subspace_relation(A: np.ndarray, B: np.ndarray,
                      pol: TolerancePolicy | None = None) -> str:
    """Relation between span(A) and span(B).

    One of "equal", "A_subset_B", "B_subset_A", "incomparable".
    """
    pol = pol or TolerancePolicy()
    ab = subspace_contains(B, A, pol)
    ba = subspace_contains(A, B, pol)
    if ab and ba:
        return "equal"
    if ab:
        return "A_subset_B"
    if ba:
        return "B_subset_A"
    return "incomparable"
