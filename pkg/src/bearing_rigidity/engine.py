"""Rigidity matrices, kernel structure, and rigidity verdicts.

Two matrix representations are built from a framework. The per-space form
keeps each space family in its native coordinates: position-only frameworks
get d rows per edge and d columns per agent; heading frameworks add one
heading column per agent; full-pose frameworks get 3 rows per edge and 6
columns per agent. The unified form embeds every agent in the common 6-dof
pose coordinates (3 position + 3 rotation columns per agent, 3 rows per
edge) and masks non-controllable rotation directions through each agent's
rotation-input matrix, leaving structurally zero columns. Heterogeneous
frameworks only exist in the unified form.

Both forms satisfy the same contract: the matrix maps admissible state
variation rates to bearing rates. Variations that never change any bearing
are *trivial*: rigid translations of the whole framework, uniform scaling
toward a point, and coordinated rotations (all agents turning about a common
axis while their positions swing along). A framework is infinitesimally
bearing rigid (IBR) when the kernel of its rigidity matrix is exactly the
kernel of the complete-graph matrix on the same agents, i.e. no flex beyond
what no sensing topology could ever detect; otherwise it is infinitesimally
bearing flexible (IBF). For non-degenerate homogeneous frameworks IBR is
equivalent to the rank hitting c*n - c - 1, where c counts controllable
degrees of freedom per agent.

Verdict semantics: infinitesimal bearing rigidity coincides with global
bearing rigidity, and both imply (local) bearing rigidity; in position-only
spaces all three notions coincide. These implications are reported, never
recomputed. One coupling note worth keeping in mind: pairing stacked
positions with unit heading rates is NOT a trivial variation; heading motion
swings measured bearings unless the positions co-rotate about the shared
axis, which is exactly what the coordinated-rotation generator encodes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateConfigurationError, NumericalError,
                     ValidationError)
from .graphs import complete_graph
from .linalg import (TolerancePolicy, orthogonal_projector,
                     orthonormal_columns, rank_and_nullspace, rotation_exp,
                     skew, subspace_relation)
from .spaces import (Framework, MetricSpace, bearing_rigidity_function,
                     bearing_stack_raw, is_non_degenerate, measurement_edges)

LABEL_VOCABULARY = frozenset({
    "translation_x", "translation_y", "translation_z", "scaling",
    "coord_rotation_x", "coord_rotation_y", "coord_rotation_z",
    "virtual", "unlabeled",
})

IBR = "IBR"
IBF = "IBF"


@dataclass(frozen=True)
class ColumnBlock:
    """Column ranges owned by one agent: translational and, when present,
    rotational (half-open index pairs)."""

    agent: int
    translation: tuple[int, int]
    rotation: tuple[int, int] | None = None


@dataclass(frozen=True)
class RigidityMatrix:
    """A rigidity matrix with its row/column block structure."""

    matrix: np.ndarray
    representation: str
    row_blocks: tuple[tuple[int, int], ...]
    col_blocks: tuple[ColumnBlock, ...]

    def __post_init__(self) -> None:
        M = np.asarray(self.matrix, dtype=float)
        if self.representation not in ("per_space", "unified"):
            raise ValidationError(f"unknown representation {self.representation!r}")
        if self.row_blocks and self.row_blocks[-1][1] != M.shape[0]:
            raise ValidationError("row blocks do not tile the matrix")
        M = M.copy()
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace with an orthonormal basis plus labeled raw generators.

    Labels describe the generator columns (one tag each); the basis columns
    are their orthonormalized span and need not align with individual tags.
    """

    ambient_dim: int
    basis: np.ndarray
    labels: tuple[str, ...]
    generators: np.ndarray

    def __post_init__(self) -> None:
        B = np.asarray(self.basis, dtype=float)
        G = np.asarray(self.generators, dtype=float)
        if B.shape[0] != self.ambient_dim or G.shape[0] != self.ambient_dim:
            raise ValidationError("basis/generators do not match the ambient dimension")
        if G.shape[1] != len(self.labels):
            raise ValidationError("one label per generator column required")
        bad = set(self.labels) - LABEL_VOCABULARY
        if bad:
            raise ValidationError(f"unknown labels {sorted(bad)}")
        if B.shape[1] and np.linalg.norm(B.T @ B - np.eye(B.shape[1])) > 1e-9:
            raise ValidationError("basis columns are not orthonormal")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True)
class RigidityVerdict:
    """Rank/kernel summary and the rigidity classification of a framework."""

    rank: int
    nullity: int
    expected_rank: int | None
    kernel_equal_to_complete: bool
    classification: str
    degenerate: bool
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class FDCheckResult:
    """Largest relative mismatch between the matrix action and finite
    differences of the bearing function."""

    max_rel_error: float
    step: float
    trials: int
    representation: str


@dataclass(frozen=True)
class HeteroKernelReport:
    """Kernel decomposition of a heterogeneous framework."""

    verdict: RigidityVerdict
    trivial: SubspaceBasis
    virtual: SubspaceBasis
    zero_columns: tuple[int, ...]


def _edge_geometry(fw: Framework):
    """Per measurement edge: (0-based head, 0-based tail, 1/dist, unit diff)."""
    P = fw.positions()
    out = []
    for i, j in measurement_edges(fw):
        diff = P[j - 1] - P[i - 1]
        dist = np.linalg.norm(diff)
        out.append((i - 1, j - 1, 1.0 / dist, diff / dist))
    return out


def _padded_planar_projector(pbar3: np.ndarray) -> np.ndarray:
    P = np.zeros((3, 3))
    P[:2, :2] = orthogonal_projector(pbar3[:2])
    return P


def _uses_planar_projector(fw: Framework) -> bool:
    return (fw.is_homogeneous and fw.space.kind in ("rd", "rdxs1")
            and fw.space.d == 2)


def rigidity_matrix(fw: Framework) -> RigidityMatrix:
    """Per-space rigidity matrix of a homogeneous framework.

    Shapes: position-only d*m x d*n; heading d*m x (d+1)*n with all heading
    columns grouped after the position columns; full-pose 3*m x 6*n with the
    rotational half after the translational half. Row block k belongs to the
    k-th canonical measurement edge. Heterogeneous frameworks have no
    per-space form; use unified_rigidity_matrix.
    """
    if not fw.is_homogeneous:
        raise ValidationError("per-space form needs a homogeneous framework; "
                              "use unified_rigidity_matrix")
    sp = fw.space
    n = fw.n
    geo = _edge_geometry(fw)
    m = len(geo)
    d = 3 if sp.kind == "se3" else sp.d

    if sp.kind == "rd":
        B = np.zeros((d * m, d * n))
        for k, (i, j, dij, pbar3) in enumerate(geo):
            blk = dij * orthogonal_projector(pbar3[:d])
            r = slice(d * k, d * k + d)
            B[r, d * i:d * i + d] = -blk
            B[r, d * j:d * j + d] = blk
        cols = tuple(ColumnBlock(a + 1, (d * a, d * a + d)) for a in range(n))
    elif sp.kind == "rdxs1":
        ax = np.array(sp.axis)
        B = np.zeros((d * m, (d + 1) * n))
        for k, (i, j, dij, pbar3) in enumerate(geo):
            R = fw.rotation_of(i + 1)
            if d == 2:
                blk = (dij * R.T @ _padded_planar_projector(pbar3))[:2, :2]
            else:
                blk = dij * R.T @ orthogonal_projector(pbar3)
            rc = (R.T @ skew(pbar3) @ ax)[:d]
            r = slice(d * k, d * k + d)
            B[r, d * i:d * i + d] = -blk
            B[r, d * j:d * j + d] = blk
            B[r, d * n + i] = rc
        cols = tuple(ColumnBlock(a + 1, (d * a, d * a + d), (d * n + a, d * n + a + 1))
                     for a in range(n))
    else:
        B = np.zeros((3 * m, 6 * n))
        for k, (i, j, dij, pbar3) in enumerate(geo):
            R = fw.rotation_of(i + 1)
            blk = dij * R.T @ orthogonal_projector(pbar3)
            r = slice(3 * k, 3 * k + 3)
            B[r, 3 * i:3 * i + 3] = -blk
            B[r, 3 * j:3 * j + 3] = blk
            B[r, 3 * n + 3 * i:3 * n + 3 * i + 3] = R.T @ skew(pbar3)
        cols = tuple(ColumnBlock(a + 1, (3 * a, 3 * a + 3), (3 * n + 3 * a, 3 * n + 3 * a + 3))
                     for a in range(n))

    rows = tuple((d * k, d * k + d) for k in range(m))
    return RigidityMatrix(B, "per_space", rows, cols)


def unified_rigidity_matrix(fw: Framework) -> RigidityMatrix:
    """Unified 3m x 6n rigidity matrix in common pose coordinates.

    Every agent owns 3 position and 3 rotation columns; rotation variations
    pass through the agent's rotation-input matrix, so non-controllable
    rotation directions give identically zero columns. Purely planar
    homogeneous frameworks use the zero-padded planar projector (their
    out-of-plane position columns are then structurally zero as well); every
    other framework, heterogeneous ones included, uses the full 3D projector.
    """
    n = fw.n
    geo = _edge_geometry(fw)
    m = len(geo)
    planar = _uses_planar_projector(fw)
    B = np.zeros((3 * m, 6 * n))
    for k, (i, j, dij, pbar3) in enumerate(geo):
        R = fw.rotation_of(i + 1)
        V = fw.space_of(i + 1).rotation_input()
        proj = _padded_planar_projector(pbar3) if planar else orthogonal_projector(pbar3)
        blk = dij * R.T @ proj
        r = slice(3 * k, 3 * k + 3)
        B[r, 3 * i:3 * i + 3] = -blk
        B[r, 3 * j:3 * j + 3] = blk
        B[r, 3 * n + 3 * i:3 * n + 3 * i + 3] = R.T @ skew(pbar3) @ V
    rows = tuple((3 * k, 3 * k + 3) for k in range(m))
    cols = tuple(ColumnBlock(a + 1, (3 * a, 3 * a + 3), (3 * n + 3 * a, 3 * n + 3 * a + 3))
                 for a in range(n))
    return RigidityMatrix(B, "unified", rows, cols)


def _apply_variation(fw: Framework, representation: str, delta: np.ndarray,
                     h: float):
    """Raw (positions, rotations) after moving the state by h * delta.

    Position increments are additive; heading increments add to the angle;
    full-rotation increments left-multiply by the exponential of the skew of
    the angular velocity. Unified rotational increments are first mapped
    through each agent's rotation-input matrix.
    """
    n = fw.n
    P = fw.positions().copy()
    R = fw.rotations()
    if representation == "unified":
        dp = delta[:3 * n].reshape(n, 3)
        dw = delta[3 * n:].reshape(n, 3)
        P += h * dp
        R = [rotation_exp(h * (fw.space_of(a + 1).rotation_input() @ dw[a])) @ R[a]
             for a in range(n)]
        return P, R
    sp = fw.space
    if sp.kind == "rd":
        P[:, :sp.d] += h * delta.reshape(n, sp.d)
        return P, R
    if sp.kind == "rdxs1":
        d = sp.d
        P[:, :d] += h * delta[:d * n].reshape(n, d)
        da = delta[d * n:]
        ax = np.array(sp.axis)
        R = [rotation_exp(h * da[a] * ax) @ R[a] for a in range(n)]
        return P, R
    dp = delta[:3 * n].reshape(n, 3)
    dw = delta[3 * n:].reshape(n, 3)
    P += h * dp
    R = [rotation_exp(h * dw[a]) @ R[a] for a in range(n)]
    return P, R


def _bearing_rows(fw: Framework, representation: str, stack: np.ndarray) -> np.ndarray:
    """Flatten an (m, 3) raw stack to the representation's row layout."""
    if representation == "per_space" and fw.space.kind != "se3" and fw.space.d == 2:
        return stack[:, :2].reshape(-1)
    return stack.reshape(-1)


def fd_jacobian_check(fw: Framework, pol: TolerancePolicy | None = None,
                      trials: int = 20, step: float | None = None,
                      seed: int = 0, representation: str = "auto",
                      ) -> FDCheckResult:
    """Probe the rigidity matrix against finite differences of the bearings.

    Random unit variation vectors are drawn over the representation's
    controllable coordinates (the out-of-plane position coordinate of purely
    planar frameworks is frozen; masked rotation coordinates are harmless
    because the rotation-input map zeroes their effect on both sides). For
    each, compares matrix action against (b(state + h*delta) - b(state)) / h
    and reports the largest relative mismatch. Trivial variations give zero
    on both sides.
    """
    pol = pol or TolerancePolicy()
    h = pol.fd_step if step is None else float(step)
    if representation == "auto":
        representation = "per_space" if fw.is_homogeneous else "unified"
    if representation == "per_space":
        rm = rigidity_matrix(fw)
    elif representation == "unified":
        rm = unified_rigidity_matrix(fw)
    else:
        raise ValidationError(f"unknown representation {representation!r}")
    B = rm.matrix
    edges0 = [(i - 1, j - 1) for i, j in measurement_edges(fw)]
    base = bearing_stack_raw(edges0, fw.positions(), fw.rotations())
    b0 = _bearing_rows(fw, representation, base)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(max(1, trials)):
        delta = rng.standard_normal(B.shape[1])
        if representation == "unified" and _uses_planar_projector(fw):
            delta[2:3 * fw.n:3] = 0.0
        delta /= np.linalg.norm(delta)
        P2, R2 = _apply_variation(fw, representation, delta, h)
        b1 = _bearing_rows(fw, representation, bearing_stack_raw(edges0, P2, R2))
        fd = (b1 - b0) / h
        Bd = B @ delta
        err = np.linalg.norm(Bd - fd) / max(1.0, np.linalg.norm(Bd))
        worst = max(worst, float(err))
    return FDCheckResult(max_rel_error=worst, step=h, trials=trials,
                         representation=representation)


def _axis_label(axis: np.ndarray) -> str:
    names = ("coord_rotation_x", "coord_rotation_y", "coord_rotation_z")
    for hh, name in enumerate(names):
        e = np.zeros(3)
        e[hh] = 1.0
        if min(np.linalg.norm(axis - e), np.linalg.norm(axis + e)) < 1e-9:
            return name
    return "unlabeled"


def trivial_variation_basis(fw: Framework, pol: TolerancePolicy | None = None,
                            ) -> SubspaceBasis:
    """Basis of the always-uninformative variations, in per-space coordinates.

    Spanned by rigid translations, uniform scaling of the positions, and
    (when orientations exist) coordinated rotation about the shared axis, or
    about all three axes for full poses. Requires a homogeneous framework in
    a non-degenerate configuration; the closed-form generators below are only
    a kernel basis under those assumptions.
    """
    pol = pol or TolerancePolicy()
    if not fw.is_homogeneous:
        raise ValidationError("trivial basis formulas apply to homogeneous frameworks")
    report = is_non_degenerate(fw, pol)
    if not report:
        raise DegenerateConfigurationError(report.detail)
    sp = fw.space
    n = fw.n
    P = fw.positions()
    d = 3 if sp.kind == "se3" else sp.d
    axis_names = ("translation_x", "translation_y", "translation_z")

    gens: list[np.ndarray] = []
    labels: list[str] = []
    if sp.kind == "rd":
        for hh in range(d):
            e = np.zeros(d)
            e[hh] = 1.0
            gens.append(np.tile(e, n))
            labels.append(axis_names[hh])
        gens.append(P[:, :d].reshape(-1))
        labels.append("scaling")
    elif sp.kind == "rdxs1":
        zeros_a = np.zeros(n)
        for hh in range(d):
            e = np.zeros(d)
            e[hh] = 1.0
            gens.append(np.concatenate([np.tile(e, n), zeros_a]))
            labels.append(axis_names[hh])
        gens.append(np.concatenate([P[:, :d].reshape(-1), zeros_a]))
        labels.append("scaling")
        ax = np.array(sp.axis)
        swing = np.array([(skew(ax) @ P[a])[:d] for a in range(n)]).reshape(-1)
        gens.append(np.concatenate([swing, np.ones(n)]))
        labels.append(_axis_label(ax))
    else:
        zeros_r = np.zeros(3 * n)
        for hh in range(3):
            e = np.zeros(3)
            e[hh] = 1.0
            gens.append(np.concatenate([np.tile(e, n), zeros_r]))
            labels.append(axis_names[hh])
        gens.append(np.concatenate([P.reshape(-1), zeros_r]))
        labels.append("scaling")
        for hh, name in enumerate(("coord_rotation_x", "coord_rotation_y",
                                   "coord_rotation_z")):
            e = np.zeros(3)
            e[hh] = 1.0
            swing = np.array([skew(e) @ P[a] for a in range(n)]).reshape(-1)
            gens.append(np.concatenate([swing, np.tile(e, n)]))
            labels.append(name)

    G = np.column_stack(gens)
    basis = orthonormal_columns(G, pol)
    if basis.shape[1] != G.shape[1]:
        raise NumericalError("trivial generators degenerated; configuration too ill-conditioned")
    return SubspaceBasis(ambient_dim=G.shape[0], basis=basis,
                         labels=tuple(labels), generators=G)


def _matrix_for_verdict(fw: Framework) -> RigidityMatrix:
    return rigidity_matrix(fw) if fw.is_homogeneous else unified_rigidity_matrix(fw)


def _graph_vs_complete_kernels(fw: Framework, pol: TolerancePolicy):
    """(rank_g, nullspace_g, nullspace_complete) in a shared representation."""
    Bg = _matrix_for_verdict(fw)
    fwk = fw.with_graph(complete_graph(fw.graph))
    Bk = _matrix_for_verdict(fwk)
    rank_g, Ng = rank_and_nullspace(Bg.matrix, pol)
    _, Nk = rank_and_nullspace(Bk.matrix, pol)
    return rank_g, Ng, Nk


def kernel_inclusion_check(fw: Framework, pol: TolerancePolicy | None = None) -> str:
    """Relation between the complete-graph kernel and the framework kernel.

    Healthy outcomes are "equal" (rigid) or "A_subset_B" (the framework has
    extra flexes); anything else signals a numerical problem because removing
    edges can only grow the kernel.
    """
    pol = pol or TolerancePolicy()
    _, Ng, Nk = _graph_vs_complete_kernels(fw, pol)
    return subspace_relation(Nk, Ng, pol)


def ibr_verdict(fw: Framework, pol: TolerancePolicy | None = None) -> RigidityVerdict:
    """Classify a framework as IBR or IBF.

    The deciding test is kernel equality with the complete graph on the same
    agents. For non-degenerate homogeneous frameworks the rank test against
    c*n - c - 1 must agree with it, and a disagreement raises NumericalError
    rather than returning a verdict that contradicts itself. Degenerate
    configurations are classified by kernel equality alone and flagged.
    """
    pol = pol or TolerancePolicy()
    rank_g, Ng, Nk = _graph_vs_complete_kernels(fw, pol)
    rel = subspace_relation(Nk, Ng, pol)
    if rel not in ("equal", "A_subset_B"):
        raise NumericalError(
            f"complete-graph kernel not contained in framework kernel ({rel}); "
            "tolerances are inconsistent with this matrix")
    kernel_eq = rel == "equal"
    degenerate = not is_non_degenerate(fw, pol)
    notes: list[str] = []
    expected = None
    if fw.is_homogeneous:
        c = fw.space.c
        expected = c * fw.n - c - 1
        if degenerate:
            notes.append("degenerate configuration: kernel equality decides, "
                         "rank target not applied")
        else:
            rank_says_rigid = rank_g == expected
            if rank_says_rigid != kernel_eq:
                raise NumericalError(
                    f"rank test (rank {rank_g} vs target {expected}) disagrees with "
                    f"kernel equality ({kernel_eq}); inconsistent tolerances")
    else:
        notes.append("heterogeneous framework: kernel equality decides, "
                     "no single rank target exists")
    classification = IBR if kernel_eq else IBF
    if classification == IBR:
        notes.append("infinitesimal rigidity implies global bearing rigidity, "
                     "which implies bearing rigidity")
    return RigidityVerdict(rank=rank_g, nullity=Ng.shape[1], expected_rank=expected,
                           kernel_equal_to_complete=kernel_eq,
                           classification=classification, degenerate=degenerate,
                           notes=tuple(notes))


def _require_comparable(f1: Framework, f2: Framework) -> None:
    if f1.graph != f2.graph:
        raise ValidationError("frameworks have different sensing graphs")
    if f1.space != f2.space:
        raise ValidationError("frameworks have different state spaces")


def bearing_equivalent(f1: Framework, f2: Framework,
                       pol: TolerancePolicy | None = None) -> bool:
    """Do the two frameworks measure identical bearings on their edges?"""
    pol = pol or TolerancePolicy()
    _require_comparable(f1, f2)
    b1 = bearing_rigidity_function(f1).bearings
    b2 = bearing_rigidity_function(f2).bearings
    return bool(np.max(np.abs(b1 - b2), initial=0.0) < pol.subspace_tol)


def bearing_congruent(f1: Framework, f2: Framework,
                      pol: TolerancePolicy | None = None) -> bool:
    """Do the two frameworks agree on every pairwise bearing, not just the
    sensed ones? Checked over the complete graph of the same kind."""
    pol = pol or TolerancePolicy()
    _require_comparable(f1, f2)
    K = complete_graph(f1.graph)
    return bearing_equivalent(f1.with_graph(K), f2.with_graph(K), pol)


def _unified_candidates(fw: Framework) -> tuple[list[np.ndarray], list[str]]:
    """Labeled trivial-variation candidates in unified coordinates."""
    n = fw.n
    P = fw.positions()
    zeros_r = np.zeros(3 * n)
    gens: list[np.ndarray] = []
    labels: list[str] = []
    for hh, name in enumerate(("translation_x", "translation_y", "translation_z")):
        e = np.zeros(3)
        e[hh] = 1.0
        gens.append(np.concatenate([np.tile(e, n), zeros_r]))
        labels.append(name)
    gens.append(np.concatenate([P.reshape(-1), zeros_r]))
    labels.append("scaling")
    for hh, name in enumerate(("coord_rotation_x", "coord_rotation_y",
                               "coord_rotation_z")):
        e = np.zeros(3)
        e[hh] = 1.0
        swing = np.array([skew(e) @ P[a] for a in range(n)]).reshape(-1)
        gens.append(np.concatenate([swing, np.tile(e, n)]))
        labels.append(name)
    return gens, labels


def hetero_kernel_analysis(fw: Framework, pol: TolerancePolicy | None = None,
                           ) -> HeteroKernelReport:
    """Kernel decomposition of a heterogeneous framework's unified matrix.

    Splits the kernel into the virtual part (coordinate directions of the
    structurally zero columns, i.e. rotation directions no agent can use)
    and the trivial part (the kernel's intersection with the complement of
    the virtual part). The trivial part is labeled by matching candidate
    generators: translations, uniform scaling, and coordinated rotations
    about the coordinate axes; a candidate counts as present when its
    residual against the trivial part stays below subspace_tol. Directions
    matched by no candidate are labeled "unlabeled".
    """
    pol = pol or TolerancePolicy()
    if fw.is_homogeneous:
        raise ValidationError("kernel decomposition targets heterogeneous frameworks; "
                              "homogeneous ones have trivial_variation_basis")
    rm = unified_rigidity_matrix(fw)
    B = rm.matrix
    ambient = B.shape[1]
    rank_g, N = rank_and_nullspace(B, pol)
    zero_cols = tuple(int(j) for j in range(ambient) if not B[:, j].any())
    Qv = np.zeros((ambient, len(zero_cols)))
    for idx, j in enumerate(zero_cols):
        Qv[j, idx] = 1.0
    # structural zero columns must already be kernel directions
    if zero_cols and np.linalg.norm(B @ Qv) != 0.0:
        raise NumericalError("zero-column bookkeeping is inconsistent")
    trimmed = N.copy()
    trimmed[list(zero_cols), :] = 0.0
    Qt = orthonormal_columns(trimmed, pol)

    gens, names = _unified_candidates(fw)
    matched: list[np.ndarray] = []
    labels: list[str] = []
    for g, name in zip(gens, names):
        resid = g - Qt @ (Qt.T @ g)
        if np.linalg.norm(resid) / np.linalg.norm(g) < pol.subspace_tol:
            matched.append(g)
            labels.append(name)
    if matched:
        Qm = orthonormal_columns(np.column_stack(matched), pol)
        leftover = Qt - Qm @ (Qm.T @ Qt)
    else:
        leftover = Qt
    if leftover.size:
        # absolute cutoff: Qt columns are unit, so tiny singular values here
        # mean the matched generators already cover the direction
        U, sv, _ = np.linalg.svd(leftover, full_matrices=False)
        extra = U[:, sv > pol.subspace_tol]
    else:
        extra = np.zeros((ambient, 0))
    for eidx in range(extra.shape[1]):
        matched.append(extra[:, eidx])
        labels.append("unlabeled")
    gen_mat = (np.column_stack(matched) if matched
               else np.zeros((ambient, 0)))
    trivial = SubspaceBasis(ambient_dim=ambient, basis=Qt,
                            labels=tuple(labels), generators=gen_mat)
    virtual = SubspaceBasis(ambient_dim=ambient, basis=Qv,
                            labels=("virtual",) * len(zero_cols), generators=Qv)
    verdict = ibr_verdict(fw, pol)
    return HeteroKernelReport(verdict=verdict, trivial=trivial, virtual=virtual,
                              zero_columns=zero_cols)


def degenerate_trivial_dim(space: MetricSpace, n: int,
                           axis_aligned_with_line: bool = False) -> int:
    """Kernel dimension of the complete-graph matrix for collinear agents.

    Closed forms: position-only n + d - 1; heading spaces n + d, except the
    3D case with the heading axis along the line of agents, which gives
    2n + d - 1; full poses 2n + 4. The alignment flag only applies to 3D
    heading spaces (the planar heading axis can never lie in the plane).
    """
    if not isinstance(space, MetricSpace):
        raise ValidationError("space must be a MetricSpace")
    if n < 3:
        raise ValidationError("need at least 3 agents")
    if space.kind == "rd":
        if axis_aligned_with_line:
            raise ValidationError("position-only spaces have no heading axis")
        return n + space.d - 1
    if space.kind == "rdxs1":
        if space.d == 2:
            if axis_aligned_with_line:
                raise ValidationError("planar heading axis cannot lie along the agents")
            return n + 2
        return (2 * n + space.d - 1) if axis_aligned_with_line else (n + space.d)
    if axis_aligned_with_line:
        raise ValidationError("full-pose spaces need no alignment flag")
    return 2 * n + 4


def reduced_rank_oracle(positions: np.ndarray, edges, d: int | None = None,
                        pol: TolerancePolicy | None = None) -> int:
    """Rank of a position-only rigidity matrix by an independent construction.

    Builds, per edge, a basis of the directions perpendicular to the edge (a
    single rotated difference vector in the plane, two orthonormal
    complements in 3-space) and stacks +-rows in the endpoint columns. The
    row span per edge equals that of the projector block, so the rank
    matches the assembled matrix, with no projectors, scalings, or incidence
    products involved. Useful as a cross-check for position-only verdicts.
    """
    pol = pol or TolerancePolicy()
    P = np.asarray(positions, dtype=float)
    if P.ndim != 2 or P.shape[1] not in (2, 3):
        raise ValidationError("positions must be (n, 2) or (n, 3)")
    if d is None:
        d = P.shape[1]
    if d == 2 and P.shape[1] == 3:
        P = P[:, :2]
    n = P.shape[0]
    rows = []
    for (i, j) in edges:
        i0, j0 = i - 1, j - 1
        diff = P[j0] - P[i0]
        if d == 2:
            perps = [np.array([diff[1], -diff[0]])]
        else:
            # two orthonormal vectors spanning the complement of diff
            _, _, Vh = np.linalg.svd(diff.reshape(1, 3))
            perps = [Vh[1], Vh[2]]
        for v in perps:
            row = np.zeros(d * n)
            row[d * i0:d * i0 + d] = -v
            row[d * j0:d * j0 + d] = v
            rows.append(row)
    rank, _ = rank_and_nullspace(np.array(rows), pol)
    return rank
