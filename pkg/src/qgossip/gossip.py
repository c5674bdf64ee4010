"""Quasi-local gossip dynamics on a network of quantum subsystems.

A single gossip interaction on edge (j, k) applies the channel

    E_jk(rho) = (1 - alpha) rho + alpha U_jk rho U_jk^dagger,

with swap unitary ``U_jk`` and mixing parameter ``alpha`` in (0, 1); its
Kraus form is ``{sqrt(1-alpha) I, sqrt(alpha) U_jk}``, unital and self-adjoint
as a map. Edge schedules: one random edge per step (weights q), a fixed
cyclic order, or the synchronous/expected map
``E(rho) = sum q_jk E_jk(rho)``. On a connected graph every schedule drives
rho to the permutation twirl of the initial state; fixed points of the
expected map are exactly the operators commuting with every edge swap.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .errors import (CertificateError, ConsistencyError, ResourceLimitError,
                     ValidationError)
from .linalg import (MAX_SUPEROP_DIM, NetworkShape, as_operator,
                     frobenius_distance, kron, require_hermitian, unvectorize,
                     vectorize)
from .rng import draw_index, make_rng, trial_rng
from .states import (DensityOperator, KrausChannel, Observable, Permutation,
                     basis_index_map, conjugate_by_basis_map, dual_apply,
                     is_permutation_invariant, lift_local,
                     local_hermitian_basis, site_average, twirl_matrix,
                     twirl_observable)

STRATEGIES = ("random", "cyclic", "synchronous", "expected")
MAX_CYCLE_KRAUS = 2 ** 12
CONSERVATION_TOL = 1e-10


# ---------------------------------------------------------------------------
# interaction graphs and run configuration
# ---------------------------------------------------------------------------

class InteractionGraph:
    """Undirected interaction graph on sites 1..m with positive edge weights.

    Edges are stored as sorted (j, k) pairs without duplicates; weights
    default to uniform and must sum to one within 1e-12. A graph may be
    disconnected (evolution then only symmetrizes within components) but
    consumers that need global consensus warn or reject accordingly.
    """

    __slots__ = ("shape", "edges", "weights")

    def __init__(self, shape: NetworkShape, edges: Sequence[Sequence[int]],
                 weights: Sequence[float] | None = None):
        norm_edges = []
        seen = set()
        for e in edges:
            pair = tuple(sorted(int(v) for v in e))
            if len(pair) != 2 or pair[0] == pair[1]:
                raise ValidationError(f"edge {e!r} must join two distinct sites")
            if not (1 <= pair[0] < pair[1] <= shape.m):
                raise ValidationError(f"edge {e!r} outside sites 1..{shape.m}")
            if pair in seen:
                raise ValidationError(f"duplicate edge {pair}")
            seen.add(pair)
            norm_edges.append(pair)
        if weights is None:
            w = [1.0 / len(norm_edges)] * len(norm_edges) if norm_edges else []
        else:
            w = [float(x) for x in weights]
            if len(w) != len(norm_edges):
                raise ValidationError(
                    f"{len(w)} weights for {len(norm_edges)} edges")
            if any(x <= 0.0 for x in w):
                raise ValidationError("edge weights must be positive")
            if norm_edges and abs(sum(w) - 1.0) > 1e-12:
                raise ValidationError(f"edge weights sum to {sum(w)!r}, not 1")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "edges", tuple(norm_edges))
        object.__setattr__(self, "weights", tuple(w))

    def __setattr__(self, *_):
        raise AttributeError("InteractionGraph is immutable")

    def is_connected(self) -> bool:
        m = self.shape.m
        if m == 1:
            return True
        adjacency = {i: set() for i in range(1, m + 1)}
        for j, k in self.edges:
            adjacency[j].add(k)
            adjacency[k].add(j)
        seen = {1}
        frontier = [1]
        while frontier:
            node = frontier.pop()
            for nb in adjacency[node]:
                if nb not in seen:
                    seen.add(nb)
                    frontier.append(nb)
        return len(seen) == m


@dataclass(frozen=True)
class GossipConfig:
    """Evolution parameters.

    ``strategy`` is one of "random", "cyclic", "synchronous", "expected"
    (the last two are the same map; the label is kept for records).
    ``cycle_order`` lists 0-based indices into the graph's edge tuple and
    must cover every edge at least once; it defaults to the natural order.
    ``stop_gap``, when set, ends the run early once the recorded ssc gap
    falls below it.
    """

    alpha: float
    strategy: str
    steps: int
    seed: int | None = None
    cycle_order: tuple[int, ...] | None = None
    stop_gap: float | None = None

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError(f"alpha must lie strictly in (0, 1), got {self.alpha}")
        if self.strategy not in STRATEGIES:
            raise ValidationError(
                f"strategy {self.strategy!r} not in {STRATEGIES}")
        if not isinstance(self.steps, int) or self.steps < 0:
            raise ValidationError(f"steps must be a nonnegative integer, got {self.steps!r}")
        if self.strategy == "random" and self.seed is None:
            raise ValidationError("random strategy requires a seed")
        if self.cycle_order is not None and self.strategy != "cyclic":
            raise ValidationError("cycle_order is only meaningful for the cyclic strategy")

    def resolved_cycle_order(self, graph: InteractionGraph) -> tuple[int, ...]:
        order = self.cycle_order
        if order is None:
            order = tuple(range(len(graph.edges)))
        order = tuple(int(i) for i in order)
        if not order:
            raise ValidationError("cycle order must not be empty")
        if any(i < 0 or i >= len(graph.edges) for i in order):
            raise ValidationError("cycle order indexes a nonexistent edge")
        if set(order) != set(range(len(graph.edges))):
            raise ValidationError("cycle order must cover every edge at least once")
        return order


# ---------------------------------------------------------------------------
# channels
# ---------------------------------------------------------------------------

def _edge_basis_map(edge, shape: NetworkShape) -> np.ndarray:
    j, k = edge
    return basis_index_map(Permutation.transposition(shape.m, j, k), shape)


def gossip_channel(edge, alpha: float, shape: NetworkShape) -> KrausChannel:
    """Kraus form of one pairwise gossip interaction."""
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must lie strictly in (0, 1), got {alpha}")
    j, k = (int(v) for v in edge)
    if not (1 <= j <= shape.m and 1 <= k <= shape.m and j != k):
        raise ValidationError(f"edge ({j}, {k}) invalid for m={shape.m}")
    d = shape.total_dim
    u = np.zeros((d, d), dtype=np.complex128)
    bmap = _edge_basis_map((j, k), shape)
    u[bmap, np.arange(d)] = 1.0
    ops = [np.sqrt(1.0 - alpha) * np.eye(d, dtype=np.complex128),
           np.sqrt(alpha) * u]
    return KrausChannel(ops, shape)


def synchronous_channel(graph: InteractionGraph, alpha: float) -> KrausChannel:
    """Kraus form of the expected map ``sum_e q_e E_e``."""
    if not graph.edges:
        raise ValidationError("the synchronous map needs at least one edge")
    d = graph.shape.total_dim
    ops = [np.sqrt(1.0 - alpha) * np.eye(d, dtype=np.complex128)]
    for (edge, q) in zip(graph.edges, graph.weights):
        u = np.zeros((d, d), dtype=np.complex128)
        u[_edge_basis_map(edge, graph.shape), np.arange(d)] = 1.0
        ops.append(np.sqrt(alpha * q) * u)
    return KrausChannel(ops, graph.shape)


def cycle_map(graph: InteractionGraph, order: Sequence[int], alpha: float) -> KrausChannel:
    """Kraus form of one full cyclic sweep ``E_e_T o ... o E_e_1``.

    The operator-sum expansion has 2**T terms; sweeps longer than
    ``log2(MAX_CYCLE_KRAUS)`` edges must use superoperator composition
    instead (see :func:`cycle_superoperator`).
    """
    order = list(order)
    if not order:
        raise ValidationError("cycle order must not be empty")
    if set(order) != set(range(len(graph.edges))):
        raise ValidationError("cycle order must cover every edge at least once")
    if 2 ** len(order) > MAX_CYCLE_KRAUS:
        raise ResourceLimitError(
            f"cycle of length {len(order)} expands to 2**{len(order)} Kraus terms "
            f"(cap {MAX_CYCLE_KRAUS}); compose superoperators instead")
    shape = graph.shape
    d = shape.total_dim
    eye = np.eye(d, dtype=np.complex128)
    step_ops = []
    for idx in order:
        u = np.zeros((d, d), dtype=np.complex128)
        u[_edge_basis_map(graph.edges[idx], shape), np.arange(d)] = 1.0
        step_ops.append((np.sqrt(1.0 - alpha) * eye, np.sqrt(alpha) * u))
    ops = []
    for combo in itertools.product((0, 1), repeat=len(order)):
        acc = eye
        for choice, pair in zip(combo, step_ops):
            acc = pair[choice] @ acc
        ops.append(acc)
    return KrausChannel(ops, shape)


# ---------------------------------------------------------------------------
# trajectories
# ---------------------------------------------------------------------------

@dataclass
class TrajectoryRecord:
    """Per-step data for one gossip run.

    ``edges[t]`` is the interaction applied to move from step t to t+1
    (None for synchronous/expected steps, which touch all edges at once).
    Arrays hold one row per recorded time 0..T. ``s_expect`` tracks
    ``Tr[S rho_t]`` for ``S = (1/m) sum_i sigma^(i)``; it is conserved along
    every gossip trajectory and drift beyond 1e-10 raises ConsistencyError.
    """

    strategy: str
    alpha: float
    edges: list
    z: np.ndarray
    s_expect: np.ndarray
    ssc_gap: np.ndarray
    smc_defect: np.ndarray
    termination: str

    @property
    def steps(self) -> int:
        return len(self.edges)


def _local_expectations(rho_mat: np.ndarray, shape: NetworkShape,
                        sigma_mat: np.ndarray) -> np.ndarray:
    z = np.empty(shape.m)
    for i in shape.sites():
        red = linalg.partial_trace(rho_mat, shape, {i})
        z[i - 1] = np.einsum("ij,ji->", red, sigma_mat).real
    return z


def evolve(rho0: DensityOperator, graph: InteractionGraph, config: GossipConfig,
           sigma) -> tuple[TrajectoryRecord, DensityOperator]:
    """Run a gossip trajectory, recording consensus diagnostics at every step.

    Records, for t = 0..steps: the local expectations
    ``z_l(t) = Tr[sigma^(l) rho_t]``, the conserved site average
    ``Tr[S rho_t]``, the SSC gap, and the sigma-SMC defect. Single-edge
    steps use index relabelling rather than dense matrix products, so the
    cost per step is O(d^2).
    """
    from .consensus import ssc_gap as _ssc_gap  # local import avoids a cycle
    from .consensus import sym_projector

    shape = rho0.shape
    if graph.shape != shape:
        raise ValidationError("graph and state shapes differ")
    obs = sigma if isinstance(sigma, Observable) else Observable(as_operator(sigma))
    if obs.dim != shape.n:
        raise ValidationError("sigma dimension does not match the network")
    if shape.m > 1 and not graph.is_connected():
        warnings.warn("interaction graph is disconnected; consensus will be "
                      "blockwise only", stacklevel=2)
    if config.strategy in ("random", "cyclic") and shape.m > 1 and not graph.edges:
        raise ValidationError(f"{config.strategy} strategy needs at least one edge")

    proj_sym = sym_projector(obs, shape.m).matrix
    s_mat = site_average(obs.matrix, shape)

    bmaps = [_edge_basis_map(e, shape) for e in graph.edges]
    cum = np.cumsum(graph.weights) if graph.edges else np.array([])
    order = (config.resolved_cycle_order(graph)
             if config.strategy == "cyclic" and graph.edges else ())
    rng = make_rng(config.seed) if config.strategy == "random" else None
    alpha = config.alpha

    steps = config.steps
    z = np.empty((steps + 1, shape.m))
    s_expect = np.empty(steps + 1)
    gap_arr = np.empty(steps + 1)
    defect_arr = np.empty(steps + 1)
    edges_used: list = []

    mat = rho0.matrix.copy()

    def record(t: int):
        z[t] = _local_expectations(mat, shape, obs.matrix)
        s_expect[t] = np.einsum("ij,ji->", s_mat, mat).real
        gap_arr[t] = _ssc_gap(DensityOperator.trusted(mat, shape))
        defect_arr[t] = max(1.0 - np.einsum("ij,ji->", proj_sym, mat).real, 0.0)

    record(0)
    termination = "steps_exhausted"
    performed = 0
    for t in range(steps):
        if config.stop_gap is not None and gap_arr[t] < config.stop_gap:
            termination = f"converged_at_step_{t}"
            break
        if config.strategy in ("synchronous", "expected"):
            new = (1.0 - alpha) * mat
            for bmap, q in zip(bmaps, graph.weights):
                new += alpha * q * conjugate_by_basis_map(mat, bmap)
            mat = new
            edges_used.append(None)
        elif not graph.edges:
            edges_used.append(None)  # m=1 degenerate network: nothing to do
        else:
            if config.strategy == "random":
                idx = draw_index(rng, cum)
            else:
                idx = order[t % len(order)]
            mat = (1.0 - alpha) * mat + alpha * conjugate_by_basis_map(mat, bmaps[idx])
            edges_used.append(graph.edges[idx])
        performed += 1
        record(performed)
        if abs(s_expect[performed] - s_expect[performed - 1]) > CONSERVATION_TOL:
            raise ConsistencyError(
                f"conserved quantity drifted by "
                f"{abs(s_expect[performed] - s_expect[performed - 1]):.3e} at step {performed}")

    t_count = performed + 1
    final = DensityOperator.trusted(mat, shape)
    rec = TrajectoryRecord(
        strategy=config.strategy, alpha=alpha, edges=edges_used,
        z=z[:t_count], s_expect=s_expect[:t_count], ssc_gap=gap_arr[:t_count],
        smc_defect=defect_arr[:t_count], termination=termination)
    return rec, final


# ---------------------------------------------------------------------------
# superoperators and certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Superoperator:
    """Column-stacking matrix form of a channel: ``sum_k conj(A_k) (x) A_k``."""

    matrix: np.ndarray
    provenance: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply_to_matrix(self, x: np.ndarray) -> np.ndarray:
        return unvectorize(self.matrix @ vectorize(x))


def build_superoperator(channel: KrausChannel, provenance: dict | None = None) -> Superoperator:
    """Assemble the dense superoperator of a channel (dim cap applies)."""
    d = channel.shape.total_dim
    if d > MAX_SUPEROP_DIM:
        raise ResourceLimitError(
            f"superoperator work limited to total dimension {MAX_SUPEROP_DIM}, got {d}")
    acc = np.zeros((d * d, d * d), dtype=np.complex128)
    for a in channel.ops:
        acc += np.kron(a.conj(), a)
    return Superoperator(acc, dict(provenance or {}))


def synchronous_superoperator(graph: InteractionGraph, alpha: float) -> Superoperator:
    ch = synchronous_channel(graph, alpha)
    return build_superoperator(ch, {
        "kind": "synchronous", "alpha": alpha, "identity_weight": 1.0 - alpha,
        "edges": list(graph.edges), "weights": list(graph.weights)})


def cycle_superoperator(graph: InteractionGraph, order: Sequence[int],
                        alpha: float) -> Superoperator:
    """Superoperator of one cyclic sweep, composed edge by edge."""
    shape = graph.shape
    d = shape.total_dim
    if d > MAX_SUPEROP_DIM:
        raise ResourceLimitError(
            f"superoperator work limited to total dimension {MAX_SUPEROP_DIM}, got {d}")
    try:
        order = [int(i) for i in order]
    except (TypeError, ValueError):
        raise ValidationError("cycle order must contain 0-based edge indices") from None
    if not order:
        raise ValidationError("cycle order must not be empty")
    if set(order) != set(range(len(graph.edges))):
        raise ValidationError("cycle order must cover every edge at least once")
    acc = np.eye(d * d, dtype=np.complex128)
    for idx in order:
        sop = build_superoperator(gossip_channel(graph.edges[idx], alpha, shape))
        acc = sop.matrix @ acc
    return Superoperator(acc, {
        "kind": "cycle", "alpha": alpha,
        "identity_weight": (1.0 - alpha) ** len(list(order)),
        "order": [int(i) for i in order]})


@dataclass(frozen=True)
class SpectralCertificate:
    """Eigenvalue-location certificate for gossip-form superoperators.

    Maps of the form ``q0 X + sum_e q_e U_e X U_e`` with ``q0 > 0`` have all
    eigenvalues inside the disk centred at ``q0`` with radius ``1 - q0``,
    tangent to the unit circle only at 1. ``passed`` is the disk check;
    ``spectral_gap`` is one minus the largest non-unit eigenvalue modulus.
    """

    eigenvalues: np.ndarray
    q0: float
    disk_ok: bool
    max_disk_violation: float
    unit_eigenvalue_count: int
    spectral_gap: float
    max_imag: float

    @property
    def passed(self) -> bool:
        return self.disk_ok


def spectral_certificate(sop: Superoperator, q0: float,
                         tol: float = 1e-9) -> SpectralCertificate:
    if not 0.0 < q0 <= 1.0:
        raise ValidationError(
            f"the certificate requires an identity weight q0 in (0, 1], got {q0}")
    evals = np.linalg.eigvals(sop.matrix)
    max_imag = float(np.max(np.abs(evals.imag))) if evals.size else 0.0
    dists = np.abs(evals - q0)
    violation = float(np.max(dists - (1.0 - q0))) if evals.size else 0.0
    disk_ok = violation <= tol
    unit_mask = np.abs(evals - 1.0) <= tol
    unit_count = int(np.sum(unit_mask))
    rest = np.abs(evals[~unit_mask])
    gap = float(1.0 - np.max(rest)) if rest.size else 1.0
    return SpectralCertificate(
        eigenvalues=evals, q0=q0, disk_ok=disk_ok,
        max_disk_violation=max(violation, 0.0),
        unit_eigenvalue_count=unit_count, spectral_gap=gap, max_imag=max_imag)


# ---------------------------------------------------------------------------
# fixed-point space
# ---------------------------------------------------------------------------

def commutant_dimension(graph: InteractionGraph) -> int:
    """Dimension of {X : [X, U_e] = 0 for every edge}, by brute force.

    Solves the stacked linear system ``(I (x) U - U^T (x) I) vec(X) = 0``
    through the nullity of the positive semidefinite normal matrix. This is
    the independent oracle for :func:`fixed_point_space`.
    """
    shape = graph.shape
    d = shape.total_dim
    if d > MAX_SUPEROP_DIM:
        raise ResourceLimitError(
            f"commutant computation limited to total dimension {MAX_SUPEROP_DIM}")
    if not graph.edges:
        return d * d
    eye = np.eye(d, dtype=np.complex128)
    normal = np.zeros((d * d, d * d), dtype=np.complex128)
    for edge in graph.edges:
        u = np.zeros((d, d), dtype=np.complex128)
        u[_edge_basis_map(edge, shape), np.arange(d)] = 1.0
        c = np.kron(eye, u) - np.kron(u.T, eye)
        normal += c.conj().T @ c
    evals = np.linalg.eigvalsh((normal + normal.conj().T) / 2.0)
    return int(np.sum(evals < 1e-9))


def fixed_point_space(graph: InteractionGraph, alpha: float):
    """Fixed points of the expected gossip map: dimension and Hermitian basis.

    Diagonalizes the synchronous superoperator and keeps the eigenvalue-1
    eigenspace; the dimension is cross-checked against the brute-force
    commutant (the two must agree; a mismatch raises ConsistencyError).
    Returns ``(dimension, basis)`` with an orthonormal Hermitian basis under
    the real Hilbert-Schmidt inner product.
    """
    sop = synchronous_superoperator(graph, alpha)
    mat = sop.matrix
    if linalg.hermiticity_defect(mat) > 1e-9:
        raise ConsistencyError("synchronous gossip superoperator should be Hermitian")
    w, v = np.linalg.eigh((mat + mat.conj().T) / 2.0)
    fixed_cols = [v[:, i] for i in range(len(w)) if w[i] > 1.0 - 1e-9]
    dim = len(fixed_cols)

    oracle = commutant_dimension(graph)
    if oracle != dim:
        raise ConsistencyError(
            f"fixed-space dimension {dim} disagrees with commutant dimension {oracle}")

    d = graph.shape.total_dim
    candidates = []
    for col in fixed_cols:
        x = unvectorize(col)
        candidates.append((x + x.conj().T) / 2.0)
        candidates.append(1j * (x - x.conj().T) / 2.0)
    rows = np.stack([np.concatenate([vectorize(c).real, vectorize(c).imag])
                     for c in candidates])
    _, svals, vt = np.linalg.svd(rows, full_matrices=False)
    keep = [vt[i] for i in range(len(svals)) if svals[i] > 1e-9]
    if len(keep) != dim:
        raise ConsistencyError(
            f"Hermitian basis extraction found {len(keep)} elements for a "
            f"{dim}-dimensional fixed space")
    basis = [unvectorize(row[:d * d] + 1j * row[d * d:]) for row in keep]
    return dim, basis


# ---------------------------------------------------------------------------
# conserved site averages and their duals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SAverageReport:
    """Outcome of the site-average decomposition and consensus check."""

    decomposable: bool
    residual: float
    sigma: np.ndarray | None
    conservation_drift: float
    limit_deviation: float
    limit_mismatch: float


def s_average_check(s_operator, graph: InteractionGraph, alpha: float,
                    rho0_samples: Sequence[DensityOperator],
                    tol: float = 1e-10, steps: int = 400) -> SAverageReport:
    """Test whether a conserved S supports S-average consensus.

    ``S`` must be Hermitian and permutation invariant. The check projects S
    onto the span of single-site lifts: decomposable means
    ``S = (1/m) sum_i sigma^(i)`` for some local sigma (residual below
    ``tol``; the recovered sigma is returned). For decomposable S each sample
    state is driven by the synchronous map and the limiting local
    expectations must all equal ``Tr[S rho_0]`` (reported as
    ``limit_deviation``, measured both on the evolved state and on the exact
    twirl limit). For non-decomposable S the trajectory still conserves
    ``Tr[S rho_t]`` (``conservation_drift``), but no local observable reaches
    it: ``limit_mismatch`` reports the gap between ``Tr[S rho_0]`` and the
    consensus values produced by the best local approximation of S.
    """
    shape = graph.shape
    s_mat = require_hermitian(s_operator, what="site-average candidate")
    if s_mat.shape[0] != shape.total_dim:
        raise ValidationError("S does not match the network dimension")
    if not is_permutation_invariant(s_mat, shape, tol=1e-9):
        raise ValidationError("S must be permutation invariant")
    if not graph.is_connected():
        raise ValidationError("the consensus check needs a connected graph")

    basis = local_hermitian_basis(shape.n)
    columns = [vectorize(site_average(b, shape)) for b in basis]
    a = np.stack([np.concatenate([c.real, c.imag]) for c in columns], axis=1)
    b_vec = vectorize(s_mat)
    b = np.concatenate([b_vec.real, b_vec.imag])
    coeffs, *_ = np.linalg.lstsq(a, b, rcond=None)
    residual = float(np.linalg.norm(a @ coeffs - b))
    decomposable = residual <= tol
    probe = sum(c * bm for c, bm in zip(coeffs, basis))
    probe = (probe + probe.conj().T) / 2.0
    sigma = probe if decomposable else None

    bmaps = [_edge_basis_map(e, shape) for e in graph.edges]
    drift = 0.0
    limit_dev = 0.0
    limit_mismatch = 0.0
    for rho0 in rho0_samples:
        if rho0.shape != shape:
            raise ValidationError("sample state does not match the network shape")
        target = float(np.einsum("ij,ji->", s_mat, rho0.matrix).real)
        mat = rho0.matrix.copy()
        for _ in range(steps):
            new = (1.0 - alpha) * mat
            for bmap, q in zip(bmaps, graph.weights):
                new += alpha * q * conjugate_by_basis_map(mat, bmap)
            mat = new
            drift = max(drift, abs(
                float(np.einsum("ij,ji->", s_mat, mat).real) - target))
        star = twirl_matrix(rho0.matrix, shape)
        z_final = _local_expectations(mat, shape, probe)
        z_star = _local_expectations(star, shape, probe)
        if decomposable:
            limit_dev = max(limit_dev,
                            float(np.max(np.abs(z_final - target))),
                            float(np.max(np.abs(z_star - target))))
        else:
            limit_mismatch = max(limit_mismatch,
                                 float(np.max(np.abs(z_star - target))))
    return SAverageReport(decomposable=decomposable, residual=residual,
                          sigma=sigma, conservation_drift=drift,
                          limit_deviation=limit_dev,
                          limit_mismatch=limit_mismatch)


@dataclass(frozen=True)
class DualFixedPointReport:
    """Heisenberg-picture checks for gossip maps."""

    s_invariant: bool
    max_invariance_defect: float
    iteration_deviation: float
    ok: bool


def dual_fixed_point_check(graph: InteractionGraph, alpha: float, s_operator,
                           sigma=None, steps: int = 300) -> DualFixedPointReport:
    """Verify S is a dual fixed point and local lifts converge to the average.

    Every per-edge dual leaves a permutation-invariant S exactly invariant
    (defect below 1e-12). When ``sigma`` is given, the iterated cyclic dual
    of ``sigma^(1)`` must approach ``twirl_observable`` of the lift, i.e.
    ``(1/m) sum_i sigma^(i)``, within 1e-8 after ``steps`` sweep steps.
    """
    shape = graph.shape
    s_mat = require_hermitian(s_operator, what="dual fixed-point candidate")
    defect = 0.0
    for edge in graph.edges:
        ch = gossip_channel(edge, alpha, shape)
        defect = max(defect, float(np.max(np.abs(dual_apply(ch, s_mat) - s_mat))))
    s_ok = defect <= 1e-12

    iter_dev = 0.0
    if sigma is not None:
        obs = sigma if isinstance(sigma, Observable) else Observable(as_operator(sigma))
        x = lift_local(obs.matrix, 1, shape)
        target = twirl_observable(x, shape)
        channels = [gossip_channel(e, alpha, shape) for e in graph.edges]
        for t in range(steps):
            x = channels[t % len(channels)].dual_matrix(x)
        iter_dev = float(np.max(np.abs(x - target)))
    ok = s_ok and iter_dev <= 1e-8
    return DualFixedPointReport(s_invariant=s_ok, max_invariance_defect=defect,
                                iteration_deviation=iter_dev, ok=ok)


# ---------------------------------------------------------------------------
# probability-one convergence experiment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceExperiment:
    """Ensemble statistics for random-gossip convergence to the twirl."""

    num_trials: int
    horizon: int
    eps: float
    successes: int
    empirical_probability: float
    max_final_sq_distance: float
    monotone: bool

    def as_dict(self) -> dict:
        return asdict(self)


def probability_one_convergence_experiment(
        graph: InteractionGraph, alpha: float, rho0: DensityOperator,
        eps: float, num_trials: int, horizon: int, seed: int) -> ConvergenceExperiment:
    """Sample random-edge trajectories and test convergence to the twirl.

    Success for one trial means the squared Frobenius distance
    ``Tr[(rho_T - rho*)^2]`` at the horizon is at most ``eps``, with
    ``rho* = twirl(rho_0)``. The distance must never increase along any
    trajectory; an increase beyond 1e-12 raises ConsistencyError (hard
    failure, since every gossip channel fixes rho* and contracts Frobenius
    distances). Per-trial randomness comes from the documented sub-seed
    splitting rule, so results are reproducible and trials independent.
    """
    shape = rho0.shape
    if graph.shape != shape:
        raise ValidationError("graph and state shapes differ")
    if not graph.edges:
        raise ValidationError("the experiment needs at least one edge")
    if num_trials < 1 or horizon < 1:
        raise ValidationError("num_trials and horizon must be positive")
    star = twirl_matrix(rho0.matrix, shape)
    bmaps = [_edge_basis_map(e, shape) for e in graph.edges]
    cum = np.cumsum(graph.weights)
    successes = 0
    worst_final = 0.0
    for trial in range(num_trials):
        rng = trial_rng(seed, trial)
        mat = rho0.matrix.copy()
        diff = mat - star
        dist = float(np.sum(np.abs(diff) ** 2))
        for _ in range(horizon):
            idx = draw_index(rng, cum)
            mat = (1.0 - alpha) * mat + alpha * conjugate_by_basis_map(mat, bmaps[idx])
            diff = mat - star
            new_dist = float(np.sum(np.abs(diff) ** 2))
            if new_dist > dist + 1e-12:
                raise ConsistencyError(
                    f"squared distance to the twirl increased by "
                    f"{new_dist - dist:.3e} in trial {trial}")
            dist = new_dist
        worst_final = max(worst_final, dist)
        if dist <= eps:
            successes += 1
    return ConvergenceExperiment(
        num_trials=num_trials, horizon=horizon, eps=eps, successes=successes,
        empirical_probability=successes / num_trials,
        max_final_sq_distance=worst_final, monotone=True)
