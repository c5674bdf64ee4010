"""Classical gossip on real vectors, and the quantum-classical correspondence.

One interaction on edge (j, k) replaces the pair (x_j, x_k) by the mixture

    (x_j, x_k) <- ((1 - alpha) x_j + alpha x_k, (1 - alpha) x_k + alpha x_j),

equivalently the increment form x_j <- x_j + alpha (x_k - x_j). The mean is
conserved exactly and the disagreement function W = sum_k ||x_k - mean||^2
never increases. Local quantum expectations z_l(t) = Tr[sigma^(l) rho_t]
follow exactly this recursion under quantum gossip on the same edge
sequence, which is what :func:`correspondence_run` certifies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CertificateError, ConsistencyError, ValidationError
from .gossip import GossipConfig, InteractionGraph, TrajectoryRecord, evolve
from .rng import draw_index, make_rng
from .states import DensityOperator

MEAN_TOL = 1e-13
W_MONOTONE_TOL = 1e-12


def as_value_array(x0) -> np.ndarray:
    """Coerce node values to float shape (m, d); scalars become d=1."""
    a = np.asarray(x0, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2 or a.shape[0] < 1:
        raise ValidationError(f"node values must be (m,) or (m, d), got {a.shape}")
    return a


def classical_gossip_step(x: np.ndarray, edge, alpha: float) -> np.ndarray:
    """One pairwise mixing step; returns a new array."""
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must lie strictly in (0, 1), got {alpha}")
    a = as_value_array(x)
    j, k = (int(v) - 1 for v in edge)
    if j == k or not (0 <= j < a.shape[0] and 0 <= k < a.shape[0]):
        raise ValidationError(f"edge {edge!r} invalid for {a.shape[0]} nodes")
    out = a.copy()
    out[j] = (1.0 - alpha) * a[j] + alpha * a[k]
    out[k] = (1.0 - alpha) * a[k] + alpha * a[j]
    return out


def disagreement(x: np.ndarray) -> float:
    """W(x) = sum_k ||x_k - mean||^2, the gossip Lyapunov function."""
    a = as_value_array(x)
    centered = a - a.mean(axis=0, keepdims=True)
    return float(np.sum(centered ** 2))


@dataclass
class ClassicalTrajectory:
    """Recorded classical run: values ``x[t]`` has shape (m, d)."""

    alpha: float
    edges: list
    x: np.ndarray          # (steps+1, m, d)
    disagreement: np.ndarray

    @property
    def steps(self) -> int:
        return len(self.edges)

    def final_values(self) -> np.ndarray:
        return self.x[-1]


def run_classical(x0, graph: InteractionGraph, alpha: float, steps: int = 0,
                  strategy: str = "random", seed: int | None = None,
                  cycle_order=None, edge_sequence=None) -> ClassicalTrajectory:
    """Run classical gossip, mirroring the quantum edge-selection rules.

    Either pass an explicit ``edge_sequence`` (a list of (j, k) pairs or
    None entries for no-op steps, as exported by a quantum trajectory), or a
    strategy; "random" uses the same inverse-CDF PCG64 stream as the quantum
    engine, so equal seeds yield literally equal edge sequences.

    The mean is checked for exact conservation (1e-13 per component per
    step) and W for monotone decrease (1e-12); violations raise
    ConsistencyError since both are algebraic identities of the update.
    """
    a = as_value_array(x0)
    m = a.shape[0]
    if graph.shape.m != m:
        raise ValidationError(f"{m} node values for a graph on {graph.shape.m} sites")

    if edge_sequence is not None:
        schedule = list(edge_sequence)
    else:
        if strategy == "random":
            if seed is None:
                raise ValidationError("random strategy requires a seed")
            rng = make_rng(seed)
            cum = np.cumsum(graph.weights)
            schedule = [graph.edges[draw_index(rng, cum)] for _ in range(steps)]
        elif strategy == "cyclic":
            order = GossipConfig(alpha=alpha, strategy="cyclic", steps=steps,
                                 cycle_order=cycle_order).resolved_cycle_order(graph)
            schedule = [graph.edges[order[t % len(order)]] for t in range(steps)]
        else:
            raise ValidationError(
                f"classical gossip supports random/cyclic schedules, got {strategy!r}")

    xs = np.empty((len(schedule) + 1,) + a.shape)
    ws = np.empty(len(schedule) + 1)
    xs[0] = a
    ws[0] = disagreement(a)
    mean0 = a.mean(axis=0)
    cur = a
    for t, edge in enumerate(schedule):
        cur = classical_gossip_step(cur, edge, alpha) if edge is not None else cur.copy()
        xs[t + 1] = cur
        ws[t + 1] = disagreement(cur)
        if np.max(np.abs(cur.mean(axis=0) - mean0)) > MEAN_TOL:
            raise ConsistencyError(f"mean drifted at step {t + 1}")
        if ws[t + 1] > ws[t] + W_MONOTONE_TOL:
            raise ConsistencyError(
                f"disagreement increased by {ws[t + 1] - ws[t]:.3e} at step {t + 1}")
    return ClassicalTrajectory(alpha=alpha, edges=schedule, x=xs, disagreement=ws)


@dataclass
class CorrespondenceResult:
    """Per-step comparison of quantum local expectations and classical gossip."""

    quantum: TrajectoryRecord
    classical: ClassicalTrajectory
    max_deviation: float
    classical_limit_deviation: float


def correspondence_run(rho0: DensityOperator, sigma, graph: InteractionGraph,
                       config: GossipConfig,
                       fail_above: float = 1e-10) -> CorrespondenceResult:
    """Certify that quantum gossip reproduces classical gossip exactly.

    Runs the quantum trajectory, replays its edge sequence classically from
    ``x_l(0) = Tr[sigma^(l) rho_0]``, and compares ``z_l(t)`` step by step.
    The two recursions agree identically, so any deviation beyond
    ``fail_above`` (default 1e-10) raises CertificateError; observed
    deviations sit at the floating-point floor (< 1e-12).
    """
    if config.strategy not in ("random", "cyclic"):
        raise ValidationError(
            "the correspondence is stated for single-edge schedules "
            "(random or cyclic)")
    rec, _ = evolve(rho0, graph, config, sigma)
    classical = run_classical(rec.z[0], graph, config.alpha,
                              edge_sequence=rec.edges)
    deviation = float(np.max(np.abs(rec.z - classical.x[:, :, 0])))
    if deviation > fail_above:
        raise CertificateError(
            f"quantum/classical gossip deviation {deviation:.3e} exceeds "
            f"{fail_above:.1e}")
    mean0 = float(rec.z[0].mean())
    limit_dev = float(np.max(np.abs(classical.final_values()[:, 0] - mean0)))
    return CorrespondenceResult(quantum=rec, classical=classical,
                                max_deviation=deviation,
                                classical_limit_deviation=limit_dev)
