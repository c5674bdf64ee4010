"""Classifiers for the four consensus notions on a subsystem network.

The four notions, from weakest to strongest on the relevant branches:

* sigma-expectation consensus: every subsystem reports the same expectation
  ``Tr[sigma^(i) rho]``.
* reduced-state consensus (RSC): all single-site reduced states coincide.
* symmetric-state consensus (SSC): ``U_pi rho U_pi^dagger = rho`` for every
  site permutation.
* sigma-measurement consensus (sigma-SMC): outcomes of repeated local sigma
  measurements agree across sites, equivalently ``Tr[Pi_sym rho] = 1`` for
  the symmetrized outcome projector ``Pi_sym = sum_j Pi_j^(x)m``.

SSC implies RSC implies sigma-EC; sigma-SMC implies sigma-EC always and
implies SSC when sigma is nondegenerate. ``classify`` enforces these
implications on its own verdicts and treats a violation as an internal
numerical fault.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass

import numpy as np

from . import linalg
from .errors import ConsistencyError, ValidationError
from .linalg import NetworkShape, as_operator, eigh, frobenius_distance, kron_all
from .states import (DensityOperator, Observable, Permutation, PAULI,
                     basis_index_map, conjugate_by_basis_map, lift_local,
                     local_hermitian_basis, twirl_matrix, MAX_FACTORIAL_M)

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class ConsensusReport:
    """Verdicts and gaps for one state against one local observable."""

    sigma_ec: bool
    sigma_ec_gap: float
    rsc: bool
    rsc_gap: float
    ssc: bool
    ssc_gap: float
    smc: bool
    smc_defect: float
    sigma_nondegenerate: bool
    tolerance: float

    def as_dict(self) -> dict:
        return asdict(self)


def check_sigma_ec(rho: DensityOperator, sigma, tol: float = DEFAULT_TOL):
    """Return (flag, gap) with gap = max pairwise |z_j - z_k|.

    ``z_i = Tr[sigma^(i) rho] = Tr[sigma rho_bar_i]`` is computed through the
    reduced states, which is exact and keeps the cost at one partial trace
    per site.
    """
    mat = sigma.matrix if isinstance(sigma, Observable) else as_operator(sigma)
    z = [np.einsum("ij,ji->", rho.reduced_state(i), mat).real
         for i in rho.shape.sites()]
    gap = float(max(z) - min(z)) if len(z) > 1 else 0.0
    return gap <= tol, gap


def reduced_states(rho: DensityOperator) -> list[np.ndarray]:
    return [rho.reduced_state(i) for i in rho.shape.sites()]


def check_rsc(rho: DensityOperator, tol: float = DEFAULT_TOL):
    """Return (flag, gap) with gap = max pairwise Frobenius distance of
    single-site reduced states."""
    reds = reduced_states(rho)
    gap = 0.0
    for a, b in itertools.combinations(reds, 2):
        gap = max(gap, frobenius_distance(a, b))
    return gap <= tol, gap


def ssc_gap(rho: DensityOperator) -> float:
    """Frobenius distance from the permutation-invariant subspace.

    For m <= 8 this is the exact distance ``||rho - twirl(rho)||_F``. Beyond
    the factorial cap it falls back to the maximum deviation under adjacent
    transpositions, which vanishes exactly when the twirl distance does
    (adjacent transpositions generate the full symmetric group).
    """
    m = rho.shape.m
    if m <= MAX_FACTORIAL_M:
        return frobenius_distance(rho.matrix, twirl_matrix(rho.matrix, rho.shape))
    gap = 0.0
    for j in range(1, m):
        bmap = basis_index_map(Permutation.transposition(m, j, j + 1), rho.shape)
        gap = max(gap, frobenius_distance(rho.matrix,
                                          conjugate_by_basis_map(rho.matrix, bmap)))
    return gap


def check_ssc(rho: DensityOperator, tol: float = DEFAULT_TOL):
    gap = ssc_gap(rho)
    return gap <= tol, gap


@dataclass(frozen=True)
class SymProjector:
    """``Pi_sym = sum_j Pi_j^(x)m`` for a grouped local spectral family."""

    matrix: np.ndarray
    shape: NetworkShape

    def __post_init__(self):
        p = self.matrix
        if linalg.hermiticity_defect(p) > 1e-10:
            raise ConsistencyError("symmetrized projector is not Hermitian")
        if np.max(np.abs(p @ p - p)) > 1e-10:
            raise ConsistencyError("symmetrized projector is not idempotent")


def sym_projector(sigma: Observable, m: int) -> SymProjector:
    """Build the symmetrized outcome projector on m sites."""
    shape = NetworkShape(m, sigma.dim)
    d = shape.total_dim
    acc = np.zeros((d, d), dtype=np.complex128)
    for p in sigma.projectors:
        acc += kron_all(p for _ in range(m))
    return SymProjector(acc, shape)


def smc_pairwise_gap(rho: DensityOperator, sigma: Observable) -> float:
    """Raw pairwise agreement deviation over all outcomes j and site pairs.

    ``max_{j,k!=l} |Tr[Pi_j^(k) Pi_j^(l) rho] - Tr[Pi_j^(l) rho]|``, the
    definition the symmetrized projector criterion compresses.
    """
    shape = rho.shape
    lifted = [[lift_local(p, i, shape) for i in shape.sites()]
              for p in sigma.projectors]
    gap = 0.0
    for j in range(len(sigma.projectors)):
        for k in range(shape.m):
            for l in range(shape.m):
                if k == l:
                    continue
                joint = np.einsum("ij,jk,ki->", lifted[j][k], lifted[j][l],
                                  rho.matrix).real
                single = np.einsum("ij,ji->", lifted[j][l], rho.matrix).real
                gap = max(gap, abs(joint - single))
    return float(gap)


def check_smc(rho: DensityOperator, sigma: Observable, tol: float = DEFAULT_TOL,
              cross_validate: bool = True):
    """Return (flag, defect) with defect = 1 - Tr[Pi_sym rho] in [0, 1].

    The verdict is cross-validated against the raw pairwise definition; a
    disagreement at the same tolerance indicates an internal fault and raises
    ConsistencyError.
    """
    if sigma.dim != rho.shape.n:
        raise ValidationError("observable dimension does not match the network")
    proj = sym_projector(sigma, rho.shape.m)
    overlap = np.einsum("ij,ji->", proj.matrix, rho.matrix).real
    defect = float(max(1.0 - overlap, 0.0))
    flag = defect <= tol
    if cross_validate:
        pairwise = smc_pairwise_gap(rho, sigma)
        if (pairwise <= tol) != flag:
            raise ConsistencyError(
                f"symmetrized-projector defect {defect:.3e} and pairwise gap "
                f"{pairwise:.3e} disagree at tolerance {tol:.1e}")
    return flag, defect


def classify(rho: DensityOperator, sigma, tol: float = DEFAULT_TOL) -> ConsensusReport:
    """Run all four classifiers and enforce the implication hierarchy."""
    obs = sigma if isinstance(sigma, Observable) else Observable(as_operator(sigma))
    ec_flag, ec_gap = check_sigma_ec(rho, obs, tol)
    rsc_flag, rsc_gap = check_rsc(rho, tol)
    ssc_flag, gap_ssc = check_ssc(rho, tol)
    smc_flag, smc_defect = check_smc(rho, obs, tol)
    report = ConsensusReport(
        sigma_ec=ec_flag, sigma_ec_gap=ec_gap,
        rsc=rsc_flag, rsc_gap=rsc_gap,
        ssc=ssc_flag, ssc_gap=gap_ssc,
        smc=smc_flag, smc_defect=smc_defect,
        sigma_nondegenerate=obs.nondegenerate, tolerance=tol)
    _assert_hierarchy(report)
    return report


def _assert_hierarchy(report: ConsensusReport):
    failures = []
    if report.ssc and not report.rsc:
        failures.append("SSC without RSC")
    if report.rsc and not report.sigma_ec:
        failures.append("RSC without sigma-EC")
    if report.smc and not report.sigma_ec:
        failures.append("sigma-SMC without sigma-EC")
    if report.smc and report.sigma_nondegenerate and not report.ssc:
        failures.append("nondegenerate sigma-SMC without SSC")
    if failures:
        raise ConsistencyError(
            "consensus hierarchy violated (internal numerical fault): "
            + "; ".join(failures))


def rsc_iff_all_sigma_ec(rho: DensityOperator, tol: float = DEFAULT_TOL) -> bool:
    """Check that RSC holds exactly when sigma-EC holds for every sigma.

    Sweeps an orthonormal Hermitian basis of the local operator space; the
    basis spans all observables, so expectation agreement on it is agreement
    everywhere. Returns True when the two verdicts coincide.
    """
    rsc_flag, _ = check_rsc(rho, tol)
    all_ec = all(check_sigma_ec(rho, b, tol)[0]
                 for b in local_hermitian_basis(rho.shape.n))
    return rsc_flag == all_ec


def pure_rsc_implies_ssc_check(kets, tol: float = DEFAULT_TOL) -> bool:
    """Verify on a product of pure states: RSC plus pure reduced states force SSC.

    ``kets`` is one ket per site; vacuously true when the assembled product
    state is not in RSC. A counterexample raises ConsistencyError since the
    implication is a theorem.
    """
    vecs = [np.asarray(k, dtype=np.complex128).ravel() for k in kets]
    n = vecs[0].size
    if any(v.size != n for v in vecs):
        raise ValidationError("all kets must share one local dimension")
    vecs = [v / np.linalg.norm(v) for v in vecs]
    shape = NetworkShape(len(vecs), n)
    joint = kron_all(np.outer(v, v.conj()) for v in vecs)
    rho = DensityOperator.trusted(joint, shape)
    rsc_flag, _ = check_rsc(rho, tol)
    purity_ok = all(
        abs(np.einsum("ij,ji->", r, r).real - 1.0) <= 10 * tol
        for r in reduced_states(rho))
    if not (rsc_flag and purity_ok):
        return True
    ssc_flag, gap = check_ssc(rho, tol)
    if not ssc_flag:
        raise ConsistencyError(
            f"pure RSC product state failed SSC with gap {gap:.3e}")
    return True


# ---------------------------------------------------------------------------
# witness: RSC does not imply SSC for mixed reduced states
# ---------------------------------------------------------------------------

def rsc_not_ssc_witness(rho_bar, m: int, tol: float = DEFAULT_TOL) -> DensityOperator:
    """Construct a state in RSC but not SSC with every reduced state ``rho_bar``.

    Requires ``rho_bar`` of rank >= 2 and m >= 2. Writing
    ``rho_bar = p1 R1 + p2 R2`` with ``R1`` the projector on the top two
    eigenvectors ``e1, e2`` (and ``p1`` their smaller eigenvalue), the state

        q2 * R2_hat^(x)m  +  q1 * |Phi><Phi| (x) (R1/2)^(x)(m-2),
        |Phi> = (|e1 f1> + |e2 f2|) / sqrt(2),

    with ``{f1, f2}`` the 45-degree proper rotation of ``{e1, e2}`` inside
    the R1-subspace, reproduces ``rho_bar`` at every site while the
    asymmetric entanglement breaks permutation invariance. Rank-one inputs are rejected:
    for pure reduced states RSC forces SSC, so no witness exists.

    The returned state is verified against the classifiers before returning.
    """
    rb = as_operator(rho_bar)
    if m < 2:
        raise ValidationError("the witness needs at least two sites")
    w, v = eigh(rb)
    tr = float(np.trace(rb).real)
    if abs(tr - 1.0) > 1e-8:
        raise ValidationError("rho_bar must have unit trace")
    order = np.argsort(w)[::-1]
    lam = w[order]
    vecs = v[:, order]
    if lam[-1] < -linalg.PSD_TOL:
        raise ValidationError("rho_bar must be positive semidefinite")
    if lam[1] <= 1e-10:
        raise ValidationError(
            "rho_bar has rank < 2: pure reduced states admit no RSC-not-SSC witness")
    n = rb.shape[0]
    shape = NetworkShape(m, n)
    e1, e2 = vecs[:, 0], vecs[:, 1]
    # 45-degree proper rotation of the e-basis; a reflection would make the
    # pair coefficient matrix symmetric and the entangled block swap-invariant
    f1 = (e1 + e2) / np.sqrt(2.0)
    f2 = (e2 - e1) / np.sqrt(2.0)
    r1 = np.outer(e1, e1.conj()) + np.outer(e2, e2.conj())
    p1 = float(lam[1])
    q1 = 2.0 * p1
    q2 = 1.0 - q1

    phi = (np.kron(e1, f1) + np.kron(e2, f2)) / np.sqrt(2.0)
    ent = np.outer(phi, phi.conj())
    tail = kron_all(r1 / 2.0 for _ in range(m - 2))
    mat = q1 * np.kron(ent, tail)
    if q2 > 1e-12:
        r2_hat = (rb - p1 * r1) / q2
        mat = mat + q2 * kron_all(r2_hat for _ in range(m))
    witness = DensityOperator(mat, shape)

    for i in shape.sites():
        if frobenius_distance(witness.reduced_state(i), rb) > 10 * tol:
            raise ConsistencyError("witness reduced state drifted from rho_bar")
    rsc_flag, rsc_g = check_rsc(witness, tol)
    ssc_flag, ssc_g = check_ssc(witness, tol)
    if not rsc_flag or ssc_flag:
        raise ConsistencyError(
            f"witness construction failed: rsc_gap={rsc_g:.3e}, ssc_gap={ssc_g:.3e}")
    return witness


# ---------------------------------------------------------------------------
# no-go: no state is SMC for two mutually unbiased observables (except n=2 pairs)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NogoReport:
    """Spectral feasibility data for simultaneous two-observable SMC on m=2."""

    n: int
    lambda_max: float
    feasible: bool
    triple_pauli_fixed_dim: int | None

    def as_dict(self) -> dict:
        return asdict(self)


def nogo_check(n: int) -> NogoReport:
    """Probe simultaneous measurement consensus for a Fourier-conjugate pair.

    Builds ``H = Pi_sym Pi'_sym Pi_sym`` on two n-dimensional subsystems,
    where the primed projector comes from the discrete-Fourier conjugate
    basis. A joint SMC state exists only if the top eigenvalue reaches 1;
    ``feasible`` reports ``lambda_max >= 1 - 1e-10``. For n=2 the report also
    carries the dimension of the joint fixed space of the three Pauli
    symmetrized projectors (zero: no state survives all three).
    """
    if not isinstance(n, int) or not 2 <= n <= 8:
        raise ValidationError(f"n must be an integer in 2..8, got {n!r}")
    d = n * n
    pi_sym = np.zeros((d, d), dtype=np.complex128)
    for k in range(n):
        idx = k * n + k
        pi_sym[idx, idx] = 1.0
    j = np.arange(n)
    fourier = np.exp(2j * np.pi * np.outer(j, j) / n) / np.sqrt(n)
    pi_prime = np.zeros((d, d), dtype=np.complex128)
    for k in range(n):
        kk = np.kron(fourier[:, k], fourier[:, k])
        pi_prime += np.outer(kk, kk.conj())
    h = pi_sym @ pi_prime @ pi_sym
    lam_max = float(np.linalg.eigvalsh((h + h.conj().T) / 2.0)[-1])
    feasible = lam_max >= 1.0 - 1e-10

    triple_dim = None
    if n == 2:
        eye4 = np.eye(4, dtype=np.complex128)
        total = np.zeros((4, 4), dtype=np.complex128)
        for name in ("x", "y", "z"):
            obs = Observable(PAULI[name])
            total += eye4 - sym_projector(obs, 2).matrix
        evals = np.linalg.eigvalsh((total + total.conj().T) / 2.0)
        triple_dim = int(np.sum(evals < 1e-10))
    return NogoReport(n=n, lambda_max=lam_max, feasible=feasible,
                      triple_pauli_fixed_dim=triple_dim)
