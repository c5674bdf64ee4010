"""Tests for gossip channels, trajectories, superoperators, and certificates."""

import numpy as np
import pytest

import qgossip as qg
from qgossip.rng import make_rng, trial_rng
from qgossip.states import Observable, is_permutation_invariant

SZ = qg.PAULI["z"]


def path_graph(m, n=2, weights=None):
    shape = qg.NetworkShape(m, n)
    return qg.InteractionGraph(shape, [(i, i + 1) for i in range(1, m)],
                               weights=weights)


# ---------------------------------------------------------------------------
# graphs and configs
# ---------------------------------------------------------------------------

def test_graph_normalizes_edges():
    shape = qg.NetworkShape(3, 2)
    g = qg.InteractionGraph(shape, [(2, 1), (3, 2)])
    assert g.edges == ((1, 2), (2, 3))
    np.testing.assert_allclose(g.weights, [0.5, 0.5], atol=0)


def test_graph_rejects_bad_edges_and_weights():
    shape = qg.NetworkShape(3, 2)
    with pytest.raises(qg.ValidationError):
        qg.InteractionGraph(shape, [(1, 1)])
    with pytest.raises(qg.ValidationError):
        qg.InteractionGraph(shape, [(1, 4)])
    with pytest.raises(qg.ValidationError):
        qg.InteractionGraph(shape, [(1, 2), (2, 1)])  # duplicate after sorting
    with pytest.raises(qg.ValidationError):
        qg.InteractionGraph(shape, [(1, 2), (2, 3)], weights=[0.9, 0.2])
    with pytest.raises(qg.ValidationError):
        qg.InteractionGraph(shape, [(1, 2), (2, 3)], weights=[1.2, -0.2])
    with pytest.raises(qg.ValidationError):
        qg.InteractionGraph(shape, [(1, 2)], weights=[0.5, 0.5])


def test_graph_connectivity():
    assert path_graph(4).is_connected()
    shape = qg.NetworkShape(4, 2)
    split = qg.InteractionGraph(shape, [(1, 2), (3, 4)])
    assert not split.is_connected()
    assert qg.InteractionGraph(qg.NetworkShape(1, 2), []).is_connected()


def test_gossip_config_validation():
    with pytest.raises(qg.ValidationError):
        qg.GossipConfig(alpha=0.0, strategy="random", steps=1, seed=1)
    with pytest.raises(qg.ValidationError):
        qg.GossipConfig(alpha=1.0, strategy="random", steps=1, seed=1)
    with pytest.raises(qg.ValidationError):
        qg.GossipConfig(alpha=0.5, strategy="bogus", steps=1)
    with pytest.raises(qg.ValidationError):
        qg.GossipConfig(alpha=0.5, strategy="random", steps=-1, seed=1)
    with pytest.raises(qg.ValidationError):
        qg.GossipConfig(alpha=0.5, strategy="random", steps=1)  # seed required
    with pytest.raises(qg.ValidationError):
        qg.GossipConfig(alpha=0.5, strategy="random", steps=1, seed=1,
                        cycle_order=(0,))
    cfg = qg.GossipConfig(alpha=0.5, strategy="cyclic", steps=3)
    assert cfg.resolved_cycle_order(path_graph(3)) == (0, 1)
    with pytest.raises(qg.ValidationError):
        qg.GossipConfig(alpha=0.5, strategy="cyclic", steps=3,
                        cycle_order=(0,)).resolved_cycle_order(path_graph(3))


# ---------------------------------------------------------------------------
# channels
# ---------------------------------------------------------------------------

def test_gossip_channel_kraus_structure():
    shape = qg.NetworkShape(2, 2)
    ch = qg.gossip_channel((1, 2), 0.3, shape)
    assert len(ch.ops) == 2
    np.testing.assert_allclose(ch.ops[0], np.sqrt(0.7) * np.eye(4), atol=0)
    np.testing.assert_allclose(ch.ops[1], np.sqrt(0.3) * qg.swap_unitary(1, 2, shape),
                               atol=0)
    assert ch.unital


def test_gossip_channel_on_antialigned_pair():
    shape = qg.NetworkShape(2, 2)
    rho = qg.DensityOperator.from_ket(qg.basis_ket("01", 2), shape)
    out = qg.apply_channel(qg.gossip_channel((1, 2), 0.5, shape), rho)
    expected = 0.5 * rho.matrix + 0.5 * np.outer(qg.basis_ket("10", 2),
                                                 qg.basis_ket("10", 2))
    np.testing.assert_allclose(out.matrix, expected, atol=1e-15)


def test_gossip_channel_validates_inputs():
    shape = qg.NetworkShape(2, 2)
    with pytest.raises(qg.ValidationError):
        qg.gossip_channel((1, 2), 1.0, shape)
    with pytest.raises(qg.ValidationError):
        qg.gossip_channel((1, 3), 0.5, shape)
    with pytest.raises(qg.ValidationError):
        qg.gossip_channel((2, 2), 0.5, shape)


def test_synchronous_channel_structure():
    g = path_graph(3)
    ch = qg.synchronous_channel(g, 0.4)
    assert len(ch.ops) == 3  # identity plus one unitary per edge
    assert ch.unital
    with pytest.raises(qg.ValidationError):
        qg.synchronous_channel(qg.InteractionGraph(qg.NetworkShape(2, 2), []), 0.4)


def test_cycle_map_equals_sequential_application():
    g = path_graph(3)
    alpha = 0.35
    sweep = qg.cycle_map(g, [0, 1], alpha)
    assert len(sweep.ops) == 4
    rho = qg.random_density(g.shape, 77)
    step1 = qg.apply_channel(qg.gossip_channel(g.edges[0], alpha, g.shape), rho)
    step2 = qg.apply_channel(qg.gossip_channel(g.edges[1], alpha, g.shape), step1)
    np.testing.assert_allclose(qg.apply_channel(sweep, rho).matrix, step2.matrix,
                               atol=1e-12)


def test_cycle_map_kraus_cap():
    shape = qg.NetworkShape(6, 2)
    complete = qg.InteractionGraph(
        shape, [(a, b) for a in range(1, 7) for b in range(a + 1, 7)])
    with pytest.raises(qg.ResourceLimitError):
        qg.cycle_map(complete, range(15), 0.5)


# ---------------------------------------------------------------------------
# trajectories
# ---------------------------------------------------------------------------

def test_single_step_matches_channel():
    g = path_graph(2)
    rho = qg.DensityOperator.from_ket(qg.basis_ket("01", 2), g.shape)
    cfg = qg.GossipConfig(alpha=0.5, strategy="cyclic", steps=1)
    rec, final = qg.evolve(rho, g, cfg, SZ)
    np.testing.assert_allclose(rec.z[0], [1.0, -1.0], atol=1e-14)
    np.testing.assert_allclose(rec.z[1], [0.0, 0.0], atol=1e-14)
    # for two sites at alpha = 1/2 one step lands exactly on the twirl
    np.testing.assert_allclose(final.matrix, qg.twirl(rho).matrix, atol=1e-15)
    assert rec.ssc_gap[1] <= 1e-12
    assert rec.edges == [(1, 2)]


def test_record_tracks_final_state():
    g = path_graph(3)
    rho = qg.random_density(g.shape, 3)
    cfg = qg.GossipConfig(alpha=0.3, strategy="random", steps=20, seed=8)
    rec, final = qg.evolve(rho, g, cfg, SZ)
    for i in (1, 2, 3):
        z = final.expectation(qg.lift_local(SZ, i, g.shape)).real
        assert z == pytest.approx(rec.z[-1][i - 1], abs=1e-12)
    assert rec.steps == 20
    assert len(rec.edges) == 20
    assert rec.termination == "steps_exhausted"


def test_site_average_is_conserved_along_all_strategies():
    g = path_graph(3)
    rho = qg.random_density(g.shape, 12)
    target = np.trace(qg.site_average(SZ, g.shape) @ rho.matrix).real
    for strategy, seed in (("random", 4), ("cyclic", None),
                           ("synchronous", None), ("expected", None)):
        cfg = qg.GossipConfig(alpha=0.45, strategy=strategy, steps=30, seed=seed)
        rec, _ = qg.evolve(rho, g, cfg, SZ)
        np.testing.assert_allclose(rec.s_expect, target, atol=1e-10)


def test_random_trajectory_is_reproducible():
    g = path_graph(3)
    rho = qg.random_density(g.shape, 21)
    cfg = qg.GossipConfig(alpha=0.5, strategy="random", steps=25, seed=99)
    rec1, fin1 = qg.evolve(rho, g, cfg, SZ)
    rec2, fin2 = qg.evolve(rho, g, cfg, SZ)
    assert rec1.edges == rec2.edges
    np.testing.assert_array_equal(rec1.z, rec2.z)
    np.testing.assert_array_equal(fin1.matrix, fin2.matrix)
    cfg_other = qg.GossipConfig(alpha=0.5, strategy="random", steps=25, seed=100)
    rec3, _ = qg.evolve(rho, g, cfg_other, SZ)
    assert rec1.edges != rec3.edges


def test_expected_strategy_equals_superoperator_iteration():
    g = path_graph(3)
    rho = qg.random_density(g.shape, 31)
    cfg = qg.GossipConfig(alpha=0.4, strategy="expected", steps=10)
    _, final = qg.evolve(rho, g, cfg, SZ)
    sop = qg.synchronous_superoperator(g, 0.4)
    x = rho.matrix
    for _ in range(10):
        x = sop.apply_to_matrix(x)
    np.testing.assert_allclose(final.matrix, x, atol=1e-12)
    # synchronous is an alias strategy for the same deterministic map
    cfg_sync = qg.GossipConfig(alpha=0.4, strategy="synchronous", steps=10)
    _, final_sync = qg.evolve(rho, g, cfg_sync, SZ)
    np.testing.assert_allclose(final_sync.matrix, final.matrix, atol=1e-13)


def test_expected_map_is_monte_carlo_average():
    # frozen-seed comparison: final-step expectations within three standard
    # errors, and edge-draw frequencies match the weights
    g = path_graph(3, weights=[0.75, 0.25])
    rho = qg.DensityOperator.from_ket(qg.basis_ket("100", 2), g.shape)
    steps, n_mc = 12, 500
    rec_exp, _ = qg.evolve(rho, g, qg.GossipConfig(
        alpha=0.4, strategy="expected", steps=steps), SZ)
    acc = np.zeros((steps + 1, 3))
    acc2 = np.zeros_like(acc)
    counts = {e: 0 for e in g.edges}
    for trial in range(n_mc):
        cfg = qg.GossipConfig(alpha=0.4, strategy="random", steps=steps,
                              seed=int(trial_rng(1234, trial).integers(0, 2 ** 31)))
        rec, _ = qg.evolve(rho, g, cfg, SZ)
        acc += rec.z
        acc2 += rec.z ** 2
        for e in rec.edges:
            counts[e] += 1
    mean = acc / n_mc
    se = np.sqrt(np.maximum(acc2 / n_mc - mean ** 2, 0.0) / n_mc)
    dev = np.abs(mean[steps] - rec_exp.z[steps])
    assert np.all(dev <= 3.0 * se[steps])
    n_draws = n_mc * steps
    for e, q in zip(g.edges, g.weights):
        freq = counts[e] / n_draws
        assert abs(freq - q) <= 3.0 * np.sqrt(q * (1 - q) / n_draws)


def test_cyclic_strategy_walks_the_order():
    g = path_graph(4)
    rho = qg.random_density(g.shape, 41)
    cfg = qg.GossipConfig(alpha=0.5, strategy="cyclic", steps=7,
                          cycle_order=(2, 0, 1))
    rec, _ = qg.evolve(rho, g, cfg, SZ)
    expected = [g.edges[i] for i in (2, 0, 1, 2, 0, 1, 2)]
    assert rec.edges == expected


def test_single_site_network_is_inert():
    shape = qg.NetworkShape(1, 2)
    g = qg.InteractionGraph(shape, [])
    rho = qg.DensityOperator(np.diag([0.25, 0.75]), shape)
    cfg = qg.GossipConfig(alpha=0.5, strategy="cyclic", steps=5)
    rec, final = qg.evolve(rho, g, cfg, SZ)
    np.testing.assert_allclose(final.matrix, rho.matrix, atol=0)
    assert np.all(rec.z == rec.z[0])


def test_zero_steps_records_initial_point_only():
    g = path_graph(2)
    rho = qg.random_density(g.shape, 51)
    cfg = qg.GossipConfig(alpha=0.5, strategy="cyclic", steps=0)
    rec, final = qg.evolve(rho, g, cfg, SZ)
    assert rec.z.shape == (1, 2)
    np.testing.assert_array_equal(final.matrix, rho.matrix)


def test_stop_gap_terminates_early():
    g = path_graph(3)
    rho = qg.DensityOperator.from_ket(qg.basis_ket("100", 2), g.shape)
    cfg = qg.GossipConfig(alpha=0.5, strategy="cyclic", steps=500, stop_gap=1e-6)
    rec, final = qg.evolve(rho, g, cfg, SZ)
    assert rec.termination.startswith("converged_at_step_")
    assert rec.steps < 500
    assert rec.ssc_gap[-1] <= 1e-6


def test_disconnected_graph_warns_and_misses_global_twirl():
    shape = qg.NetworkShape(4, 2)
    g = qg.InteractionGraph(shape, [(1, 2), (3, 4)])
    rho = qg.DensityOperator.from_ket(qg.basis_ket("1100", 2), shape)
    cfg = qg.GossipConfig(alpha=0.5, strategy="expected", steps=60)
    with pytest.warns(UserWarning):
        rec, final = qg.evolve(rho, g, cfg, SZ)
    # component-local averages (-1,-1) and (+1,+1) cannot equalize globally
    np.testing.assert_allclose(rec.z[-1], [-1.0, -1.0, 1.0, 1.0], atol=1e-9)
    assert qg.frobenius_distance(final.matrix, qg.twirl(rho).matrix) > 0.1


# ---------------------------------------------------------------------------
# superoperators
# ---------------------------------------------------------------------------

def test_superoperator_matches_channel_action():
    g = path_graph(3)
    ch = qg.synchronous_channel(g, 0.5)
    sop = qg.build_superoperator(ch)
    rng = make_rng(61)
    for _ in range(20):
        x = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        np.testing.assert_allclose(sop.apply_to_matrix(x), ch.apply_matrix(x),
                                   atol=1e-10)


def test_superoperator_dimension_cap():
    g = path_graph(7)  # joint dimension 128 > 64
    with pytest.raises(qg.ResourceLimitError):
        qg.synchronous_superoperator(g, 0.5)


def test_synchronous_superoperator_is_real_symmetric():
    sop = qg.synchronous_superoperator(path_graph(3), 0.5)
    assert np.max(np.abs(sop.matrix.imag)) < 1e-14
    assert np.max(np.abs(sop.matrix - sop.matrix.T)) < 1e-12
    assert sop.provenance["identity_weight"] == pytest.approx(0.5)


def test_gossip_maps_are_frobenius_contractions():
    g = path_graph(3)
    ch = qg.synchronous_channel(g, 0.3)
    rng = make_rng(63)
    for _ in range(15):
        a = qg.random_density(g.shape, int(rng.integers(0, 10 ** 6))).matrix
        b = qg.random_density(g.shape, int(rng.integers(0, 10 ** 6))).matrix
        before = qg.frobenius_distance(a, b)
        after = qg.frobenius_distance(ch.apply_matrix(a), ch.apply_matrix(b))
        assert after <= before + 1e-12


def test_cycle_superoperator_composition():
    g = path_graph(3)
    sweep = qg.cycle_superoperator(g, [0, 1], 0.35)
    dense = qg.build_superoperator(qg.cycle_map(g, [0, 1], 0.35))
    np.testing.assert_allclose(sweep.matrix, dense.matrix, atol=1e-12)
    with pytest.raises(qg.ValidationError):
        qg.cycle_superoperator(g, [0], 0.35)
    with pytest.raises(qg.ValidationError):
        qg.cycle_superoperator(g, [(1, 2), (2, 3)], 0.35)


# ---------------------------------------------------------------------------
# spectral certificates
# ---------------------------------------------------------------------------

def test_certificate_for_synchronous_maps():
    for graph, expected_dim in ((path_graph(2), 10), (path_graph(3), 20)):
        sop = qg.synchronous_superoperator(graph, 0.5)
        cert = qg.spectral_certificate(sop, q0=0.5)
        assert cert.passed and cert.disk_ok
        assert cert.max_imag <= 1e-9
        assert cert.unit_eigenvalue_count == expected_dim
        ev = cert.eigenvalues
        assert np.all(ev.real >= -1e-9) and np.all(ev.real <= 1 + 1e-9)
        assert cert.spectral_gap > 1e-3


def test_certificate_gap_value_for_three_site_path():
    sop = qg.synchronous_superoperator(path_graph(3), 0.5)
    cert = qg.spectral_certificate(sop, q0=0.5)
    assert cert.spectral_gap == pytest.approx(0.25, abs=1e-12)


def test_certificate_disk_for_asymmetric_alpha():
    sop = qg.synchronous_superoperator(path_graph(3), 0.3)
    cert = qg.spectral_certificate(sop, q0=0.7)
    assert cert.disk_ok
    assert np.all(np.abs(cert.eigenvalues - 0.7) <= 0.3 + 1e-9)


def test_certificate_covers_cycle_superoperator():
    # one sweep is a convex combination with identity weight (1-alpha)^T
    g = path_graph(3)
    alpha = 0.4
    sweep = qg.cycle_superoperator(g, [0, 1], alpha)
    cert = qg.spectral_certificate(sweep, q0=(1 - alpha) ** 2)
    assert cert.disk_ok
    assert cert.unit_eigenvalue_count == 20


def test_certificate_rejects_pure_swap():
    # a bare swap has eigenvalue -1, far outside the q0 = 0.5 disk
    shape = qg.NetworkShape(2, 2)
    u = qg.swap_unitary(1, 2, shape)
    sop = qg.build_superoperator(qg.KrausChannel([u], shape))
    cert = qg.spectral_certificate(sop, q0=0.5)
    assert not cert.disk_ok and not cert.passed
    assert cert.max_disk_violation == pytest.approx(1.0, abs=1e-9)


def test_certificate_validates_q0():
    sop = qg.synchronous_superoperator(path_graph(2), 0.5)
    with pytest.raises(qg.ValidationError):
        qg.spectral_certificate(sop, q0=0.0)
    with pytest.raises(qg.ValidationError):
        qg.spectral_certificate(sop, q0=1.5)


# ---------------------------------------------------------------------------
# fixed points
# ---------------------------------------------------------------------------

def test_fixed_point_dimensions():
    assert qg.fixed_point_space(path_graph(2), 0.5)[0] == 10
    assert qg.fixed_point_space(path_graph(3), 0.5)[0] == 20
    triangle = qg.InteractionGraph(qg.NetworkShape(3, 2), [(1, 2), (2, 3), (1, 3)])
    assert qg.fixed_point_space(triangle, 0.5)[0] == 20


def test_fixed_point_dimension_matches_commutant():
    for g in (path_graph(2), path_graph(3), path_graph(4)):
        dim, _ = qg.fixed_point_space(g, 0.35)
        assert dim == qg.commutant_dimension(g)


def test_disconnected_graph_has_larger_fixed_space():
    shape = qg.NetworkShape(4, 2)
    split = qg.InteractionGraph(shape, [(1, 2), (3, 4)])
    dim_split = qg.commutant_dimension(split)
    dim_path = qg.commutant_dimension(path_graph(4))
    assert dim_split == 100
    assert dim_path == 35
    assert dim_split > dim_path


def test_commutant_without_edges_is_everything():
    shape = qg.NetworkShape(2, 2)
    g = qg.InteractionGraph(shape, [])
    assert qg.commutant_dimension(g) == 16


def test_fixed_point_basis_properties():
    g = path_graph(3)
    dim, basis = qg.fixed_point_space(g, 0.5)
    assert len(basis) == dim
    sop = qg.synchronous_superoperator(g, 0.5)
    swaps = [qg.swap_unitary(*e, g.shape) for e in g.edges]
    for i, x in enumerate(basis):
        assert np.max(np.abs(x - x.conj().T)) < 1e-9
        np.testing.assert_allclose(sop.apply_to_matrix(x), x, atol=1e-8)
        for u in swaps:
            np.testing.assert_allclose(u @ x, x @ u, atol=1e-8)
        for j, y in enumerate(basis):
            ip = np.trace(x.conj().T @ y).real
            np.testing.assert_allclose(ip, 1.0 if i == j else 0.0, atol=1e-9)
    # the identity and the conserved site average live in the span
    coords = np.stack([qg.vectorize(b) for b in basis])
    for target in (np.eye(8, dtype=complex), qg.site_average(SZ, g.shape)):
        v = qg.vectorize(target)
        proj = coords.conj() @ v
        np.testing.assert_allclose(coords.T @ proj, v, atol=1e-9)


def test_cyclic_decay_rate_matches_cycle_spectrum():
    # fit the per-sweep contraction over sweeps 4..14 and compare with the
    # second-largest modulus of the sweep superoperator (within 20 percent)
    g = path_graph(3)
    alpha = 0.5
    sweep = qg.cycle_superoperator(g, [0, 1], alpha)
    moduli = np.abs(np.linalg.eigvals(sweep.matrix))
    lam2 = float(np.max(moduli[moduli < 1 - 1e-9]))
    rho = qg.DensityOperator.from_ket(qg.basis_ket("100", 2), g.shape)
    star = qg.twirl(rho).matrix
    dists = []
    x = rho.matrix
    for _ in range(15):
        dists.append(qg.frobenius_distance(x, star))
        x = sweep.apply_to_matrix(x)
    ts = np.arange(4, 15)
    slope = np.polyfit(ts, np.log(np.asarray(dists)[4:15]), 1)[0]
    assert abs(np.exp(slope) - lam2) / lam2 < 0.2


# ---------------------------------------------------------------------------
# conserved site averages
# ---------------------------------------------------------------------------

def test_s_average_check_recovers_local_observable():
    g = path_graph(3)
    s = qg.site_average(SZ, g.shape)
    samples = [qg.random_density(g.shape, k) for k in range(3)]
    rep = qg.s_average_check(s, g, 0.5, samples)
    assert rep.decomposable
    assert rep.residual <= 1e-10
    np.testing.assert_allclose(rep.sigma, SZ, atol=1e-9)
    assert rep.conservation_drift <= 1e-10
    assert rep.limit_deviation <= 1e-8
    assert rep.limit_mismatch <= 1e-8


def test_s_average_check_flags_entangled_invariant():
    # sigma_z^(x)3 is permutation invariant and conserved, but is not a site
    # average of any single-site observable and its limit is not the mean
    g = path_graph(3)
    s = qg.kron_all([SZ, SZ, SZ])
    rho0 = qg.DensityOperator.from_ket(qg.basis_ket("000", 2), g.shape)
    rep = qg.s_average_check(s, g, 0.5, [rho0])
    assert not rep.decomposable
    assert rep.residual > 0.1
    assert rep.sigma is None
    assert rep.conservation_drift <= 1e-10
    assert rep.limit_mismatch > 0.5


def test_s_average_check_validates_inputs():
    g = path_graph(3)
    samples = [qg.random_density(g.shape, 0)]
    with pytest.raises(qg.ValidationError):
        qg.s_average_check(qg.lift_local(SZ, 1, g.shape), g, 0.5, samples)
    split = qg.InteractionGraph(qg.NetworkShape(4, 2), [(1, 2), (3, 4)])
    with pytest.raises(qg.ValidationError):
        qg.s_average_check(qg.site_average(SZ, split.shape), split, 0.5,
                           [qg.random_density(split.shape, 0)])


def test_dual_fixed_point_check():
    g = path_graph(3)
    rep = qg.dual_fixed_point_check(g, 0.5, qg.site_average(SZ, g.shape), sigma=SZ)
    assert rep.ok and rep.s_invariant
    assert rep.max_invariance_defect <= 1e-12
    assert rep.iteration_deviation <= 1e-8


# ---------------------------------------------------------------------------
# randomized convergence experiments
# ---------------------------------------------------------------------------

def test_probability_one_convergence_small():
    g = path_graph(3)
    rho = qg.random_density(g.shape, 71)
    exp = qg.probability_one_convergence_experiment(
        g, 0.5, rho, eps=1e-10, num_trials=20, horizon=300, seed=2024)
    assert exp.successes == 20
    assert exp.empirical_probability == 1.0
    assert exp.monotone
    assert exp.max_final_sq_distance <= 1e-10


def test_probability_one_experiment_is_deterministic():
    g = path_graph(2)
    rho = qg.random_density(g.shape, 72)
    a = qg.probability_one_convergence_experiment(
        g, 0.5, rho, eps=1e-10, num_trials=5, horizon=100, seed=9)
    b = qg.probability_one_convergence_experiment(
        g, 0.5, rho, eps=1e-10, num_trials=5, horizon=100, seed=9)
    assert a.max_final_sq_distance == b.max_final_sq_distance
    assert a.successes == b.successes
