"""Command-line interface.

Subcommands: classify, evolve, spectrum, correspond, nogo, ensemble.
Exit codes: 0 success, 1 validation error, 2 failed certificate or internal
consistency fault, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .classical import correspondence_run
from .consensus import classify, nogo_check
from .errors import (CertificateError, ConsistencyError, ResourceLimitError,
                     ScenarioError, ValidationError)
from .gossip import (probability_one_convergence_experiment,
                     fixed_point_space, spectral_certificate,
                     synchronous_superoperator)
from .linalg import NetworkShape, frobenius_distance
from .scenario import (RunManifest, Scenario, TOOL_VERSION, load_scenario,
                       resolve_out_dir, write_csv, write_json, write_manifest)
from .states import named_state, parse_sigma, twirl


def _edge_label(edge) -> str:
    if edge is None:
        return ""
    return f"{edge[0]}-{edge[1]}"


def _trajectory_rows(record):
    rows = [[0, ""] + list(record.z[0]) + [record.s_expect[0],
                                           record.ssc_gap[0], record.smc_defect[0]]]
    for t in range(1, len(record.z)):
        edge = record.edges[t - 1]
        label = "all" if record.strategy in ("synchronous", "expected") else _edge_label(edge)
        rows.append([t, label] + list(record.z[t])
                    + [record.s_expect[t], record.ssc_gap[t], record.smc_defect[t]])
    return rows


def _finish_manifest(out_dir: Path, stem: str, scenario: Scenario, command: str,
                     started: float, termination: str) -> str:
    name = f"{stem}_manifest.json"
    manifest = RunManifest(scenario_hash=scenario.sha256,
                           tool_version=TOOL_VERSION, command=command,
                           seeds=scenario.seeds(),
                           wall_time_s=time.monotonic() - started,
                           termination=termination)
    write_manifest(out_dir / name, manifest)
    return name


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    tol = args.tol
    results = []
    if args.suite:
        raw = json.loads(Path(args.suite).read_text())
        if not isinstance(raw, dict) or raw.get("schema") != 1:
            raise ScenarioError("suite: expected a JSON object with schema 1")
        entries = raw.get("suite")
        if not isinstance(entries, list) or not entries:
            raise ScenarioError("suite.suite: expected a non-empty list")
        for i, entry in enumerate(entries):
            if not isinstance(entry, dict) or "state" not in entry or "sigma" not in entry:
                raise ScenarioError(f"suite.suite[{i}]: needs state and sigma")
            state = named_state(entry["state"])
            sigma = parse_sigma(entry["sigma"], state.shape.n)
            report = classify(state, sigma, tol)
            results.append({"state": entry["state"], "sigma": entry["sigma"],
                            "report": report.as_dict()})
    else:
        if not args.state or not args.sigma:
            raise ScenarioError("classify needs --state and --sigma (or --suite)")
        shape = None
        if args.m is not None or args.n is not None:
            if args.m is None or args.n is None:
                raise ScenarioError("--m and --n must be given together")
            shape = NetworkShape(args.m, args.n)
        state = named_state(args.state, shape)
        sigma = parse_sigma(args.sigma, state.shape.n)
        report = classify(state, sigma, tol)
        results.append({"state": args.state, "sigma": args.sigma,
                        "report": report.as_dict()})

    for item in results:
        r = item["report"]
        flags = " ".join(f"{k}={'yes' if r[k] else 'no'}"
                         for k in ("sigma_ec", "rsc", "ssc", "smc"))
        print(f"{item['state']:>10s} | {flags} | ssc_gap={r['ssc_gap']:.3e} "
              f"smc_defect={r['smc_defect']:.3e}")
    if args.out:
        payload = {"tolerance": tol, "results": results, "tool_version": TOOL_VERSION}
        write_json(Path(args.out), payload)
    return 0


def cmd_evolve(args) -> int:
    started = time.monotonic()
    scenario = load_scenario(args.scenario)
    out_dir = resolve_out_dir(scenario.out_directory, args.out_dir)
    stem = scenario.stem
    rho0 = scenario.initial_state()
    sigma = scenario.sigma()

    from .gossip import evolve
    record, final = evolve(rho0, scenario.graph, scenario.config, sigma)

    star = twirl(rho0)
    final_distance = frobenius_distance(final.matrix, star.matrix)
    manifest_name = _finish_manifest(out_dir, stem, scenario, "evolve",
                                     started, record.termination)
    m = scenario.shape.m
    header = (["t", "edge"] + [f"z_{i}" for i in range(1, m + 1)]
              + ["S_expect", "ssc_gap", "smc_defect"])
    write_csv(out_dir / f"{stem}_trajectory.csv", header,
              _trajectory_rows(record), manifest_name)
    summary = {
        "steps_performed": record.steps,
        "termination": record.termination,
        "strategy": record.strategy,
        "alpha": record.alpha,
        "s_expect_initial": float(record.s_expect[0]),
        "s_expect_final": float(record.s_expect[-1]),
        "final_ssc_gap": float(record.ssc_gap[-1]),
        "final_smc_defect": float(record.smc_defect[-1]),
        "final_distance_to_twirl": final_distance,
        "tool_version": TOOL_VERSION,
    }
    write_json(out_dir / f"{stem}_summary.json", summary, manifest_name)
    print(f"evolve: {record.steps} steps, final ssc_gap "
          f"{record.ssc_gap[-1]:.3e}, outputs in {out_dir}")
    return 0


def cmd_spectrum(args) -> int:
    started = time.monotonic()
    scenario = load_scenario(args.scenario)
    out_dir = resolve_out_dir(scenario.out_directory, args.out_dir)
    stem = scenario.stem
    alpha = scenario.config.alpha

    sop = synchronous_superoperator(scenario.graph, alpha)
    cert = spectral_certificate(sop, q0=1.0 - alpha)
    dim, _basis = fixed_point_space(scenario.graph, alpha)
    manifest_name = _finish_manifest(
        out_dir, stem, scenario, "spectrum", started,
        "certificate_passed" if cert.passed else "certificate_failed")
    payload = {
        "alpha": alpha,
        "q0": cert.q0,
        "eigenvalues": [[float(ev.real), float(ev.imag)]
                        for ev in np.sort_complex(cert.eigenvalues)],
        "disk_ok": bool(cert.disk_ok),
        "max_disk_violation": float(cert.max_disk_violation),
        "max_imag": float(cert.max_imag),
        "unit_eigenvalue_count": int(cert.unit_eigenvalue_count),
        "spectral_gap": float(cert.spectral_gap),
        "fixed_space_dimension": int(dim),
        "tool_version": TOOL_VERSION,
    }
    write_json(out_dir / f"{stem}_spectrum.json", payload, manifest_name)
    print(f"spectrum: {payload['unit_eigenvalue_count']} unit eigenvalues, "
          f"fixed space dimension {dim}, gap {cert.spectral_gap:.6f}")
    if not cert.passed:
        raise CertificateError(
            f"eigenvalue disk violated by {cert.max_disk_violation:.3e}")
    return 0


def cmd_correspond(args) -> int:
    started = time.monotonic()
    scenario = load_scenario(args.scenario)
    out_dir = resolve_out_dir(scenario.out_directory, args.out_dir)
    stem = scenario.stem
    result = correspondence_run(scenario.initial_state(), scenario.sigma(),
                                scenario.graph, scenario.config)
    manifest_name = _finish_manifest(out_dir, stem, scenario, "correspond",
                                     started, result.quantum.termination)
    m = scenario.shape.m
    header = (["t", "edge"] + [f"z_{i}" for i in range(1, m + 1)]
              + ["S_expect", "ssc_gap", "smc_defect"])
    write_csv(out_dir / f"{stem}_trajectory.csv", header,
              _trajectory_rows(result.quantum), manifest_name)
    cheader = ["t", "edge"] + [f"x_{i}" for i in range(1, m + 1)] + ["W"]
    crows = [[0, ""] + list(result.classical.x[0, :, 0])
             + [result.classical.disagreement[0]]]
    for t in range(1, len(result.classical.x)):
        crows.append([t, _edge_label(result.classical.edges[t - 1])]
                     + list(result.classical.x[t, :, 0])
                     + [result.classical.disagreement[t]])
    write_csv(out_dir / f"{stem}_classical.csv", cheader, crows, manifest_name)
    payload = {
        "max_deviation": result.max_deviation,
        "classical_limit_deviation": result.classical_limit_deviation,
        "initial_mean": float(result.quantum.z[0].mean()),
        "steps": result.quantum.steps,
        "tool_version": TOOL_VERSION,
    }
    write_json(out_dir / f"{stem}_correspondence.json", payload, manifest_name)
    print(f"correspond: max quantum/classical deviation {result.max_deviation:.3e}")
    return 0


def cmd_nogo(args) -> int:
    report = nogo_check(args.n)
    payload = dict(report.as_dict())
    payload["tool_version"] = TOOL_VERSION
    verdict = "feasible" if report.feasible else "infeasible"
    print(f"nogo: n={report.n} lambda_max={report.lambda_max:.12f} ({verdict})")
    if report.triple_pauli_fixed_dim is not None:
        print(f"nogo: triple-Pauli joint fixed space dimension "
              f"{report.triple_pauli_fixed_dim}")
    if args.out:
        write_json(Path(args.out), payload)
    return 0


def cmd_ensemble(args) -> int:
    started = time.monotonic()
    scenario = load_scenario(args.scenario)
    out_dir = resolve_out_dir(scenario.out_directory, args.out_dir)
    stem = scenario.stem
    seed = scenario.config.seed
    if seed is None:
        raise ScenarioError("gossip.seed: the ensemble experiment needs a seed")
    experiment = probability_one_convergence_experiment(
        scenario.graph, scenario.config.alpha, scenario.initial_state(),
        eps=args.eps, num_trials=args.trials, horizon=args.horizon, seed=seed)
    manifest_name = _finish_manifest(out_dir, stem, scenario, "ensemble",
                                     started, "completed")
    payload = dict(experiment.as_dict())
    payload["tool_version"] = TOOL_VERSION
    write_json(out_dir / f"{stem}_ensemble.json", payload, manifest_name)
    print(f"ensemble: {experiment.successes}/{experiment.num_trials} trials "
          f"within eps={experiment.eps:g} at horizon {experiment.horizon}")
    return 0


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgossip",
        description="Classify, evolve, and certify gossip consensus on "
                    "networks of quantum subsystems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="consensus classification of a state")
    p.add_argument("--state", help="rhoA..rhoG, digit string, or random:<seed>")
    p.add_argument("--sigma", help="x, y, z, identity")
    p.add_argument("--suite", help="JSON suite of {state, sigma} entries")
    p.add_argument("--m", type=int, help="number of subsystems")
    p.add_argument("--n", type=int, help="local dimension")
    p.add_argument("--tol", type=float, default=1e-8,
                   help="classification tolerance (default 1e-8)")
    p.add_argument("--out", help="write the JSON report here")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evolve", help="run a gossip trajectory from a scenario")
    p.add_argument("scenario")
    p.add_argument("--out-dir", help="output directory override")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("spectrum", help="spectral certificate of the expected map")
    p.add_argument("scenario")
    p.add_argument("--out-dir", help="output directory override")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("correspond",
                       help="verify quantum/classical gossip correspondence")
    p.add_argument("scenario")
    p.add_argument("--out-dir", help="output directory override")
    p.set_defaults(func=cmd_correspond)

    p = sub.add_parser("nogo", help="two-observable measurement-consensus no-go")
    p.add_argument("n", type=int, help="local dimension, 2..8")
    p.add_argument("--out", help="write the JSON report here")
    p.set_defaults(func=cmd_nogo)

    p = sub.add_parser("ensemble",
                       help="random-gossip convergence probability experiment")
    p.add_argument("scenario")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--horizon", type=int, default=500)
    p.add_argument("--eps", type=float, default=1e-10)
    p.add_argument("--out-dir", help="output directory override")
    p.set_defaults(func=cmd_ensemble)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if (exc.code or 0) == 0 else 1
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"error (resource cap): {exc}", file=sys.stderr)
        return 3
    except (CertificateError, ConsistencyError) as exc:
        print(f"error (certificate): {exc}", file=sys.stderr)
        return 2
    except (ScenarioError, ValidationError, ValueError) as exc:
        print(f"error (validation): {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
