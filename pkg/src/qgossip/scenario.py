"""Scenario files, run manifests, and deterministic result serialization.

A scenario is a single versioned JSON document::

    {
      "schema": 1,
      "shape": {"m": 4, "n": 2},
      "graph": {"edges": [[1, 2], [2, 3], [3, 4]], "weights": [0.25, 0.5, 0.25]},
      "gossip": {"alpha": 0.5, "strategy": "random", "steps": 300, "seed": 7},
      "initial_state": "1010",
      "sigma": "z",
      "outputs": {"directory": ".", "stem": "run"}
    }

``weights``, ``seed``, ``cycle_order``, ``stop_gap`` and ``outputs`` are
optional. Validation errors name the offending field. Every run writes a
manifest (scenario hash, tool version, seeds, wall time, termination reason)
and every output file references it: CSV files carry a leading
``# manifest:`` comment line, JSON files a "manifest" key. Identical
scenario + seed produce byte-identical CSV output; wall time lives only in
the manifest.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import ConsistencyError, ScenarioError, ValidationError
from .gossip import GossipConfig, InteractionGraph
from .linalg import NetworkShape
from .states import DensityOperator, Observable, named_state, parse_sigma

SCHEMA_VERSION = 1
TOOL_VERSION = "0.1.0"
OUT_DIR_ENV = "QGOSSIP_OUT_DIR"


def _require(mapping: dict, key: str, kind, path: str):
    if key not in mapping:
        raise ScenarioError(f"{path}.{key}: missing required field")
    value = mapping[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if kind is int and isinstance(value, bool):
        raise ScenarioError(f"{path}.{key}: expected {kind.__name__}, got bool")
    if not isinstance(value, kind):
        raise ScenarioError(
            f"{path}.{key}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def _optional(mapping: dict, key: str, kind, path: str, default=None):
    if key not in mapping or mapping[key] is None:
        return default
    return _require(mapping, key, kind, path)


@dataclass(frozen=True)
class Scenario:
    """A parsed and validated scenario plus its provenance hash."""

    shape: NetworkShape
    graph: InteractionGraph
    config: GossipConfig
    initial_state_spec: str
    sigma_spec: object
    out_directory: str
    stem: str
    sha256: str
    path: str

    def initial_state(self) -> DensityOperator:
        try:
            return named_state(self.initial_state_spec, self.shape)
        except ValidationError as exc:
            raise ScenarioError(f"initial_state: {exc}") from exc

    def sigma(self) -> Observable:
        spec = self.sigma_spec
        try:
            if isinstance(spec, dict):
                real = np.asarray(spec["real"], dtype=float)
                imag = np.asarray(spec.get("imag", np.zeros_like(real)), dtype=float)
                return parse_sigma(real + 1j * imag, self.shape.n)
            return parse_sigma(spec, self.shape.n)
        except (ValidationError, KeyError, TypeError) as exc:
            raise ScenarioError(f"sigma: {exc}") from exc

    def seeds(self) -> list[int]:
        seeds = []
        if self.config.seed is not None:
            seeds.append(int(self.config.seed))
        if self.initial_state_spec.startswith("random:"):
            seeds.append(int(self.initial_state_spec.split(":", 1)[1]))
        return seeds


def load_scenario(path) -> Scenario:
    p = Path(path)
    try:
        blob = p.read_bytes()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {p}: {exc}") from exc
    sha = hashlib.sha256(blob).hexdigest()
    try:
        data = json.loads(blob)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"not valid JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}")
    if not isinstance(data, dict):
        raise ScenarioError("scenario root must be a JSON object")

    schema = _require(data, "schema", int, "$")
    if schema != SCHEMA_VERSION:
        raise ScenarioError(
            f"$.schema: unsupported version {schema}, this tool reads {SCHEMA_VERSION}")

    shape_block = _require(data, "shape", dict, "$")
    try:
        shape = NetworkShape(_require(shape_block, "m", int, "shape"),
                             _require(shape_block, "n", int, "shape"))
    except ValidationError as exc:
        raise ScenarioError(f"shape: {exc}") from exc

    graph_block = _require(data, "graph", dict, "$")
    edges = _require(graph_block, "edges", list, "graph")
    weights = _optional(graph_block, "weights", list, "graph")
    try:
        graph = InteractionGraph(shape, edges, weights)
    except ValidationError as exc:
        raise ScenarioError(f"graph: {exc}") from exc

    gossip_block = _require(data, "gossip", dict, "$")
    alpha = _require(gossip_block, "alpha", float, "gossip")
    strategy = _require(gossip_block, "strategy", str, "gossip")
    steps = _require(gossip_block, "steps", int, "gossip")
    seed = _optional(gossip_block, "seed", int, "gossip")
    cycle_order = _optional(gossip_block, "cycle_order", list, "gossip")
    stop_gap = _optional(gossip_block, "stop_gap", float, "gossip")
    try:
        config = GossipConfig(alpha=alpha, strategy=strategy, steps=steps,
                              seed=seed,
                              cycle_order=tuple(cycle_order) if cycle_order is not None else None,
                              stop_gap=stop_gap)
        if strategy == "cyclic":
            config.resolved_cycle_order(graph)
    except ValidationError as exc:
        raise ScenarioError(f"gossip: {exc}") from exc

    state_spec = _require(data, "initial_state", str, "$")
    if "sigma" not in data:
        raise ScenarioError("$.sigma: missing required field")
    sigma_spec = data["sigma"]
    if not isinstance(sigma_spec, (str, dict)):
        raise ScenarioError("$.sigma: expected a name or a {real, imag} matrix")

    outputs = _optional(data, "outputs", dict, "$", default={})
    out_dir = _optional(outputs, "directory", str, "outputs", default=".")
    stem = _optional(outputs, "stem", str, "outputs", default=p.stem)

    scenario = Scenario(shape=shape, graph=graph, config=config,
                        initial_state_spec=state_spec, sigma_spec=sigma_spec,
                        out_directory=out_dir, stem=stem, sha256=sha,
                        path=str(p))
    # fail fast on specs that cannot build
    scenario.initial_state()
    scenario.sigma()
    return scenario


@dataclass
class RunManifest:
    """Provenance record attached to every output file of a run."""

    scenario_hash: str
    tool_version: str
    command: str
    seeds: list
    wall_time_s: float
    termination: str

    def as_dict(self) -> dict:
        return asdict(self)


def resolve_out_dir(scenario_dir: str, cli_override: str | None) -> Path:
    """Output directory precedence: CLI flag, environment, scenario, cwd."""
    if cli_override:
        chosen = cli_override
    elif os.environ.get(OUT_DIR_ENV):
        chosen = os.environ[OUT_DIR_ENV]
    else:
        chosen = scenario_dir or "."
    path = Path(chosen)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    v = float(value)
    if not math.isfinite(v):
        raise ConsistencyError("refusing to write a non-finite value")
    return format(v, ".17g")


def write_csv(path: Path, header: list[str], rows, manifest_name: str):
    """CSV with 17-significant-digit floats and a manifest reference line."""
    lines = [f"# manifest: {manifest_name}", ",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def write_json(path: Path, payload: dict, manifest_name: str | None = None):
    doc = dict(payload)
    if manifest_name is not None:
        doc["manifest"] = manifest_name
    _check_finite(doc)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _check_finite(obj):
    if isinstance(obj, dict):
        for v in obj.values():
            _check_finite(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _check_finite(v)
    elif isinstance(obj, float) and not math.isfinite(obj):
        raise ConsistencyError("refusing to write a non-finite value")


def write_manifest(path: Path, manifest: RunManifest):
    path.write_text(json.dumps(manifest.as_dict(), indent=2, sort_keys=True) + "\n")
