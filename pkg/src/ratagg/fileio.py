"""Topology, trace and summary serialization.

All writers are byte-deterministic for a given input: keys are sorted, floats
formatted with repr-level precision, and nothing time- or host-dependent is
emitted.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .afra import StepRecord
from .ddnum import DdnumStepRecord
from .errors import TopologyFormatError
from .model import Topology, validate_topology

AFRA_TRACE_HEADER = "step,bs_id,accepted,theta_after,potential_after,cum_messages"
DDNUM_TRACE_HEADER = "iter,bs_id,mu_after,potential_projected,cum_messages"


def jsonable(value):
    """Recursively convert numpy scalars/arrays; non-finite floats to None."""
    if isinstance(value, dict):
        return {key: jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return [jsonable(item) for item in value.tolist()]
    if isinstance(value, (np.bool_, bool)):  # before int: bool subclasses int
        return bool(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (np.integer, int)):
        return int(value)
    return value


def save_topology(topo: Topology, path) -> None:
    doc = {
        "clients": [
            {"id": i, "weight": float(topo.weights[i])} for i in range(topo.num_clients)
        ],
        "bss": [{"id": j, "tech": topo.bs_tech[j]} for j in range(topo.num_bss)],
        "rates": [[float(x) for x in row] for row in topo.rates],
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise TopologyFormatError(message)


def load_topology(path) -> Topology:
    """Parse and validate a topology file; any defect raises TopologyError."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise TopologyFormatError(f"cannot read topology file {path}: {exc}") from exc
    _require(isinstance(doc, dict), "topology document must be a JSON object")
    for key in ("clients", "bss", "rates"):
        _require(key in doc, f"topology document is missing '{key}'")
        _require(isinstance(doc[key], list), f"'{key}' must be a list")
    clients, bss, rates = doc["clients"], doc["bss"], doc["rates"]
    _require(len(clients) >= 1, "need at least one client")
    _require(len(bss) >= 1, "need at least one BS")
    weights = []
    for i, entry in enumerate(clients):
        _require(
            isinstance(entry, dict) and entry.get("id") == i,
            f"clients[{i}] must carry id {i}",
        )
        _require(
            isinstance(entry.get("weight"), (int, float)),
            f"clients[{i}] needs a numeric weight",
        )
        weights.append(float(entry["weight"]))
    tech = []
    for j, entry in enumerate(bss):
        _require(
            isinstance(entry, dict) and entry.get("id") == j,
            f"bss[{j}] must carry id {j}",
        )
        tech.append(str(entry.get("tech", "unknown")))
    _require(len(rates) == len(clients), "rates must have one row per client")
    matrix = []
    for i, row in enumerate(rates):
        _require(
            isinstance(row, list) and len(row) == len(bss),
            f"rates[{i}] must have one entry per BS",
        )
        _require(
            all(isinstance(x, (int, float)) for x in row),
            f"rates[{i}] must be numeric",
        )
        matrix.append([float(x) for x in row])
    topo = Topology(rates=np.array(matrix), weights=np.array(weights), bs_tech=tuple(tech))
    return validate_topology(topo)


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def write_afra_trace(trace, path) -> None:
    lines = [AFRA_TRACE_HEADER]
    cum = 0
    for rec in trace:
        assert isinstance(rec, StepRecord)
        cum += rec.messages
        lines.append(
            f"{rec.step},{rec.bs_id},{str(rec.accepted).lower()},"
            f"{_fmt(rec.theta_after)},{_fmt(rec.potential_after)},{cum}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_ddnum_trace(trace, path) -> None:
    lines = [DDNUM_TRACE_HEADER]
    for rec in trace:
        assert isinstance(rec, DdnumStepRecord)
        lines.append(
            f"{rec.iteration},{rec.bs_id},{_fmt(rec.mu_after)},"
            f"{_fmt(rec.potential_projected)},{rec.cum_messages}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_summary(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(jsonable(doc), indent=2, sort_keys=True) + "\n")


def summary_text(doc: dict) -> str:
    return json.dumps(jsonable(doc), indent=2, sort_keys=True)
