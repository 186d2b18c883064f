"""File formats: graph edge lists, JSON run configs, time-series output.

Graph files are plain text: the first significant line is `n <count>`,
every following line one `src dst weight` triple; `#` starts a comment and
blank lines are skipped.  Configs are JSON objects; time series go out as
CSV (one `t` column plus one column per real component, complex components
split into re_/im_ pairs) or as an equivalent JSON document.  Floats are
written with repr, so a write/read round trip reproduces them exactly.
"""

from __future__ import annotations

import json
import math
import numbers
import os
from dataclasses import dataclass

import numpy as np

from .dynamics import IntegratorConfig, Trajectory
from .echo import EchoParams, ScenarioReport
from .errors import (
    DuplicateEdge,
    IndexOutOfRange,
    InvalidValue,
    IoError,
    MissingKey,
    NonPositiveWeight,
    ParseError,
    SelfLoop,
)
from .graph import WeightedDigraph, build_graph

__all__ = [
    "EchoBlock",
    "ScenarioConfig",
    "load_graph",
    "load_config",
    "write_timeseries",
    "read_timeseries",
    "timeseries_payload",
    "write_scenario_report",
]

_DYNAMICS = ("wave", "boson", "fermion", "echo")


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except FileNotFoundError:
        raise IoError(f"{path}: file not found") from None
    except OSError as exc:
        raise IoError(f"{path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not a text file ({exc})") from exc


def load_graph(path: str) -> WeightedDigraph:
    """Parse an edge-list file into a validated graph.

    Errors carry 1-based line numbers, including the construction errors
    (self-loop, duplicate, bad weight) raised while the edges stream in.
    """
    text = _read_text(path)
    n: int | None = None
    edges: list[tuple[int, int, float]] = []
    seen: set[tuple[int, int]] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if n is None:
            if len(tokens) != 2 or tokens[0] != "n":
                raise ParseError(
                    f"{path}:{lineno}: expected header 'n <count>', got {raw.strip()!r}"
                )
            try:
                n = int(tokens[1])
            except ValueError:
                raise ParseError(
                    f"{path}:{lineno}: node count {tokens[1]!r} is not an integer"
                ) from None
            if n < 1:
                raise InvalidValue(f"{path}:{lineno}: node count must be >= 1, got {n}")
            continue

        if len(tokens) != 3:
            raise ParseError(
                f"{path}:{lineno}: expected 'src dst weight', got {raw.strip()!r}"
            )
        try:
            src, dst = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(
                f"{path}:{lineno}: endpoints must be integers, got {raw.strip()!r}"
            ) from None
        try:
            w = float(tokens[2])
        except ValueError:
            raise ParseError(
                f"{path}:{lineno}: weight {tokens[2]!r} is not a number"
            ) from None

        # Validate inline so errors name the offending line.
        if not (0 <= src < n and 0 <= dst < n):
            raise IndexOutOfRange(
                f"{path}:{lineno}: edge ({src}, {dst}) outside node range 0..{n - 1}"
            )
        if src == dst:
            raise SelfLoop(f"{path}:{lineno}: self-loop at node {src}")
        if not (math.isfinite(w) and w > 0):
            raise NonPositiveWeight(
                f"{path}:{lineno}: weight must be a positive finite real, got {w!r}"
            )
        if (src, dst) in seen:
            raise DuplicateEdge(
                f"{path}:{lineno}: edge ({src}, {dst}) listed more than once"
            )
        seen.add((src, dst))
        edges.append((src, dst, w))

    if n is None:
        raise ParseError(f"{path}: empty graph file (missing 'n <count>' header)")
    return build_graph(n, edges)


@dataclass(frozen=True)
class EchoBlock:
    """Echo-scenario settings inside a run config."""

    cluster: tuple[int, ...]
    w_sat: float
    lock_tol: float = 0.05
    dwell: float = 5.0
    theta0: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class ScenarioConfig:
    """One simulation run as described by a JSON config file."""

    graph_path: str
    dynamics: str
    t_end: float
    dt: float = 1e-3
    record_every: int = 10
    scheme: str = "rk4"
    initial: dict | str | None = None
    seed: int | None = None
    echo: EchoBlock | None = None

    def integrator_config(self) -> IntegratorConfig:
        return IntegratorConfig(
            dt=self.dt,
            t_end=self.t_end,
            scheme=self.scheme,
            record_every=self.record_every,
        )


def _require(data: dict, key: str, path: str):
    if key not in data:
        raise MissingKey(f"{path}: missing key '{key}'")
    return data[key]


def _as_number(value, key: str, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise InvalidValue(f"{path}: '{key}' must be a number, got {value!r}")
    return float(value)


def _as_int(value, key: str, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise InvalidValue(f"{path}: '{key}' must be an integer, got {value!r}")
    return int(value)


def _parse_echo_block(data, path: str) -> EchoBlock:
    if not isinstance(data, dict):
        raise InvalidValue(f"{path}: 'echo' must be an object")
    allowed = {"cluster", "w_sat", "lock_tol", "dwell", "theta0"}
    unknown = set(data) - allowed
    if unknown:
        raise InvalidValue(f"{path}: unknown echo key(s) {sorted(unknown)}")
    cluster_raw = _require(data, "cluster", path)
    if not isinstance(cluster_raw, list) or len(cluster_raw) < 2:
        raise InvalidValue(f"{path}: 'cluster' must list at least two nodes")
    cluster = tuple(_as_int(v, "cluster", path) for v in cluster_raw)
    w_sat = _as_number(_require(data, "w_sat", path), "w_sat", path)
    if w_sat <= 0:
        raise InvalidValue(f"{path}: 'w_sat' must be positive, got {w_sat}")
    lock_tol = _as_number(data.get("lock_tol", 0.05), "lock_tol", path)
    dwell = _as_number(data.get("dwell", 5.0), "dwell", path)
    if lock_tol <= 0:
        raise InvalidValue(f"{path}: 'lock_tol' must be positive, got {lock_tol}")
    if dwell <= 0:
        raise InvalidValue(f"{path}: 'dwell' must be positive, got {dwell}")
    theta0_raw = data.get("theta0", [0.0, 0.0, 0.0, 0.0])
    if not isinstance(theta0_raw, list) or len(theta0_raw) != 4:
        raise InvalidValue(
            f"{path}: 'theta0' must be [re+, im+, re-, im-], got {theta0_raw!r}"
        )
    theta0 = tuple(_as_number(v, "theta0", path) for v in theta0_raw)
    return EchoBlock(cluster, w_sat, lock_tol, dwell, theta0)


def load_config(path: str) -> ScenarioConfig:
    """Parse and validate a JSON run config.

    Required keys: graph, dynamics, t_end (echo additionally for
    dynamics = "echo").  Optional: dt, record_every, scheme, initial, seed.
    Unknown keys are rejected so typos fail loudly.
    """
    text = _read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: config root must be a JSON object")

    allowed = {
        "graph", "dynamics", "t_end", "dt", "record_every",
        "scheme", "initial", "seed", "echo",
    }
    unknown = set(data) - allowed
    if unknown:
        raise InvalidValue(f"{path}: unknown key(s) {sorted(unknown)}")

    graph_path = _require(data, "graph", path)
    if not isinstance(graph_path, str):
        raise InvalidValue(f"{path}: 'graph' must be a file path string")
    if not os.path.exists(graph_path):
        raise IoError(f"{path}: graph file not found: {graph_path}")

    dynamics = _require(data, "dynamics", path)
    if dynamics not in _DYNAMICS:
        raise InvalidValue(
            f"{path}: 'dynamics' must be one of {list(_DYNAMICS)}, got {dynamics!r}"
        )

    t_end = _as_number(_require(data, "t_end", path), "t_end", path)
    dt = _as_number(data.get("dt", 1e-3), "dt", path)
    record_every = _as_int(data.get("record_every", 10), "record_every", path)
    scheme = data.get("scheme", "rk4")
    if not isinstance(scheme, str):
        raise InvalidValue(f"{path}: 'scheme' must be a string")

    initial = data.get("initial")
    if initial is not None and not isinstance(initial, (dict, str)):
        raise InvalidValue(f"{path}: 'initial' must be an object or a file path")
    if isinstance(initial, str) and not os.path.exists(initial):
        raise IoError(f"{path}: initial-state file not found: {initial}")

    seed = data.get("seed")
    if seed is not None:
        seed = _as_int(seed, "seed", path)

    echo = None
    if dynamics == "echo":
        echo = _parse_echo_block(_require(data, "echo", path), path)
    elif "echo" in data:
        raise InvalidValue(f"{path}: 'echo' only applies when dynamics is 'echo'")

    cfg = ScenarioConfig(
        graph_path=graph_path,
        dynamics=dynamics,
        t_end=t_end,
        dt=dt,
        record_every=record_every,
        scheme=scheme,
        initial=initial,
        seed=seed,
        echo=echo,
    )
    cfg.integrator_config()  # validate dt / t_end / scheme / record_every now
    return cfg


def _columns(traj: Trajectory) -> tuple[list[str], list[np.ndarray]]:
    states = np.asarray(traj.states)
    meta = traj.meta
    comp = list(meta.get("components", [f"c_{j}" for j in range(states.shape[1])]))
    names: list[str] = []
    cols: list[np.ndarray] = []
    if np.iscomplexobj(states):
        for j, name in enumerate(comp):
            names += [f"re_{name}", f"im_{name}"]
            cols += [states[:, j].real, states[:, j].imag]
    else:
        for j, name in enumerate(comp):
            names.append(name)
            cols.append(states[:, j].astype(np.float64))

    if meta.get("equation") == "theta":
        p = EchoParams(int(meta["n"]), float(meta["w"]))
        im_sum = states[:, 0].imag + states[:, 1].imag
        with np.errstate(over="ignore"):
            c_plus = p.coupling * np.exp(-im_sum)
            c_minus = p.coupling * np.exp(im_sum)
            amp_plus = np.exp(states[:, 0].imag)
            amp_minus = np.exp(-states[:, 1].imag)
        s = states[:, 0].real + states[:, 1].real
        names += ["c_plus", "c_minus", "s", "amp_plus", "amp_minus"]
        cols += [c_plus, c_minus, s, amp_plus, amp_minus]
    return names, cols


def timeseries_payload(traj: Trajectory) -> dict:
    """JSON-ready dict with meta, times, and named columns."""
    names, cols = _columns(traj)
    return {
        "meta": _json_safe(traj.meta),
        "t": [float(v) for v in traj.times],
        "columns": {
            name: [float(v) for v in col] for name, col in zip(names, cols)
        },
    }


def _json_safe(value):
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_json_safe(v) for v in value.tolist()]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value


def write_timeseries(traj: Trajectory, path: str, fmt: str = "csv") -> None:
    """Write a trajectory as CSV or JSON.

    Theta trajectories additionally carry the derived c_plus, c_minus, s,
    amp_plus, amp_minus columns.  Identical trajectories always serialize
    to identical bytes.
    """
    fmt = fmt.lower()
    if fmt not in ("csv", "json"):
        raise InvalidValue(f"format must be 'csv' or 'json', got {fmt!r}")
    try:
        if fmt == "csv":
            names, cols = _columns(traj)
            lines = [",".join(["t"] + names)]
            for k in range(len(traj)):
                row = [repr(float(traj.times[k]))]
                row += [repr(float(col[k])) for col in cols]
                lines.append(",".join(row))
            payload = "\n".join(lines) + "\n"
        else:
            payload = json.dumps(timeseries_payload(traj), indent=2) + "\n"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(payload)
    except OSError as exc:
        raise IoError(f"{path}: {exc}") from exc


def read_timeseries(path: str) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """Read back a CSV or JSON time series: (times, {column: values})."""
    text = _read_text(path)
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON ({exc})") from exc
        try:
            times = np.asarray(data["t"], dtype=np.float64)
            columns = {
                str(k): np.asarray(v, dtype=np.float64)
                for k, v in data["columns"].items()
            }
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{path}: malformed time-series JSON ({exc})") from exc
        return times, columns

    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError(f"{path}: empty time-series file")
    header = lines[0].split(",")
    if header[0] != "t":
        raise ParseError(f"{path}: first CSV column must be 't', got {header[0]!r}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        tokens = line.split(",")
        if len(tokens) != len(header):
            raise ParseError(
                f"{path}:{lineno}: expected {len(header)} fields, got {len(tokens)}"
            )
        try:
            rows.append([float(tok) for tok in tokens])
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from None
    table = np.asarray(rows, dtype=np.float64).reshape(len(rows), len(header))
    times = table[:, 0]
    columns = {name: table[:, j + 1] for j, name in enumerate(header[1:])}
    return times, columns


def _graph_summary(g: WeightedDigraph) -> dict:
    return {"n": g.n, "num_edges": g.num_edges, "fingerprint": g.fingerprint()}


def write_scenario_report(report: ScenarioReport, path: str) -> None:
    """Write the full echo-scenario report as one JSON document."""
    sync = report.sync
    doc = {
        "base_graph": _graph_summary(report.base),
        "detachment": {
            "node_map": list(report.detachment.node_map),
            "isolated": _graph_summary(report.detachment.isolated),
            "residual": _graph_summary(report.detachment.residual),
        },
        "echo_params": {
            "n": report.params.n,
            "w": report.params.w,
            "d": report.params.d,
            "omega2": report.params.omega2,
        },
        "block_matrix": _json_safe(report.block),
        "pre_detachment": timeseries_payload(report.pre_trajectory),
        "theta": timeseries_payload(report.theta_trajectory),
        "psi": timeseries_payload(report.psi_trajectory),
        "sync": {
            "lock_detected": sync.lock_detected,
            "lock_time": sync.lock_time,
            "growth_rate_plus": sync.growth_rate_plus,
            "growth_rate_minus": sync.growth_rate_minus,
        },
        "sparsity": {
            "fill_counts": _json_safe(report.pattern.fill_counts),
            "sqrt_is_complete": report.pattern.sqrt_is_complete,
            "h_defined": report.pattern.h_defined,
            "threshold": report.pattern.threshold,
        },
        "boson_admissible": report.boson_admissible,
    }
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise IoError(f"{path}: {exc}") from exc
