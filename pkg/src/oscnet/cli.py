"""Command-line interface.

Subcommands: analyze (spectral report for a graph file), simulate (run a
configured integration), echo (cluster phase dynamics, config-driven or
from --n/--w), sweep (lock diagnostics over a parameter grid).  Exit codes:
0 success, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .dynamics import (
    DoubledState,
    IntegratorConfig,
    RealState,
    integrate_boson,
    integrate_fermion,
    integrate_wave,
)
from .echo import (
    EchoParams,
    PhaseState,
    integrate_phase,
    run_scenario,
    sweep_lock,
    sync_diagnostics,
)
from .errors import (
    InvalidValue,
    IoError,
    MissingKey,
    NumericalError,
    ParseError,
    ValidationError,
)
from .graph import laplacian_set
from .io import (
    ScenarioConfig,
    load_config,
    load_graph,
    write_scenario_report,
    write_timeseries,
)
from .spectral import (
    PATTERN_THRESHOLD,
    REALNESS_TOL,
    check_real_spectrum,
    eigen_decompose,
    principal_sqrt,
    sparsity_report,
)


class _Parser(argparse.ArgumentParser):
    # Usage mistakes are validation errors (exit 1), not argparse's exit 2.
    def error(self, message):
        raise InvalidValue(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="oscnet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="spectral and sparsity report for a graph")
    p.add_argument("--graph", required=True, help="edge-list file")
    p.add_argument("--out", help="output JSON path (default: stdout)")
    p.add_argument("--threshold", type=float, default=PATTERN_THRESHOLD,
                   help="structural-zero threshold for sparsity patterns")
    p.add_argument("--realness-tol", type=float, default=REALNESS_TOL,
                   help="absolute tolerance for calling an eigenvalue real")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("simulate", help="run the dynamics described by a config")
    p.add_argument("--config", required=True, help="JSON run config")
    p.add_argument("--out", required=True, help="output file")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("echo", help="cluster phase dynamics")
    p.add_argument("--config", help="JSON run config with dynamics = echo")
    p.add_argument("--n", type=int, help="cluster size (without --config)")
    p.add_argument("--w", type=float, help="saturated weight (without --config)")
    p.add_argument("--t-end", type=float, help="integration horizon")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--record-every", type=int, default=10)
    p.add_argument("--theta0", type=float, nargs=4, default=(0.0, 0.0, 0.0, 0.0),
                   metavar=("RE+", "IM+", "RE-", "IM-"))
    p.add_argument("--lock-tol", type=float, default=0.05)
    p.add_argument("--dwell", type=float, default=5.0)
    p.add_argument("--out", required=True, help="output file")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_echo)

    p = sub.add_parser("sweep", help="lock diagnostics over a parameter grid")
    p.add_argument("--n-grid", required=True, help="comma-separated cluster sizes")
    p.add_argument("--w-grid", required=True, help="comma-separated weights")
    p.add_argument("--s0-grid", default="0", help="initial phase sums")
    p.add_argument("--m0-grid", default="0", help="initial imaginary sums")
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--record-every", type=int, default=10)
    p.add_argument("--lock-tol", type=float, default=0.05)
    p.add_argument("--dwell", type=float, default=5.0)
    p.add_argument("--jobs", type=int, default=None, help="worker threads")
    p.add_argument("--out", required=True, help="output CSV")
    p.set_defaults(func=_cmd_sweep)

    return parser


def _write_json(doc: dict, out: str | None) -> None:
    payload = json.dumps(doc, indent=2) + "\n"
    if out:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(payload)
        except OSError as exc:
            raise IoError(f"{out}: {exc}") from exc
    else:
        sys.stdout.write(payload)


def _cmd_analyze(args) -> int:
    g = load_graph(args.graph)
    ls = laplacian_set(g)
    spectrum = eigen_decompose(ls.L)
    realness = check_real_spectrum(ls.L, tol=args.realness_tol)

    doc = {
        "n": g.n,
        "num_edges": g.num_edges,
        "fingerprint": g.fingerprint(),
        "eigenvalues": [[v.real, v.imag] for v in spectrum.eigenvalues],
        "lambda_max": spectrum.max_real,
        "all_real": realness.all_real,
        "complex_pairs": [
            [[a.real, a.imag], [b.real, b.imag]] for a, b in realness.complex_pairs
        ],
    }
    if realness.all_real:
        sq = principal_sqrt(ls.L)
        pattern = sparsity_report(ls, sq, args.threshold)
        doc["sqrt"] = {
            "residual": sq.residual,
            "is_complete": pattern.sqrt_is_complete,
        }
        doc["fill_counts"] = pattern.fill_counts
        doc["h_defined"] = pattern.h_defined
        doc["threshold"] = pattern.threshold
    else:
        doc["sqrt"] = None
    _write_json(doc, args.out)
    return 0


def _load_initial_data(initial) -> dict:
    if isinstance(initial, dict):
        return initial
    try:
        with open(initial, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise IoError(f"{initial}: file not found") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{initial}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise InvalidValue(f"{initial}: initial state must be a JSON object")
    return data


def _real_initial(cfg: ScenarioConfig, n: int) -> RealState:
    if cfg.initial is not None:
        data = _load_initial_data(cfg.initial)
        if "x" not in data:
            raise MissingKey("initial state for the wave form needs 'x'")
        x = np.asarray(data["x"], dtype=np.float64)
        v = np.asarray(data.get("v", np.zeros_like(x)), dtype=np.float64)
        return RealState(x, v)
    if cfg.seed is not None:
        rng = np.random.default_rng(cfg.seed)
        return RealState(rng.uniform(-1, 1, n), rng.uniform(-1, 1, n))
    raise MissingKey("config must provide 'initial' or 'seed'")


def _doubled_initial(cfg: ScenarioConfig, n: int) -> DoubledState:
    if cfg.initial is not None:
        data = _load_initial_data(cfg.initial)
        if "re" not in data:
            raise MissingKey("initial doubled state needs 're' (and optionally 'im')")
        re = np.asarray(data["re"], dtype=np.float64)
        im = np.asarray(data.get("im", np.zeros_like(re)), dtype=np.float64)
        if re.shape != im.shape:
            raise InvalidValue("'re' and 'im' must have the same length")
        return DoubledState(re + 1j * im)
    if cfg.seed is not None:
        rng = np.random.default_rng(cfg.seed)
        return DoubledState(
            rng.uniform(-1, 1, 2 * n) + 1j * rng.uniform(-1, 1, 2 * n)
        )
    raise MissingKey("config must provide 'initial' or 'seed'")


def _run_echo_config(cfg: ScenarioConfig, out: str, fmt: str) -> int:
    g = load_graph(cfg.graph_path)
    icfg = cfg.integrator_config()
    eb = cfg.echo
    init = _doubled_initial(cfg, g.n)
    theta0 = PhaseState(
        complex(eb.theta0[0], eb.theta0[1]), complex(eb.theta0[2], eb.theta0[3])
    )
    report = run_scenario(
        g, eb.cluster, eb.w_sat, icfg, init,
        theta0=theta0, lock_tol=eb.lock_tol, dwell=eb.dwell,
    )
    if fmt == "json":
        write_scenario_report(report, out)
    else:
        write_timeseries(report.theta_trajectory, out, "csv")
    sync = report.sync
    print(
        f"lock_detected={sync.lock_detected} lock_time={sync.lock_time} "
        f"growth_rate_plus={sync.growth_rate_plus} "
        f"growth_rate_minus={sync.growth_rate_minus}"
    )
    return 0


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    if cfg.dynamics == "echo":
        return _run_echo_config(cfg, args.out, args.format)

    g = load_graph(cfg.graph_path)
    ls = laplacian_set(g)
    icfg = cfg.integrator_config()
    extra = {"seed": cfg.seed} if cfg.seed is not None else None
    if cfg.dynamics == "wave":
        traj = integrate_wave(ls, _real_initial(cfg, g.n), icfg, extra)
    elif cfg.dynamics == "boson":
        sq = principal_sqrt(ls.L)
        traj = integrate_boson(ls, sq, _doubled_initial(cfg, g.n), icfg, extra)
    else:
        traj = integrate_fermion(ls, _doubled_initial(cfg, g.n), icfg, extra)
    write_timeseries(traj, args.out, args.format)
    return 0


def _cmd_echo(args) -> int:
    if args.config:
        cfg = load_config(args.config)
        if cfg.dynamics != "echo":
            raise InvalidValue(
                f"config dynamics is {cfg.dynamics!r}; the echo command needs 'echo'"
            )
        return _run_echo_config(cfg, args.out, args.format)

    missing = [
        flag for flag, v in (("--n", args.n), ("--w", args.w), ("--t-end", args.t_end))
        if v is None
    ]
    if missing:
        raise MissingKey(f"{', '.join(missing)} required when no --config is given")
    p = EchoParams(args.n, args.w)
    icfg = IntegratorConfig(
        dt=args.dt, t_end=args.t_end, record_every=args.record_every
    )
    theta0 = PhaseState(
        complex(args.theta0[0], args.theta0[1]),
        complex(args.theta0[2], args.theta0[3]),
    )
    traj = integrate_phase(p, theta0, icfg)
    sync = sync_diagnostics(traj, lock_tol=args.lock_tol, dwell=args.dwell)
    write_timeseries(traj, args.out, args.format)
    print(
        f"lock_detected={sync.lock_detected} lock_time={sync.lock_time} "
        f"growth_rate_plus={sync.growth_rate_plus} "
        f"growth_rate_minus={sync.growth_rate_minus}"
    )
    return 0


def _parse_grid(text: str, flag: str, cast) -> list:
    try:
        values = [cast(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise InvalidValue(f"{flag}: could not parse {text!r}") from None
    if not values:
        raise InvalidValue(f"{flag}: empty grid")
    return values


def _csv_cell(value) -> str:
    if value is None:
        return "nan"
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _cmd_sweep(args) -> int:
    n_values = _parse_grid(args.n_grid, "--n-grid", int)
    w_values = _parse_grid(args.w_grid, "--w-grid", float)
    s0_values = _parse_grid(args.s0_grid, "--s0-grid", float)
    m0_values = _parse_grid(args.m0_grid, "--m0-grid", float)
    icfg = IntegratorConfig(
        dt=args.dt, t_end=args.t_end, record_every=args.record_every
    )
    points = sweep_lock(
        n_values, w_values, s0_values, m0_values, icfg,
        lock_tol=args.lock_tol, dwell=args.dwell, max_workers=args.jobs,
    )
    header = (
        "n,w,s0,m0,lock_detected,lock_time,"
        "growth_rate_plus,growth_rate_minus,diverged"
    )
    lines = [header]
    for pt in points:
        lines.append(",".join([
            _csv_cell(pt.n), _csv_cell(pt.w), _csv_cell(pt.s0), _csv_cell(pt.m0),
            _csv_cell(pt.lock_detected), _csv_cell(pt.lock_time),
            _csv_cell(pt.growth_rate_plus), _csv_cell(pt.growth_rate_minus),
            _csv_cell(pt.diverged),
        ]))
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoError(f"{args.out}: {exc}") from exc
    print(f"{len(points)} grid points written to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
