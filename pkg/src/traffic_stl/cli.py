"""``traffic-stl`` command line.

Exit codes: 0 success (and, for ``monitor``, every trace conforms), 1 some
trace violates, 2 any error.
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

from . import io
from .exceptions import ConfigError, ParameterError, TrafficSTLError
from .signals import DEFAULT_ALPHA, exp_smooth
from .sim import ScenarioConfig, load_config, run_scenario
from .specs import (
    DEFAULT_STATISTIC,
    SPEC_BUILDERS,
    build_spec,
    evaluate,
    n_workers,
    summarize,
)
from .stl import Verdict, parse, to_text

log = logging.getLogger("traffic_stl")

EXIT_OK, EXIT_VIOLATION, EXIT_ERROR = 0, 1, 2


def _parse_params(pairs) -> dict:
    out = {}
    for item in pairs or ():
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ParameterError(f"--param expects key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def _safe_name(vehicle_id: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in vehicle_id)


def cmd_simulate(args) -> int:
    config = load_config(args.config) if args.config else ScenarioConfig()
    if args.seed is not None:
        config = replace(config, rng_seed=args.seed)
    if args.comm is not None:
        config = replace(config, comm_enabled=args.comm)
    if config.n_vehicles == 0:
        raise ConfigError("empty scenario: n_vehicles is 0", path=args.config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    traces = run_scenario(config)
    digest = hashlib.sha256()
    for tr in traces:
        path = out / f"{_safe_name(tr.vehicle_id)}.csv"
        io.write_trajectory_csv(path, [tr])
        digest.update(path.read_bytes())
    summary = {
        "vehicle_count": len(traces),
        "collision_free": True,
        "seed": config.rng_seed,
        "comm_enabled": config.comm_enabled,
        "duration": config.duration,
        "dt": config.dt,
        "comm_range": config.comm_range,
        "tx_power_mw": config.tx_power_mw,
        "min_power_dbm": config.min_power_dbm,
        "traces_sha256": digest.hexdigest(),
    }
    io.write_json(out / "scenario.json", summary)
    print(f"wrote {len(traces)} traces to {out}")
    return EXIT_OK


def _load_formula(args):
    if args.formula_file:
        text = Path(args.formula_file).read_text(encoding="utf-8")
        return "custom", parse(text.strip())
    if args.spec not in SPEC_BUILDERS:
        raise ParameterError(
            f"unknown spec {args.spec!r}; available specs: {', '.join(sorted(SPEC_BUILDERS))}"
        )
    return args.spec, build_spec(args.spec, _parse_params(args.param))


def cmd_monitor(args) -> int:
    spec_name, formula = _load_formula(args)
    src = Path(args.traces)
    files = sorted(src.glob("*.csv")) if src.is_dir() else [src]
    if not files:
        raise ParameterError(f"no trajectory CSV files in {src}")
    jobs = []
    for f in files:
        for tr in io.read_trajectory_csv(f):
            jobs.append((f, tr))
    if spec_name == "offramp":
        jobs = [(f, tr) for f, tr in jobs if tr["on_offramp"].values.max() > 0]
        if not jobs:
            print("no off-ramp trajectories to monitor")
            return EXIT_OK
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    def run(job):
        f, tr = job
        return evaluate(formula, tr, smooth=not args.no_smooth, alpha=args.alpha)

    with ThreadPoolExecutor(max_workers=n_workers()) as pool:
        verdicts: list[Verdict] = list(pool.map(run, jobs))
    violating = 0
    for (f, tr), verdict in zip(jobs, verdicts):
        stem = _safe_name(tr.vehicle_id)
        io.write_verdict_csv(out / f"{stem}.verdict.csv", verdict)
        payload = verdict.to_dict()
        payload["spec"] = spec_name
        payload["trace_file"] = str(f.resolve())
        io.write_json(out / f"{stem}.verdict.json", payload)
        violating += not verdict.satisfied
    print(
        f"{len(verdicts)} traces against {spec_name}: "
        f"{len(verdicts) - violating} conforming, {violating} violating"
    )
    log.info("formula: %s", to_text(formula))
    return EXIT_VIOLATION if violating else EXIT_OK


def cmd_stats(args) -> int:
    src = Path(args.verdicts)
    files = sorted(src.glob("*.verdict.json"))
    if not files:
        raise ParameterError(f"no verdict files (*.verdict.json) in {src}")
    cache = {}
    traces, flags, specs = [], [], set()
    for f in files:
        payload = io.read_json(f)
        trace_file = payload["trace_file"]
        if trace_file not in cache:
            cache[trace_file] = {t.vehicle_id: t for t in io.read_trajectory_csv(trace_file)}
        traces.append(cache[trace_file][payload["vehicle_id"]])
        flags.append(bool(payload["satisfied"]))
        specs.add(payload.get("spec", "custom"))
    spec_name = specs.pop() if len(specs) == 1 else "mixed"
    channel = args.channel or DEFAULT_STATISTIC.get(spec_name, "speed")

    class _Flag:  # summarize() only needs .satisfied
        def __init__(self, ok):
            self.satisfied = ok

    report = summarize(traces, [_Flag(ok) for ok in flags], channel, spec_name)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    json_path = out if out.suffix != ".csv" else out.with_suffix(".json")
    csv_path = out.with_suffix(".csv")
    io.write_json(json_path, report.to_dict())
    io.write_report_csv(csv_path, report)
    c, v = report.conforming, report.violating
    print(f"{spec_name}: {c.volume} conforming, {v.volume} violating -> {json_path}, {csv_path}")
    return EXIT_OK


def cmd_smooth(args) -> int:
    traces = io.read_trajectory_csv(args.input)
    chans = [c.strip() for c in args.channels.split(",") if c.strip()]
    smoothed = [
        tr.with_channels(**{c: exp_smooth(tr[c], args.alpha) for c in chans}) for tr in traces
    ]
    io.write_trajectory_csv(args.out, smoothed)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="traffic-stl", description="STL monitoring of vehicle trajectories."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the IDM/V2V scenario and write trace CSVs")
    p.add_argument("--config", help="flat key = value scenario file (defaults if omitted)")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    comm = p.add_mutually_exclusive_group()
    comm.add_argument("--comm", dest="comm", action="store_true", default=None)
    comm.add_argument("--no-comm", dest="comm", action="store_false")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("monitor", help="monitor traces against a spec")
    p.add_argument("--traces", required=True, help="trace CSV file or directory")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--spec", help=f"one of: {', '.join(sorted(SPEC_BUILDERS))}")
    which.add_argument("--formula-file")
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--no-smooth", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_monitor)

    p = sub.add_parser("stats", help="conforming vs violating report from verdicts")
    p.add_argument("--verdicts", required=True)
    p.add_argument("--channel")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("smooth", help="exponentially smooth channels of a trace CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--channels", default="speed")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_smooth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (TrafficSTLError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
