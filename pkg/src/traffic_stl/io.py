"""Reading and writing trajectory CSVs, verdicts and conformance reports.

Trajectory CSV: one row per vehicle per time step, header
``t,vehicle_id,x,speed,headway,leader_id,on_offramp``; UTF-8, LF line
endings. ``headway`` is -1 and ``leader_id`` empty when there is no leader.
"""

from __future__ import annotations

import csv
import json
import math
from collections import defaultdict
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exceptions import SchemaError
from .signals import CONSTANT, LINEAR, NO_LEADER, Signal, Trace
from .specs import ConformanceReport
from .stl import Verdict

TRAJECTORY_HEADER = ("t", "vehicle_id", "x", "speed", "headway", "leader_id", "on_offramp")
VERDICT_HEADER = ("t", "robustness", "satisfaction")
REPORT_HEADER = ("Measure", "Conforming trajectories", "Violating trajectories")

_NUMERIC = ("x", "speed", "headway")


def format_time(t: float) -> str:
    """Seconds with at least three decimals and no float noise."""
    text = f"{t:.9f}".rstrip("0")
    whole, _, frac = text.partition(".")
    return f"{whole}.{frac.ljust(3, '0')}"


def _num(x: float) -> str:
    return repr(float(x))


def trajectory_rows(trace: Trace) -> Iterable[list[str]]:
    t = trace.grid
    x = trace["x"].values_at(t) if "x" in trace else np.full(t.shape, np.nan)
    v = trace["speed"].values_at(t)
    h = trace["headway"].values_at(t) if "headway" in trace else np.full(t.shape, NO_LEADER)
    ramp = trace["on_offramp"].values_at(t) if "on_offramp" in trace else np.zeros(t.shape)
    leaders = trace.labels.get("leader_id") or ("",) * t.size
    for k in range(t.size):
        yield [
            format_time(t[k]),
            trace.vehicle_id,
            _num(x[k]),
            _num(v[k]),
            _num(h[k]),
            leaders[k],
            str(int(ramp[k])),
        ]


def write_trajectory_csv(path, traces: Sequence[Trace]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRAJECTORY_HEADER)
        for tr in traces:
            w.writerows(trajectory_rows(tr))


def _float(value: str, column: str, path, line) -> float:
    try:
        out = float(value)
    except ValueError:
        raise SchemaError(f"column {column!r}: {value!r} is not a number", path, line) from None
    if math.isnan(out):
        raise SchemaError(f"column {column!r} is NaN", path, line)
    return out


def read_trajectory_csv(path) -> list[Trace]:
    """Parse a trajectory CSV into one trace per ``vehicle_id`` (first-seen order)."""
    path = Path(path)
    rows = defaultdict(list)
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise SchemaError("file is empty", path, 1)
        if tuple(h.strip() for h in header) != TRAJECTORY_HEADER:
            raise SchemaError(
                f"header must be {','.join(TRAJECTORY_HEADER)}, got {','.join(header)}", path, 1
            )
        for line, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(TRAJECTORY_HEADER):
                raise SchemaError(
                    f"expected {len(TRAJECTORY_HEADER)} fields, got {len(rec)}", path, line
                )
            t = _float(rec[0], "t", path, line)
            vid = rec[1]
            if not vid:
                raise SchemaError("empty vehicle_id", path, line)
            vals = [_float(rec[i], name, path, line) for i, name in ((2, "x"), (3, "speed"), (4, "headway"))]
            ramp = rec[6].strip()
            if ramp not in ("0", "1"):
                raise SchemaError(f"on_offramp must be 0 or 1, got {ramp!r}", path, line)
            series = rows[vid]
            if series and t <= series[-1][0]:
                raise SchemaError(
                    f"time {t} for {vid!r} does not increase (previous {series[-1][0]})", path, line
                )
            series.append((t, *vals, rec[5], float(ramp)))
    if not rows:
        raise SchemaError("no data rows", path, 2)
    traces = []
    for vid, series in rows.items():
        t, x, v, h, leader, ramp = zip(*series)
        chans = {
            "x": Signal(t, x, LINEAR, "m"),
            "speed": Signal(t, v, LINEAR, "m/s"),
            "headway": Signal(t, h, CONSTANT, "s"),
            "on_offramp": Signal(t, ramp, CONSTANT),
        }
        traces.append(Trace(vid, chans, {"leader_id": tuple(leader)}))
    return traces


def read_traces(path) -> list[Trace]:
    """All traces in a CSV file or in every ``*.csv`` of a directory (sorted by name)."""
    path = Path(path)
    if path.is_dir():
        files = sorted(p for p in path.glob("*.csv"))
        if not files:
            raise SchemaError("no .csv trajectory files found", path)
        out = []
        for f in files:
            out.extend(read_trajectory_csv(f))
        return out
    return read_trajectory_csv(path)


def write_verdict_csv(path, verdict: Verdict) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(VERDICT_HEADER)
        rho, sat = verdict.robustness, verdict.satisfaction
        for t, r, s in zip(rho.times.tolist(), rho.values.tolist(), sat.values.tolist()):
            w.writerow([format_time(t), _num(r), str(int(s))])


def write_json(path, payload: dict) -> None:
    # robustness may be +/-inf (masked predicates); Python's json round-trips it
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=False) + "\n", encoding="utf-8")


def read_json(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_report_csv(path, report: ConformanceReport) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REPORT_HEADER)
        w.writerows(report.rows())
