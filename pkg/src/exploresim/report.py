"""Artifact rendering: CSV tables, logs, and log replay.

All numeric output uses fixed decimal formatting so artifacts are byte
stable across platforms and reruns, which the golden-file and
determinism tests rely on.
"""

from __future__ import annotations

from .arena import Arena
from .errors import SimError
from .harness import AggregateRow, SweepRow, TRAJECTORY_HEADER, RunResult
from .metrics import OccupancyGrid

RUNS_CSV_HEADER = "policy,speed,detector,run,seed,coverage,detection_rate,collision,energy_j,digest"
AGGREGATE_CSV_HEADER = ("policy,speed,detector,runs,coverage_mean,coverage_var,"
                        "rate_mean,rate_var")
DETECTIONS_CSV_HEADER = "object_id,class,t_first_seen"
SERIES_CSV_HEADER = "t,coverage"


def _opt(value: float | None, fmt: str) -> str:
    return "" if value is None else format(value, fmt)


def runs_csv(rows: list[SweepRow]) -> str:
    out = [RUNS_CSV_HEADER]
    for r in rows:
        out.append(
            f"{r.policy},{r.speed:.3f},{r.detector or 'none'},{r.run},{r.seed},"
            f"{r.coverage:.6f},{_opt(r.detection_rate, '.6f')},{int(r.collision)},"
            f"{r.energy_j:.1f},{r.digest:016x}"
        )
    return "\n".join(out) + "\n"


def aggregate_csv(rows: list[AggregateRow]) -> str:
    out = [AGGREGATE_CSV_HEADER]
    for r in rows:
        out.append(
            f"{r.policy},{r.speed:.3f},{r.detector or 'none'},{r.runs},"
            f"{r.coverage_mean:.6f},{r.coverage_var:.8f},"
            f"{_opt(r.rate_mean, '.6f')},{_opt(r.rate_var, '.8f')}"
        )
    return "\n".join(out) + "\n"


def detection_matrix_csv(matrix: dict, policies: tuple[str, ...]) -> str:
    """Render the (detector, speed) x policy mean-rate matrix."""
    out = ["detector,speed," + ",".join(policies)]
    for (det, speed) in sorted(matrix, key=lambda k: (k[0], k[1])):
        cells = matrix[(det, speed)]
        vals = ",".join(_opt(cells.get(p), ".6f") for p in policies)
        out.append(f"{det},{speed:.3f},{vals}")
    return "\n".join(out) + "\n"


def detections_csv(result: RunResult, arena: Arena) -> str:
    """Detections log: one row per object found, ordered by time."""
    classes = {obj.id: obj.cls for obj in arena.objects}
    out = [DETECTIONS_CSV_HEADER]
    ledger = result.ledger
    if ledger is not None:
        for oid, t in sorted(ledger.first_seen.items(), key=lambda kv: (kv[1], kv[0])):
            out.append(f"{oid},{classes[oid]},{t:.6f}")
    return "\n".join(out) + "\n"


def parse_trajectory(text: str) -> list[tuple[float, float, float, float, float, float]]:
    lines = text.splitlines()
    if not lines or lines[0] != TRAJECTORY_HEADER:
        raise SimError("trajectory log is missing its header row")
    return [tuple(float(v) for v in line.split(",")) for line in lines[1:]]


def grid_from_trajectory(text: str, width: float, height: float) -> OccupancyGrid:
    """Replay a trajectory log into a fresh occupancy grid.

    Marks every post-start sample with the time gap to its predecessor,
    clamping into the room (a collision's final sample can sit outside),
    exactly mirroring the run loop.  The replayed grid matches the run's
    grid cell for cell because the loop marks log-quantized coordinates.
    """
    rows = parse_trajectory(text)
    grid = OccupancyGrid(width, height)
    for prev, cur in zip(rows, rows[1:]):
        dt = cur[0] - prev[0]
        grid.mark(min(max(cur[1], 0.0), width), min(max(cur[2], 0.0), height), dt)
    return grid


def coverage_series_csv(text: str, width: float, height: float) -> str:
    """Coverage over time recomputed from a trajectory log."""
    rows = parse_trajectory(text)
    grid = OccupancyGrid(width, height)
    out = [SERIES_CSV_HEADER, f"{rows[0][0]:.6f},{0.0:.6f}"]
    for prev, cur in zip(rows, rows[1:]):
        dt = cur[0] - prev[0]
        grid.mark(min(max(cur[1], 0.0), width), min(max(cur[2], 0.0), height), dt)
        out.append(f"{cur[0]:.6f},{grid.coverage():.6f}")
    return "\n".join(out) + "\n"


def parse_runs_csv(text: str) -> list[SweepRow]:
    lines = text.splitlines()
    if not lines or lines[0] != RUNS_CSV_HEADER:
        raise SimError("runs table is missing its header row")
    rows = []
    for line in lines[1:]:
        if not line.strip():
            continue
        (policy, speed, det, run, seed, cov, rate, coll, energy, digest) = line.split(",")
        rows.append(SweepRow(
            policy=policy,
            speed=float(speed),
            detector=None if det == "none" else det,
            run=int(run),
            seed=int(seed),
            coverage=float(cov),
            detection_rate=float(rate) if rate else None,
            collision=bool(int(coll)),
            energy_j=float(energy),
            digest=int(digest, 16),
        ))
    return rows
