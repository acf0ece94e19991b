"""Per-job records, derived time series, and file export.

Series are piecewise-constant step functions with one point per event
boundary, which is exact (integer arithmetic throughout) and subsumes any
plot sampling. Export writes a stable set of delimited files:

    jobs.csv      id, submit, start, finish, cores, wait, recorded_wait
    occupied.csv  time, value          (cores in use over time)
    running.csv   time, value          (running jobs over time)
    wait_cdf.csv  wait, fraction       (empirical CDF of wait times)
    summary.json  aggregate statistics

With ``fmt="json"`` the same content lands in a single metrics.json.
Reading an export back reproduces every value exactly.
"""

from __future__ import annotations

import csv
import json
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .errors import EmptyInput


@dataclass(frozen=True, slots=True)
class JobRecord:
    """One finished job or task: submit <= start <= finish."""

    id: str
    submit: int
    start: int
    finish: int
    cores: int
    recorded_wait: Optional[int] = None

    def __post_init__(self) -> None:
        if not (0 <= self.submit <= self.start <= self.finish):
            raise ValueError(
                f"record {self.id}: need 0 <= submit <= start <= finish,"
                f" got ({self.submit}, {self.start}, {self.finish})"
            )

    @property
    def wait(self) -> int:
        return self.start - self.submit


@dataclass(frozen=True, slots=True)
class StepSeries:
    """Step function as (time, value) points at strictly increasing times."""

    points: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.points)

    def value_at(self, time: int) -> int:
        """Value in effect at `time` (0 before the first point)."""
        value = 0
        for t, v in self.points:
            if t > time:
                break
            value = v
        return value

    def integral(self) -> int:
        """Area under the step function up to its last point."""
        area = 0
        for (t0, v0), (t1, _) in zip(self.points, self.points[1:]):
            area += v0 * (t1 - t0)
        return area


def _step_series(records: Sequence[JobRecord], weight) -> StepSeries:
    deltas: dict[int, int] = {}
    for record in records:
        w = weight(record)
        if record.start == record.finish:
            continue  # zero-length interval contributes nothing
        deltas[record.start] = deltas.get(record.start, 0) + w
        deltas[record.finish] = deltas.get(record.finish, 0) - w
    points = []
    value = 0
    for time in sorted(deltas):
        value += deltas[time]
        points.append((time, value))
    return StepSeries(points=tuple(points))


def occupied_series(records: Sequence[JobRecord], total_cores: int) -> StepSeries:
    """Cores in use over time; never exceeds the machine size."""
    series = _step_series(records, lambda r: r.cores)
    assert all(0 <= value <= total_cores for _, value in series.points)
    return series


def running_jobs_series(records: Sequence[JobRecord]) -> StepSeries:
    """Count of running jobs over time."""
    return _step_series(records, lambda r: 1)


def wait_cdf(records: Sequence[JobRecord], num_points: int = 1000) -> list[tuple[int, float]]:
    """Empirical CDF of wait times, at most `num_points` points.

    Monotone non-decreasing; the last point always reaches fraction 1.0.
    """
    if not records:
        raise EmptyInput("wait_cdf needs at least one record")
    if num_points < 1:
        raise ValueError(f"num_points must be >= 1, got {num_points}")
    waits = sorted(record.wait for record in records)
    n = len(waits)
    full: list[tuple[int, float]] = []
    for i, wait in enumerate(waits):
        if i + 1 < n and waits[i + 1] == wait:
            continue  # keep only the last (cumulative) point per value
        full.append((wait, (i + 1) / n))
    if len(full) <= num_points:
        return full
    if num_points == 1:
        return [full[-1]]
    picks = sorted({round(i * (len(full) - 1) / (num_points - 1)) for i in range(num_points)})
    return [full[i] for i in picks]


@dataclass(frozen=True, slots=True)
class SummaryStats:
    jobs: int
    mean_wait: float
    median_wait: float
    max_wait: int
    makespan: int
    utilization: float
    total_cores: int

    def to_dict(self) -> dict:
        return {
            "jobs": self.jobs,
            "mean_wait": self.mean_wait,
            "median_wait": self.median_wait,
            "max_wait": self.max_wait,
            "makespan": self.makespan,
            "utilization": self.utilization,
            "total_cores": self.total_cores,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SummaryStats":
        return cls(**data)


def summarize(records: Sequence[JobRecord], total_cores: int) -> SummaryStats:
    """Aggregate wait/makespan/utilization statistics (zeros when empty)."""
    if not records:
        return SummaryStats(0, 0.0, 0.0, 0, 0, 0.0, total_cores)
    waits = [record.wait for record in records]
    makespan = max(r.finish for r in records) - min(r.submit for r in records)
    busy = sum(r.cores * (r.finish - r.start) for r in records)
    utilization = busy / (total_cores * makespan) if makespan > 0 else 0.0
    return SummaryStats(
        jobs=len(records),
        mean_wait=statistics.fmean(waits),
        median_wait=float(statistics.median(waits)),
        max_wait=max(waits),
        makespan=makespan,
        utilization=utilization,
        total_cores=total_cores,
    )


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


_JOBS_HEADER = ["id", "submit", "start", "finish", "cores", "wait", "recorded_wait"]


def _job_rows(records: Sequence[JobRecord]):
    for r in records:
        recorded = "" if r.recorded_wait is None else r.recorded_wait
        yield [r.id, r.submit, r.start, r.finish, r.cores, r.wait, recorded]


def export_metrics(
    records: Sequence[JobRecord],
    total_cores: int,
    out_dir,
    fmt: str = "csv",
    cdf_points: int = 1000,
) -> list[Path]:
    """Write the metric file set for one run; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    occupied = occupied_series(records, total_cores)
    running = running_jobs_series(records)
    cdf = wait_cdf(records, cdf_points) if records else []
    summary = summarize(records, total_cores)

    if fmt == "csv":
        paths = [out / name for name in
                 ("jobs.csv", "occupied.csv", "running.csv", "wait_cdf.csv", "summary.json")]
        _write_csv(paths[0], _JOBS_HEADER, _job_rows(records))
        _write_csv(paths[1], ["time", "value"], occupied.points)
        _write_csv(paths[2], ["time", "value"], running.points)
        _write_csv(paths[3], ["wait", "fraction"], [[w, repr(f)] for w, f in cdf])
        paths[4].write_text(json.dumps(summary.to_dict(), indent=2, sort_keys=True) + "\n")
        return paths
    if fmt == "json":
        path = out / "metrics.json"
        doc = {
            "jobs": [
                {
                    "id": r.id,
                    "submit": r.submit,
                    "start": r.start,
                    "finish": r.finish,
                    "cores": r.cores,
                    "wait": r.wait,
                    "recorded_wait": r.recorded_wait,
                }
                for r in records
            ],
            "occupied": list(occupied.points),
            "running": list(running.points),
            "wait_cdf": [[w, f] for w, f in cdf],
            "summary": summary.to_dict(),
        }
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return [path]
    raise ValueError(f"unknown export format {fmt!r}; expected 'csv' or 'json'")


def read_exported(out_dir, fmt: str = "csv") -> dict:
    """Read an export back (exact round-trip); returns records/series/summary."""
    out = Path(out_dir)
    if fmt == "json":
        doc = json.loads((out / "metrics.json").read_text())
        records = [
            JobRecord(
                id=j["id"], submit=j["submit"], start=j["start"], finish=j["finish"],
                cores=j["cores"], recorded_wait=j["recorded_wait"],
            )
            for j in doc["jobs"]
        ]
        return {
            "records": records,
            "occupied": StepSeries(tuple((t, v) for t, v in doc["occupied"])),
            "running": StepSeries(tuple((t, v) for t, v in doc["running"])),
            "wait_cdf": [(w, f) for w, f in doc["wait_cdf"]],
            "summary": SummaryStats.from_dict(doc["summary"]),
        }
    if fmt != "csv":
        raise ValueError(f"unknown export format {fmt!r}; expected 'csv' or 'json'")

    def rows(name):
        with open(out / name, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            next(reader)  # header
            yield from reader

    records = [
        JobRecord(
            id=row[0], submit=int(row[1]), start=int(row[2]), finish=int(row[3]),
            cores=int(row[4]), recorded_wait=None if row[6] == "" else int(row[6]),
        )
        for row in rows("jobs.csv")
    ]
    return {
        "records": records,
        "occupied": StepSeries(tuple((int(t), int(v)) for t, v in rows("occupied.csv"))),
        "running": StepSeries(tuple((int(t), int(v)) for t, v in rows("running.csv"))),
        "wait_cdf": [(int(w), float(f)) for w, f in rows("wait_cdf.csv")],
        "summary": SummaryStats.from_dict(json.loads((out / "summary.json").read_text())),
    }
