"""Job domain model and trace ingestion.

Two trace dialects are supported through column profiles over the same
whitespace-separated positional layout (1-based field numbers):

    field 1  job id          field 5  allocated processors
    field 2  submit time     field 8  requested processors
    field 3  wait time       field 9  requested runtime
    field 4  actual runtime  field 10 requested memory (KB)

* ``swf`` -- Standard Workload Format of the Parallel Workloads Archive:
  exactly this layout with 18 fields, ``;`` comment/header lines, and a
  ``; MaxProcs: N`` header giving the machine size.
* ``gwa`` -- Grid Workloads Archive traces: the first 10 columns coincide
  with the SWF layout, so the same mapping applies; rows carry extra
  columns that are ignored and comments start with ``#`` (``;`` is also
  accepted).

``-1`` is the archives' sentinel for "unknown": requested processors fall
back to allocated processors, requested runtime falls back to the actual
runtime, and unknown memory becomes 0. Jobs whose core demand cannot be
resolved to a positive count are rejected rather than guessed. Fractional
timestamps are rounded down and reported as warnings.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

from .errors import IllegalTransition, InvalidSpec, MalformedTrace

log = logging.getLogger(__name__)

_MAXPROCS_RE = re.compile(r"^;\s*MaxProcs\s*:\s*(\d+)", re.IGNORECASE)


class JobState(Enum):
    QUEUED = "queued"
    RUNNING = "running"
    COMPLETED = "completed"


@dataclass(slots=True)
class Job:
    """A batch job as read from a trace (or built synthetically).

    `requested_runtime` is the user's estimate and is all a scheduler may
    look at; `actual_runtime` drives the simulated completion. Estimates
    may undershoot reality. `required_memory` is in KB, 0 = unspecified.
    `recorded_wait` carries the trace's own wait-time column, kept only
    for side-by-side comparison in exports.
    """

    job_id: str
    submit_time: int
    required_cores: int
    actual_runtime: int
    requested_runtime: int
    required_memory: int = 0
    recorded_wait: Optional[int] = None
    state: JobState = JobState.QUEUED

    def __post_init__(self) -> None:
        if self.submit_time < 0:
            raise ValueError(f"submit_time must be >= 0, got {self.submit_time}")
        if self.required_cores < 1:
            raise ValueError(f"required_cores must be >= 1, got {self.required_cores}")
        if self.actual_runtime < 0:
            raise ValueError(f"actual_runtime must be >= 0, got {self.actual_runtime}")
        if self.requested_runtime < 0:
            raise ValueError(f"requested_runtime must be >= 0, got {self.requested_runtime}")
        if self.required_memory < 0:
            raise ValueError(f"required_memory must be >= 0, got {self.required_memory}")

    def start(self) -> None:
        if self.state is not JobState.QUEUED:
            raise IllegalTransition(f"job {self.job_id}: cannot start from {self.state.value}")
        self.state = JobState.RUNNING

    def complete(self) -> None:
        if self.state is not JobState.RUNNING:
            raise IllegalTransition(f"job {self.job_id}: cannot complete from {self.state.value}")
        self.state = JobState.COMPLETED


@dataclass(slots=True)
class Workload:
    """Jobs sorted by (submit_time, job_id); ids are unique."""

    jobs: list[Job]
    source: str = "<memory>"
    machine_cores: int = 0

    def __len__(self) -> int:
        return len(self.jobs)

    def reset(self) -> None:
        """Put every job back to Queued so the workload can be replayed."""
        for job in self.jobs:
            job.state = JobState.QUEUED


@dataclass(frozen=True, slots=True)
class TraceProfile:
    name: str
    comment_prefixes: tuple[str, ...]
    min_fields: int


TRACE_PROFILES = {
    "swf": TraceProfile("swf", (";",), 18),
    "gwa": TraceProfile("gwa", ("#", ";"), 10),
}


@dataclass(slots=True)
class TraceScan:
    """Permissive single-pass scan result (used by trace validation)."""

    jobs: list[Job]
    problems: list[tuple[int, str]] = field(default_factory=list)
    machine_cores: int = 0
    fractional_lines: list[int] = field(default_factory=list)


def _to_int(token: str) -> tuple[int, bool]:
    """Parse an integer field; fractional values floor. Raises ValueError."""
    try:
        return int(token), False
    except ValueError:
        return math.floor(float(token)), True


def _job_from_tokens(tokens: Sequence[str], profile: TraceProfile) -> tuple[Job, bool]:
    if len(tokens) < profile.min_fields:
        raise ValueError(f"expected at least {profile.min_fields} fields, found {len(tokens)}")
    values = []
    fractional = False
    for i, token in enumerate(tokens[: profile.min_fields]):
        try:
            value, frac = _to_int(token)
        except ValueError:
            raise ValueError(f"non-numeric field {i + 1}: {token!r}") from None
        values.append(value)
        fractional = fractional or frac

    allocated, requested_procs = values[4], values[7]
    cores = requested_procs if requested_procs != -1 else allocated
    requested_time = values[8] if values[8] != -1 else values[3]
    memory = values[9] if values[9] != -1 else 0
    recorded_wait = values[2] if values[2] >= 0 else None
    job = Job(
        job_id=tokens[0],
        submit_time=values[1],
        required_cores=cores,
        actual_runtime=values[3],
        requested_runtime=requested_time,
        required_memory=memory,
        recorded_wait=recorded_wait,
    )
    return job, fractional


def parse_swf_line(line: str) -> Optional[Job]:
    """Parse one SWF line into a Job; comments and blank lines give None.

    Raises ValueError with a reason for malformed lines.
    """
    profile = TRACE_PROFILES["swf"]
    stripped = line.strip()
    if not stripped or stripped.startswith(profile.comment_prefixes):
        return None
    job, _ = _job_from_tokens(stripped.split(), profile)
    return job


def scan_trace_lines(lines: Iterable[str], fmt: str = "swf") -> TraceScan:
    """Scan trace lines permissively, collecting jobs and per-line problems."""
    try:
        profile = TRACE_PROFILES[fmt]
    except KeyError:
        raise ValueError(f"unknown trace format {fmt!r}; expected one of {sorted(TRACE_PROFILES)}")
    scan = TraceScan(jobs=[])
    seen_ids: set[str] = set()
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith(profile.comment_prefixes):
            match = _MAXPROCS_RE.match(stripped)
            if match:
                scan.machine_cores = int(match.group(1))
            continue
        try:
            job, fractional = _job_from_tokens(stripped.split(), profile)
        except ValueError as exc:
            scan.problems.append((line_no, str(exc)))
            continue
        if job.job_id in seen_ids:
            scan.problems.append((line_no, f"duplicate job id {job.job_id!r}"))
            continue
        seen_ids.add(job.job_id)
        if fractional:
            scan.fractional_lines.append(line_no)
        scan.jobs.append(job)
    return scan


def parse_trace_lines(lines: Iterable[str], fmt: str = "swf", source: str = "<memory>") -> Workload:
    """Parse trace lines strictly: any malformed line fails the whole load."""
    scan = scan_trace_lines(lines, fmt)
    if scan.problems:
        raise MalformedTrace(scan.problems)
    if scan.fractional_lines:
        log.warning(
            "%s: %d line(s) carried fractional times, rounded down (first at line %d)",
            source,
            len(scan.fractional_lines),
            scan.fractional_lines[0],
        )
    scan.jobs.sort(key=lambda j: (j.submit_time, j.job_id))
    return Workload(jobs=scan.jobs, source=source, machine_cores=scan.machine_cores)


def load_workload(path, fmt: str = "swf") -> Workload:
    """Load a trace file. IO errors propagate as OSError."""
    with open(path, "r", encoding="utf-8", errors="replace") as handle:
        return parse_trace_lines(handle, fmt, source=str(path))


def to_swf_line(job: Job) -> str:
    """Serialize a Job back to an 18-field SWF line (unknown fields -1).

    Re-parsing the line reproduces the Job field-for-field.
    """
    wait = job.recorded_wait if job.recorded_wait is not None else -1
    fields = [
        job.job_id,
        job.submit_time,
        wait,
        job.actual_runtime,
        job.required_cores,
        -1,
        -1,
        job.required_cores,
        job.requested_runtime,
        job.required_memory,
        -1, -1, -1, -1, -1, -1, -1, -1,
    ]
    return " ".join(str(f) for f in fields)


def synthetic_workload(entries: Sequence[tuple[int, int, int, int]]) -> Workload:
    """Build a workload from (submit, cores, runtime, requested_runtime) tuples.

    Jobs are named J1, J2, ... in entry order, then sorted like any other
    workload.
    """
    jobs = []
    for n, (submit, cores, runtime, requested) in enumerate(entries, start=1):
        if cores < 1:
            raise InvalidSpec(f"entry {n}: cores must be >= 1, got {cores}")
        try:
            jobs.append(
                Job(
                    job_id=f"J{n}",
                    submit_time=submit,
                    required_cores=cores,
                    actual_runtime=runtime,
                    requested_runtime=requested,
                )
            )
        except ValueError as exc:
            raise InvalidSpec(f"entry {n}: {exc}") from None
    jobs.sort(key=lambda j: (j.submit_time, j.job_id))
    return Workload(jobs=jobs, source="<synthetic>")
