"""The five scheduling policies as pure decision functions.

Each selector answers one question: given the wait queue (arrival order),
the pool's current availability, and -- for backfilling -- the clock and the
running jobs, which queued jobs start *now*, in what order. Selectors never
mutate the pool or the queue; the engine applies the returned list.

Schedulers only see `requested_runtime` (the user estimate), never the
actual runtime. The backfilling variant is EASY: a single reservation for
the queue head, aggressive backfill behind it.
"""

from __future__ import annotations

from enum import Enum
from typing import Sequence

from .resources import ResourcePool
from .workload import Job


class Policy(Enum):
    FCFS = "fcfs"
    BACKFILL = "backfill"
    BEST_FIT = "bestfit"
    SJF = "sjf"
    LJF = "ljf"


class _VirtualPool:
    """Availability counters decremented as a selection grows; no side effects."""

    def __init__(self, pool: ResourcePool) -> None:
        self.cores = pool.available_cores
        self.memory = pool.available_memory
        self.enforce_memory = pool.enforces_memory

    def fits(self, job: Job) -> bool:
        if job.required_cores > self.cores:
            return False
        if self.enforce_memory and job.required_memory > self.memory:
            return False
        return True

    def take(self, job: Job) -> None:
        self.cores -= job.required_cores
        if self.enforce_memory:
            self.memory -= job.required_memory


def _prefix(ordered: Sequence[Job], virtual: _VirtualPool) -> list[Job]:
    """Longest fitting prefix; the first job that does not fit blocks the rest."""
    started = []
    for job in ordered:
        if not virtual.fits(job):
            break
        virtual.take(job)
        started.append(job)
    return started


def select_fcfs(queue: Sequence[Job], pool: ResourcePool) -> list[Job]:
    """Start jobs strictly in arrival order; no job may jump the queue head."""
    return _prefix(queue, _VirtualPool(pool))


def select_sjf(queue: Sequence[Job], pool: ResourcePool) -> list[Job]:
    """Shortest requested runtime first (ties keep arrival order), then prefix rule."""
    ordered = sorted(queue, key=lambda j: j.requested_runtime)
    return _prefix(ordered, _VirtualPool(pool))


def select_ljf(queue: Sequence[Job], pool: ResourcePool) -> list[Job]:
    """Longest requested runtime first (ties keep arrival order), then prefix rule."""
    ordered = sorted(queue, key=lambda j: -j.requested_runtime)
    return _prefix(ordered, _VirtualPool(pool))


def select_best_fit(queue: Sequence[Job], pool: ResourcePool) -> list[Job]:
    """Repeatedly start the fitting job that leaves the fewest cores idle.

    Ties go to the earliest arrival; repeats against the virtually reduced
    pool until nothing fits.
    """
    virtual = _VirtualPool(pool)
    remaining = list(queue)
    started = []
    while remaining and virtual.cores > 0:
        best_index = -1
        best_leftover = None
        for index, job in enumerate(remaining):
            if not virtual.fits(job):
                continue
            leftover = virtual.cores - job.required_cores
            if best_leftover is None or leftover < best_leftover:
                best_index, best_leftover = index, leftover
        if best_index < 0:
            break
        job = remaining.pop(best_index)
        virtual.take(job)
        started.append(job)
    return started


def _head_reservation(
    head: Job, now: int, available_cores: int, expected_ends: Sequence[tuple[int, int]]
) -> tuple[int, int] | None:
    """Earliest time the blocked head can start, from expected completions.

    `expected_ends` holds (expected_end, cores) for every running job.
    Returns (shadow_time, extra_cores): the head's reservation instant and
    the cores free at that instant beyond the head's own need. None when
    even all completions cannot free enough cores (the head is infeasible;
    the engine rejects such jobs before a run).
    """
    cores = available_cores
    if cores >= head.required_cores:
        # Head is blocked on memory, not cores; reserve immediately.
        return now, cores - head.required_cores
    freed = sorted(expected_ends)
    index = 0
    while index < len(freed):
        end = freed[index][0]
        while index < len(freed) and freed[index][0] == end:
            cores += freed[index][1]
            index += 1
        if cores >= head.required_cores:
            return end, cores - head.required_cores
    return None


def select_backfill(
    queue: Sequence[Job],
    pool: ResourcePool,
    now: int,
    running: Sequence[tuple[Job, int]],
) -> list[Job]:
    """EASY backfilling: FCFS prefix, one reservation for the blocked head.

    A later job may start now only if it fits current availability and
    either finishes (by its own estimate) before the head's reservation or
    fits inside the cores that remain spare at that instant.
    """
    virtual = _VirtualPool(pool)
    remaining = list(queue)
    started = []
    expected_ends = [(end, job.required_cores) for job, end in running]
    while remaining and virtual.fits(remaining[0]):
        job = remaining.pop(0)
        virtual.take(job)
        started.append(job)
        expected_ends.append((now + job.requested_runtime, job.required_cores))
    if not remaining:
        return started

    head = remaining[0]
    reservation = _head_reservation(head, now, virtual.cores, expected_ends)
    if reservation is None:
        return started
    shadow_time, extra_cores = reservation

    for job in remaining[1:]:
        if virtual.cores == 0:
            break
        if not virtual.fits(job):
            continue
        if now + job.requested_runtime <= shadow_time:
            virtual.take(job)
            started.append(job)
        elif job.required_cores <= extra_cores:
            virtual.take(job)
            started.append(job)
            extra_cores -= job.required_cores
    return started


def select(
    policy: Policy,
    queue: Sequence[Job],
    pool: ResourcePool,
    now: int = 0,
    running: Sequence[tuple[Job, int]] = (),
) -> list[Job]:
    """Dispatch to the selector for `policy`."""
    if policy is Policy.FCFS:
        return select_fcfs(queue, pool)
    if policy is Policy.SJF:
        return select_sjf(queue, pool)
    if policy is Policy.LJF:
        return select_ljf(queue, pool)
    if policy is Policy.BEST_FIT:
        return select_best_fit(queue, pool)
    if policy is Policy.BACKFILL:
        return select_backfill(queue, pool, now, running)
    raise ValueError(f"unknown policy: {policy!r}")
