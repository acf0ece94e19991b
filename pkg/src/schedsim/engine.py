"""Simulation orchestration: trace replays and workflow executions.

Both run loops share the same structure: pop every event that shares the
current timestamp (completions release resources, arrivals join the
queue), then invoke the scheduler exactly once for that instant. That
coalescing keeps results independent of how same-time completions happen
to be ordered. Completions are scheduled at start + actual runtime; the
requested runtime only ever feeds backfilling estimates.
"""

from __future__ import annotations

from bisect import insort
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .errors import InfeasibleJob, SchedSimError
from .events import EventKind, EventPayload, EventQueue
from .metrics import JobRecord
from .policies import Policy, select
from .resources import ResourcePool
from .workflow import TaskState, WorkflowSpec, complete_task, ready_tasks, start_task
from .workload import Job, Workload


@dataclass(slots=True)
class SimulationConfig:
    """Inputs for one run; exactly one of workload/workflow must be set.

    For workflow runs the pool comes from the document's declared budget;
    `workflow_cpu` / `workflow_memory` override it (task demands are then
    capped at the overridden budget so the run stays feasible).
    `record_events` can be switched off to keep huge replays lean.
    """

    policy: Policy = Policy.FCFS
    total_cores: int = 0
    total_memory: int = 0
    workload: Optional[Workload] = None
    workflow: Optional[WorkflowSpec] = None
    stop_time: Optional[int] = None
    record_events: bool = True
    workflow_cpu: Optional[int] = None
    workflow_memory: Optional[int] = None


@dataclass(slots=True)
class SimulationResult:
    records: list[JobRecord]
    final_time: int
    event_log: list[tuple[int, str, str]]
    total_cores: int
    truncated: bool = False
    unfinished: dict[str, str] = field(default_factory=dict)

    def waits(self) -> dict[str, int]:
        return {record.id: record.wait for record in self.records}

    def starts(self) -> dict[str, int]:
        return {record.id: record.start for record in self.records}


def _check_feasible(workload: Workload, total_cores: int, total_memory: int) -> None:
    bad = []
    for job in workload.jobs:
        if job.required_cores > total_cores:
            bad.append(f"{job.job_id} ({job.required_cores} cores > {total_cores})")
        elif total_memory > 0 and job.required_memory > total_memory:
            bad.append(f"{job.job_id} ({job.required_memory} KB > {total_memory})")
    if bad:
        raise InfeasibleJob(
            [entry.split(" ", 1)[0] for entry in bad],
            f"{len(bad)} job(s) can never run on this machine: " + ", ".join(bad[:10])
            + ("" if len(bad) <= 10 else f" (+{len(bad) - 10} more)"),
        )


def run_batch(config: SimulationConfig) -> SimulationResult:
    """Replay a workload under the configured policy until all jobs finish."""
    if config.workload is None or config.workflow is not None:
        raise SchedSimError("run_batch needs a workload (and no workflow)")
    if config.total_cores < 1:
        raise SchedSimError("total_cores must be >= 1 (pass the machine size)")
    workload = config.workload
    workload.reset()
    _check_feasible(workload, config.total_cores, config.total_memory)

    events = EventQueue()
    pool = ResourcePool(config.total_cores, config.total_memory)
    jobs = {job.job_id: job for job in workload.jobs}
    for job in workload.jobs:
        events.schedule(job.submit_time, EventPayload(EventKind.JOB_ARRIVAL, job.job_id))

    wait_queue: deque[Job] = deque()
    running: dict[str, tuple[Job, int, int]] = {}  # id -> (job, expected_end, start)
    records: list[JobRecord] = []
    event_log: list[tuple[int, str, str]] = []
    log = event_log.append if config.record_events else (lambda entry: None)
    truncated = False

    while True:
        now = events.peek_time()
        if now is None:
            break
        if config.stop_time is not None and now > config.stop_time:
            truncated = True
            break
        while events.peek_time() == now:
            payload = events.pop_next().payload
            if payload.kind is EventKind.JOB_COMPLETION:
                job, _expected, started = running.pop(payload.entity)
                pool.deallocate(job.job_id)
                job.complete()
                records.append(
                    JobRecord(
                        id=job.job_id,
                        submit=job.submit_time,
                        start=started,
                        finish=now,
                        cores=job.required_cores,
                        recorded_wait=job.recorded_wait,
                    )
                )
                log((now, "finish", job.job_id))
            else:  # arrival
                wait_queue.append(jobs[payload.entity])
                log((now, "arrival", payload.entity))

        started_jobs = select(
            config.policy,
            wait_queue,
            pool,
            now,
            [(job, expected) for job, expected, _ in running.values()],
        )
        for job in started_jobs:
            pool.allocate(job)
            job.start()
            running[job.job_id] = (job, now + job.requested_runtime, now)
            events.schedule(
                now + job.actual_runtime, EventPayload(EventKind.JOB_COMPLETION, job.job_id)
            )
            log((now, "start", job.job_id))
        if started_jobs:
            if config.policy is Policy.FCFS:
                for _ in started_jobs:  # FCFS always starts a queue prefix
                    wait_queue.popleft()
            else:
                started_ids = {job.job_id for job in started_jobs}
                wait_queue = deque(j for j in wait_queue if j.job_id not in started_ids)

    unfinished: dict[str, str] = {}
    if truncated:
        for job in wait_queue:
            unfinished[job.job_id] = "queued"
        for job_id in running:
            unfinished[job_id] = "running"
        for job in workload.jobs:
            if job.submit_time > config.stop_time:
                unfinished[job.job_id] = "not_submitted"
    final_time = config.stop_time if truncated else events.now
    return SimulationResult(
        records=records,
        final_time=final_time,
        event_log=event_log,
        total_cores=config.total_cores,
        truncated=truncated,
        unfinished=unfinished,
    )


def run_workflow(config: SimulationConfig) -> SimulationResult:
    """Execute a workflow against its resource budget until all tasks finish.

    Ready tasks dispatch first-come-first-served in ascending task id: the
    lowest-id pending task blocks the rest until it fits, exactly like the
    batch FCFS queue head.
    """
    if config.workflow is None or config.workload is not None:
        raise SchedSimError("run_workflow needs a workflow (and no workload)")
    spec = config.workflow
    spec.reset()
    cpu_budget = config.workflow_cpu if config.workflow_cpu is not None else spec.cpu_budget
    memory_budget = (
        config.workflow_memory if config.workflow_memory is not None else spec.memory_budget
    )
    if cpu_budget < 1:
        raise SchedSimError("workflow cpu budget must be >= 1")

    pool = ResourcePool(cpu_budget, memory_budget)
    events = EventQueue()
    # Demands are capped at the (possibly overridden) budget; the loader
    # already rejected tasks beyond the declared one.
    leases = {
        task_id: Job(
            job_id=str(task_id),
            submit_time=0,
            required_cores=min(task.required_cpu, cpu_budget),
            actual_runtime=task.execution_time,
            requested_runtime=task.execution_time,
            required_memory=min(task.required_memory, memory_budget) if memory_budget else 0,
        )
        for task_id, task in spec.tasks.items()
    }

    for task in ready_tasks(spec):
        events.schedule(0, EventPayload(EventKind.TASK_READY, task.task_id))

    pending: list[int] = []
    ready_at: dict[int, int] = {}
    started_at: dict[int, int] = {}
    records: list[JobRecord] = []
    event_log: list[tuple[int, str, str]] = []
    log = event_log.append if config.record_events else (lambda entry: None)
    truncated = False

    while True:
        now = events.peek_time()
        if now is None:
            break
        if config.stop_time is not None and now > config.stop_time:
            truncated = True
            break
        while events.peek_time() == now:
            payload = events.pop_next().payload
            task_id = payload.entity
            if payload.kind is EventKind.TASK_COMPLETION:
                pool.deallocate(str(task_id))
                complete_task(spec, task_id)
                for task in ready_tasks(spec):
                    events.schedule(now, EventPayload(EventKind.TASK_READY, task.task_id))
                records.append(
                    JobRecord(
                        id=str(task_id),
                        submit=ready_at[task_id],
                        start=started_at[task_id],
                        finish=now,
                        cores=leases[task_id].required_cores,
                    )
                )
                log((now, "finish", str(task_id)))
            else:  # task became ready
                insort(pending, task_id)
                ready_at[task_id] = now
                log((now, "ready", str(task_id)))

        dispatched = 0
        for task_id in pending:
            if not pool.can_allocate(leases[task_id]):
                break  # lowest-id pending task blocks the rest
            pool.allocate(leases[task_id])
            start_task(spec, task_id)
            started_at[task_id] = now
            events.schedule(
                now + spec.tasks[task_id].execution_time,
                EventPayload(EventKind.TASK_COMPLETION, task_id),
            )
            log((now, "start", str(task_id)))
            dispatched += 1
        if dispatched:
            del pending[:dispatched]

    unfinished = {}
    if truncated:
        for task_id, task in sorted(spec.tasks.items()):
            if task.state is not TaskState.COMPLETED:
                unfinished[str(task_id)] = task.state.value
    final_time = config.stop_time if truncated else events.now
    return SimulationResult(
        records=records,
        final_time=final_time,
        event_log=event_log,
        total_cores=cpu_budget,
        truncated=truncated,
        unfinished=unfinished,
    )


def run(config: SimulationConfig) -> SimulationResult:
    """Dispatch to the batch or workflow loop based on the configured input."""
    if config.workflow is not None:
        return run_workflow(config)
    return run_batch(config)
