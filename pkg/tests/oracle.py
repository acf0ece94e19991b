"""Independent brute-force reference scheduler for equivalence testing.

Unlike the library engine, this advances the clock one second at a time
over plain tuples and re-derives every policy decision from first
principles. It shares no code with the package: if both sides agree on
start/finish times across random workloads, the engine's event-driven
shortcuts are sound.

Policy semantics implemented here, from their definitions:
  * fcfs      start the queue head while it fits; the head blocks everyone.
  * sjf/ljf   stable-sort the queue by requested runtime (asc/desc), then
              apply the same head-blocking prefix rule.
  * bestfit   repeatedly start the fitting job leaving the fewest idle
              cores (earliest arrival on ties).
  * backfill  EASY: FCFS prefix; if the head blocks, reserve it the
              earliest instant enough cores free up (by requested-runtime
              estimates) and let later jobs start now only if they fit and
              either end by that instant or fit in the cores that will
              still be spare then.

Schedulers run at seconds where an arrival or completion happened (and
again if a zero-length job completes immediately), never in between.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class OJob:
    id: str
    submit: int
    cores: int
    runtime: int
    requested: int


def _fits_prefix(ordered, free):
    picks = []
    for job in ordered:
        if job.cores > free:
            break
        free -= job.cores
        picks.append(job)
    return picks


def _decide(policy, queue, free, now, expected_ends):
    """expected_ends: list of (expected_end_time, cores) for running jobs."""
    if policy == "fcfs":
        return _fits_prefix(queue, free)
    if policy == "sjf":
        return _fits_prefix(sorted(queue, key=lambda j: j.requested), free)
    if policy == "ljf":
        return _fits_prefix(sorted(queue, key=lambda j: -j.requested), free)
    if policy == "bestfit":
        picks = []
        candidates = list(queue)
        while True:
            fitting = [j for j in candidates if j.cores <= free]
            if not fitting:
                return picks
            # min() keeps the first (earliest-arrived) job on leftover ties
            best = min(fitting, key=lambda j: free - j.cores)
            picks.append(best)
            candidates.remove(best)
            free -= best.cores
    if policy == "backfill":
        picks = []
        remaining = list(queue)
        ends = list(expected_ends)
        while remaining and remaining[0].cores <= free:
            job = remaining.pop(0)
            free -= job.cores
            ends.append((now + job.requested, job.cores))
            picks.append(job)
        if not remaining:
            return picks
        head = remaining.pop(0)
        # Reservation: walk expected completions in time order, pooling all
        # completions at the same instant, until the head fits.
        shadow = None
        avail = free
        for end in sorted({e for e, _ in ends}):
            avail += sum(c for e, c in ends if e == end)
            if avail >= head.cores:
                shadow = end
                extra = avail - head.cores
                break
        if shadow is None:
            return picks
        for job in remaining:
            if job.cores > free:
                continue
            if now + job.requested <= shadow:
                free -= job.cores
                picks.append(job)
            elif job.cores <= extra:
                free -= job.cores
                extra -= job.cores
                picks.append(job)
        return picks
    raise ValueError(policy)


def oracle_run(jobs, policy, total_cores, horizon=10_000_000):
    """Start/finish times by naive per-second stepping. Returns two dicts."""
    pending = sorted(jobs, key=lambda j: (j.submit, j.id))
    for job in pending:
        assert job.cores <= total_cores, f"infeasible job {job.id}"
    queue = []
    running = {}  # id -> (end, expected_end, cores)
    starts = {}
    finishes = {}
    free = total_cores
    arrived = 0
    t = 0
    while len(finishes) < len(pending):
        if t > horizon:
            raise RuntimeError("oracle exceeded horizon; scheduling stuck")
        changed = False
        for jid in [jid for jid, (end, _, _) in running.items() if end == t]:
            _, _, cores = running.pop(jid)
            free += cores
            finishes[jid] = t
            changed = True
        while arrived < len(pending) and pending[arrived].submit == t:
            queue.append(pending[arrived])
            arrived += 1
            changed = True
        while changed:
            changed = False
            ends = [(expected, cores) for _, expected, cores in running.values()]
            for job in _decide(policy, queue, free, t, ends):
                queue.remove(job)
                free -= job.cores
                running[job.id] = (t + job.runtime, t + job.requested, job.cores)
                starts[job.id] = t
            for jid in [jid for jid, (end, _, _) in running.items() if end == t]:
                _, _, cores = running.pop(jid)
                free += cores
                finishes[jid] = t
                changed = True
        t += 1
    return starts, finishes
