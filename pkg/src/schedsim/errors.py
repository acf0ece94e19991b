"""Exception hierarchy. Everything raised on purpose derives from SchedSimError."""

from __future__ import annotations


class SchedSimError(Exception):
    """Base class for all simulator errors."""


class SchedulingInPast(SchedSimError):
    """An event was scheduled before the current simulation time."""


class InsufficientResources(SchedSimError):
    """Allocation was attempted without enough free cores or memory."""


class DoubleAllocation(SchedSimError):
    """The same job was allocated twice."""


class UnknownAllocation(SchedSimError):
    """Deallocation was attempted for a job that holds no allocation."""


class MalformedTrace(SchedSimError):
    """One or more trace lines could not be parsed.

    `problems` is a list of (line_number, reason) pairs, 1-based.
    """

    def __init__(self, problems: list[tuple[int, str]]):
        self.problems = problems
        preview = "; ".join(f"line {n}: {why}" for n, why in problems[:5])
        more = "" if len(problems) <= 5 else f" (+{len(problems) - 5} more)"
        super().__init__(f"{len(problems)} malformed line(s): {preview}{more}")


class InvalidSpec(SchedSimError):
    """A synthetic workload entry violates its constraints."""


class WorkflowParseError(SchedSimError):
    """The workflow document is not valid JSON."""


class WorkflowValidationError(SchedSimError):
    """The workflow document parsed but violates the schema or DAG rules."""


class CycleDetected(WorkflowValidationError):
    """The dependency graph contains a cycle.

    `members` holds the task ids of one cycle, in traversal order.
    """

    def __init__(self, members: list):
        self.members = members
        chain = " -> ".join(str(m) for m in members + members[:1])
        super().__init__(f"dependency cycle: {chain}")


class IllegalTransition(SchedSimError):
    """A job or task state transition violated its lifecycle."""


class InfeasibleJob(SchedSimError):
    """One or more jobs can never run on the configured machine.

    `job_ids` lists the offending jobs.
    """

    def __init__(self, job_ids: list[str], detail: str):
        self.job_ids = job_ids
        super().__init__(detail)


class EmptyInput(SchedSimError):
    """An operation that needs at least one record received none."""
