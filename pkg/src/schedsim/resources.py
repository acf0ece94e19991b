"""Cluster resource pool: core (and optional memory) allocation bookkeeping.

The pool is a single homogeneous counter of schedulable units ("cores" here;
whatever the trace's processor field counts). Memory is enforced only when
the pool is created with total_memory > 0.
"""

from __future__ import annotations

from .errors import DoubleAllocation, InsufficientResources, UnknownAllocation
from .workload import Job


class ResourcePool:
    def __init__(self, total_cores: int, total_memory: int = 0) -> None:
        if total_cores < 1:
            raise ValueError(f"total_cores must be >= 1, got {total_cores}")
        if total_memory < 0:
            raise ValueError(f"total_memory must be >= 0, got {total_memory}")
        self.total_cores = total_cores
        self.available_cores = total_cores
        self.total_memory = total_memory
        self.available_memory = total_memory
        self.allocations: dict[str, tuple[int, int]] = {}
        # Incremental sums so the conservation check stays O(1).
        self._allocated_cores = 0
        self._allocated_memory = 0

    @property
    def enforces_memory(self) -> bool:
        return self.total_memory > 0

    def can_allocate(self, job: Job) -> bool:
        """True iff the job's cores (and memory, when enforced) fit right now."""
        if job.required_cores > self.available_cores:
            return False
        if self.enforces_memory and job.required_memory > self.available_memory:
            return False
        return True

    def allocate(self, job: Job) -> None:
        if job.job_id in self.allocations:
            raise DoubleAllocation(f"job {job.job_id} is already allocated")
        if not self.can_allocate(job):
            raise InsufficientResources(
                f"job {job.job_id} needs {job.required_cores} cores"
                f" but only {self.available_cores} available"
            )
        memory = job.required_memory if self.enforces_memory else 0
        self.available_cores -= job.required_cores
        self.available_memory -= memory
        self.allocations[job.job_id] = (job.required_cores, memory)
        self._allocated_cores += job.required_cores
        self._allocated_memory += memory
        self._assert_conserved()

    def deallocate(self, job_id: str) -> None:
        try:
            cores, memory = self.allocations.pop(job_id)
        except KeyError:
            raise UnknownAllocation(f"job {job_id} holds no allocation") from None
        self.available_cores += cores
        self.available_memory += memory
        self._allocated_cores -= cores
        self._allocated_memory -= memory
        self._assert_conserved()

    def _assert_conserved(self) -> None:
        assert 0 <= self.available_cores <= self.total_cores
        assert self.available_cores + self._allocated_cores == self.total_cores
        if self.enforces_memory:
            assert 0 <= self.available_memory <= self.total_memory
            assert self.available_memory + self._allocated_memory == self.total_memory

    def __repr__(self) -> str:
        return (
            f"ResourcePool(cores {self.available_cores}/{self.total_cores},"
            f" memory {self.available_memory}/{self.total_memory},"
            f" {len(self.allocations)} allocation(s))"
        )
