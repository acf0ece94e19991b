import json
import random

import pytest

from schedsim import Workload, synthetic_workload

# 4-core machine, three jobs: J2 blocks behind J1, J3 can backfill.
CONTENDED_TRIO = [(0, 2, 10, 10), (0, 3, 5, 5), (1, 2, 5, 5)]

# 2-core machine where every job needs the whole machine; runtimes 10/2/5.
FULL_MACHINE_TRIO = [(0, 2, 10, 10), (0, 2, 2, 2), (0, 2, 5, 5)]

DIAMOND_WORKFLOW = {
    "tasks": [
        {"id": 1, "execution_time": 100, "resources": {"cpu": 2, "memory": 1024}, "dependencies": []},
        {"id": 2, "execution_time": 150, "resources": {"cpu": 1, "memory": 512}, "dependencies": [1]},
        {"id": 3, "execution_time": 200, "resources": {"cpu": 1, "memory": 512}, "dependencies": [1]},
        {"id": 4, "execution_time": 300, "resources": {"cpu": 2, "memory": 1024}, "dependencies": [2, 3]},
    ],
    "resources_available": {"cpu": 10, "memory": 8192},
    "scheduling_policy": "Static",
    "preemption": False,
}


@pytest.fixture
def contended_trio() -> Workload:
    return synthetic_workload(CONTENDED_TRIO)


@pytest.fixture
def full_machine_trio() -> Workload:
    return synthetic_workload(FULL_MACHINE_TRIO)


@pytest.fixture
def diamond_json() -> str:
    return json.dumps(DIAMOND_WORKFLOW)


def random_workload_entries(rng: random.Random, max_jobs=50, max_cores=16, max_runtime=100):
    """Seeded random (submit, cores, runtime, requested) entries.

    Requested runtimes both over- and under-estimate the actual runtime;
    a few jobs have zero runtime.
    """
    n = rng.randint(1, max_jobs)
    entries = []
    for _ in range(n):
        runtime = 0 if rng.random() < 0.05 else rng.randint(1, max_runtime)
        requested = max(1, runtime + rng.randint(-runtime // 2 - 1, runtime + 5))
        entries.append(
            (rng.randint(0, 150), rng.randint(1, max_cores), runtime, requested)
        )
    return entries
