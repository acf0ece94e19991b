"""Workflow model: tasks, adjacency-list DAG, readiness tracking, JSON loader.

The on-disk document is strict JSON:

    {
      "tasks": [
        {"id": 1, "execution_time": 100,
         "resources": {"cpu": 2, "memory": 1024}, "dependencies": []},
        ...
      ],
      "resources_available": {"cpu": 10, "memory": 8192},
      "scheduling_policy": "Static",
      "preemption": false
    }

An optional top-level "workflow_id" names the workflow (defaults to the
file stem). Any other key, anywhere, is rejected: silent typos in an input
that drives a simulation are worse than a hard error. Task ids are
integers; "Static" is the only scheduling policy (ready tasks dispatch in
ascending id order, first-come-first-served); preemption must be false.

A task is Waiting until every dependency completes, Ready once its unmet
dependency count reaches zero, then Running and Completed. The dependency
graph is kept as adjacency lists (successors plus an unmet-dependency
counter per task), which makes completion-triggered release O(out-degree).
"""

from __future__ import annotations

import heapq
import json
import random
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional

from .errors import CycleDetected, IllegalTransition, WorkflowParseError, WorkflowValidationError


class TaskState(Enum):
    WAITING = "waiting"
    READY = "ready"
    RUNNING = "running"
    COMPLETED = "completed"


@dataclass(slots=True)
class Task:
    task_id: int
    execution_time: int
    required_cpu: int
    required_memory: int
    dependencies: list[int]
    state: TaskState = TaskState.WAITING


@dataclass(slots=True)
class Dag:
    """Adjacency-list dependency graph.

    `successors[t]` lists the tasks that depend on t (sorted); `indegree[t]`
    counts t's unmet dependencies and is decremented as the run progresses.
    """

    successors: dict[int, list[int]] = field(default_factory=dict)
    indegree: dict[int, int] = field(default_factory=dict)


@dataclass(slots=True)
class WorkflowSpec:
    workflow_id: str
    tasks: dict[int, Task]
    dag: Dag
    cpu_budget: int
    memory_budget: int
    scheduling_policy: str = "Static"
    preemption: bool = False

    def reset(self) -> None:
        """Restore the pre-run state: all tasks Waiting, indegrees recomputed."""
        for task in self.tasks.values():
            task.state = TaskState.WAITING
        self.dag = build_dag(self.tasks)


def build_dag(tasks: dict[int, Task]) -> Dag:
    successors: dict[int, list[int]] = {task_id: [] for task_id in tasks}
    indegree = {task_id: len(task.dependencies) for task_id, task in tasks.items()}
    for task in tasks.values():
        for dep in task.dependencies:
            successors[dep].append(task.task_id)
    for deps in successors.values():
        deps.sort()
    return Dag(successors=successors, indegree=indegree)


def topological_order(dag: Dag) -> list[int]:
    """Kahn's algorithm with ascending-id tie-break; raises CycleDetected."""
    indegree = dict(dag.indegree)
    ready = sorted(task_id for task_id, degree in indegree.items() if degree == 0)
    order = []
    heapq.heapify(ready)
    while ready:
        task_id = heapq.heappop(ready)
        order.append(task_id)
        for successor in dag.successors[task_id]:
            indegree[successor] -= 1
            if indegree[successor] == 0:
                heapq.heappush(ready, successor)
    if len(order) != len(indegree):
        remaining = {task_id for task_id, degree in indegree.items() if degree > 0}
        raise CycleDetected(_find_cycle(dag, remaining))
    return order


def _find_cycle(dag: Dag, remaining: set[int]) -> list[int]:
    """Extract one concrete cycle from the nodes Kahn's algorithm left behind."""
    predecessors: dict[int, list[int]] = {node: [] for node in remaining}
    for node in remaining:
        for successor in dag.successors[node]:
            if successor in remaining:
                predecessors[successor].append(node)
    node = min(remaining)
    seen: list[int] = []
    position: dict[int, int] = {}
    while node not in position:
        position[node] = len(seen)
        seen.append(node)
        node = min(predecessors[node])  # every remaining node has one
    cycle = seen[position[node]:]
    cycle.reverse()  # predecessor walk found it backwards
    return cycle


def ready_tasks(spec: WorkflowSpec) -> list[Task]:
    """All Waiting tasks whose dependencies are met, marked Ready, ascending id."""
    released = [
        task
        for task_id, task in sorted(spec.tasks.items())
        if task.state is TaskState.WAITING and spec.dag.indegree[task_id] == 0
    ]
    for task in released:
        task.state = TaskState.READY
    return released


def start_task(spec: WorkflowSpec, task_id: int) -> None:
    task = spec.tasks[task_id]
    if task.state is not TaskState.READY:
        raise IllegalTransition(f"task {task_id}: cannot start from {task.state.value}")
    task.state = TaskState.RUNNING


def complete_task(spec: WorkflowSpec, task_id: int) -> list[int]:
    """Mark a Running task Completed; return successors whose last dependency this was."""
    task = spec.tasks[task_id]
    if task.state is not TaskState.RUNNING:
        raise IllegalTransition(f"task {task_id}: cannot complete from {task.state.value}")
    task.state = TaskState.COMPLETED
    released = []
    for successor in spec.dag.successors[task_id]:
        spec.dag.indegree[successor] -= 1
        if spec.dag.indegree[successor] == 0:
            released.append(successor)
    return sorted(released)


def _expect_keys(obj: dict, required: set[str], optional: set[str], where: str) -> None:
    unknown = set(obj) - required - optional
    if unknown:
        raise WorkflowValidationError(f"{where}: unknown key(s) {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise WorkflowValidationError(f"{where}: missing key(s) {sorted(missing)}")


def _expect_int(value, where: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise WorkflowValidationError(f"{where}: expected an integer, got {value!r}")
    if value < minimum:
        raise WorkflowValidationError(f"{where}: must be >= {minimum}, got {value}")
    return value


def load_workflow(text: str, workflow_id: Optional[str] = None) -> WorkflowSpec:
    """Parse and validate a workflow JSON document.

    Every input yields either a fully validated spec or an error; a spec is
    never handed back half-built.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorkflowParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise WorkflowValidationError("top level must be a JSON object")
    _expect_keys(
        doc,
        required={"tasks", "resources_available", "scheduling_policy", "preemption"},
        optional={"workflow_id"},
        where="workflow",
    )

    budget = doc["resources_available"]
    if not isinstance(budget, dict):
        raise WorkflowValidationError("resources_available must be an object")
    _expect_keys(budget, required={"cpu", "memory"}, optional=set(), where="resources_available")
    cpu_budget = _expect_int(budget["cpu"], "resources_available.cpu", minimum=1)
    memory_budget = _expect_int(budget["memory"], "resources_available.memory", minimum=0)

    policy = doc["scheduling_policy"]
    if policy != "Static":
        raise WorkflowValidationError(
            f"scheduling_policy must be 'Static', got {policy!r}"
        )
    if doc["preemption"] is not False:
        raise WorkflowValidationError("preemption is not supported; it must be false")

    raw_tasks = doc["tasks"]
    if not isinstance(raw_tasks, list):
        raise WorkflowValidationError("tasks must be an array")
    tasks: dict[int, Task] = {}
    for position, entry in enumerate(raw_tasks):
        where = f"tasks[{position}]"
        if not isinstance(entry, dict):
            raise WorkflowValidationError(f"{where}: expected an object")
        _expect_keys(
            entry,
            required={"id", "execution_time", "resources", "dependencies"},
            optional=set(),
            where=where,
        )
        task_id = _expect_int(entry["id"], f"{where}.id", minimum=0)
        if task_id in tasks:
            raise WorkflowValidationError(f"{where}: duplicate task id {task_id}")
        resources = entry["resources"]
        if not isinstance(resources, dict):
            raise WorkflowValidationError(f"{where}.resources must be an object")
        _expect_keys(resources, required={"cpu", "memory"}, optional=set(), where=f"{where}.resources")
        deps = entry["dependencies"]
        if not isinstance(deps, list):
            raise WorkflowValidationError(f"{where}.dependencies must be an array")
        tasks[task_id] = Task(
            task_id=task_id,
            execution_time=_expect_int(entry["execution_time"], f"{where}.execution_time", minimum=1),
            required_cpu=_expect_int(resources["cpu"], f"{where}.resources.cpu", minimum=1),
            required_memory=_expect_int(resources["memory"], f"{where}.resources.memory", minimum=0),
            dependencies=[_expect_int(d, f"{where}.dependencies", minimum=0) for d in deps],
        )

    for task in tasks.values():
        for dep in task.dependencies:
            if dep == task.task_id:
                raise WorkflowValidationError(f"task {task.task_id} depends on itself")
            if dep not in tasks:
                raise WorkflowValidationError(
                    f"task {task.task_id} depends on unknown task {dep}"
                )
        if len(set(task.dependencies)) != len(task.dependencies):
            raise WorkflowValidationError(f"task {task.task_id} lists a dependency twice")
        if task.required_cpu > cpu_budget:
            raise WorkflowValidationError(
                f"task {task.task_id} needs {task.required_cpu} cpu"
                f" but the budget is {cpu_budget}; it can never run"
            )
        if task.required_memory > memory_budget:
            raise WorkflowValidationError(
                f"task {task.task_id} needs {task.required_memory} memory"
                f" but the budget is {memory_budget}; it can never run"
            )

    dag = build_dag(tasks)
    topological_order(dag)  # raises CycleDetected on cycles

    raw_id = doc.get("workflow_id", workflow_id)
    if raw_id is not None and not isinstance(raw_id, str):
        raise WorkflowValidationError("workflow_id must be a string")
    return WorkflowSpec(
        workflow_id=raw_id or "workflow",
        tasks=tasks,
        dag=dag,
        cpu_budget=cpu_budget,
        memory_budget=memory_budget,
        scheduling_policy=policy,
        preemption=False,
    )


def load_workflow_file(path) -> WorkflowSpec:
    path = Path(path)
    return load_workflow(path.read_text(encoding="utf-8"), workflow_id=path.stem)


def generate_workflow(
    kind: str,
    num_tasks: int,
    seed: int = 0,
    max_execution_time: int = 100,
    max_cpu: int = 4,
    max_memory: int = 1024,
) -> dict:
    """Build a synthetic workflow document (JSON-ready dict).

    Kinds: `chain` (a single dependency path), `forkjoin` (one source fans
    out, one sink joins), `diamond` (stacked 4-task diamond blocks), and
    `layered` (random layered DAG; every non-root task depends on 1-3 tasks
    from earlier layers). The same (kind, num_tasks, seed) always yields
    the same document.
    """
    if num_tasks < 1:
        raise ValueError(f"num_tasks must be >= 1, got {num_tasks}")
    rng = random.Random(seed)
    dependencies: dict[int, list[int]] = {t: [] for t in range(1, num_tasks + 1)}

    if kind == "chain":
        for t in range(2, num_tasks + 1):
            dependencies[t] = [t - 1]
    elif kind == "forkjoin":
        if num_tasks >= 3:
            middle = range(2, num_tasks)
            for t in middle:
                dependencies[t] = [1]
            dependencies[num_tasks] = list(middle)
        elif num_tasks == 2:
            dependencies[2] = [1]
    elif kind == "diamond":
        # Chain of 4-task diamonds; a trailing partial block degrades to a chain.
        for t in range(2, num_tasks + 1):
            offset = (t - 1) % 4
            if offset in (1, 2):
                dependencies[t] = [t - offset]
            elif offset == 3:
                dependencies[t] = [t - 2, t - 1]
            else:  # first task of the next block hangs off the previous join
                dependencies[t] = [t - 1]
    elif kind == "layered":
        layers: list[list[int]] = [[1]]
        next_task = 2
        while next_task <= num_tasks:
            width = min(rng.randint(1, max(2, num_tasks // 4)), num_tasks - next_task + 1)
            layers.append(list(range(next_task, next_task + width)))
            next_task += width
        for depth in range(1, len(layers)):
            pool = [t for layer in layers[:depth] for t in layer]
            for t in layers[depth]:
                count = min(len(pool), rng.randint(1, 3))
                dependencies[t] = sorted(rng.sample(pool, count))
    else:
        raise ValueError(f"unknown DAG kind {kind!r}")

    tasks = []
    peak_cpu = 1
    peak_memory = 0
    for t in range(1, num_tasks + 1):
        cpu = rng.randint(1, max_cpu)
        memory = rng.randint(0, max_memory)
        peak_cpu = max(peak_cpu, cpu)
        peak_memory = max(peak_memory, memory)
        tasks.append(
            {
                "id": t,
                "execution_time": rng.randint(1, max_execution_time),
                "resources": {"cpu": cpu, "memory": memory},
                "dependencies": dependencies[t],
            }
        )
    return {
        "tasks": tasks,
        "resources_available": {
            "cpu": peak_cpu + rng.randint(0, max_cpu),
            "memory": peak_memory + rng.randint(0, max_memory),
        },
        "scheduling_policy": "Static",
        "preemption": False,
    }
