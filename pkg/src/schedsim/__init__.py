"""schedsim: deterministic discrete-event simulation of HPC batch scheduling.

A library plus CLI that replays job traces (SWF / GWA dialects) or executes
DAG workflow documents under five scheduling policies (FCFS, EASY
backfilling, best fit, SJF, LJF) and derives wait-time, occupancy, and
utilization metrics.
"""

from .engine import SimulationConfig, SimulationResult, run, run_batch, run_workflow
from .errors import (
    CycleDetected,
    DoubleAllocation,
    EmptyInput,
    IllegalTransition,
    InfeasibleJob,
    InsufficientResources,
    InvalidSpec,
    MalformedTrace,
    SchedSimError,
    SchedulingInPast,
    UnknownAllocation,
    WorkflowParseError,
    WorkflowValidationError,
)
from .events import EventKind, EventPayload, EventQueue, EventRecord, SimTime
from .metrics import (
    JobRecord,
    StepSeries,
    SummaryStats,
    export_metrics,
    occupied_series,
    read_exported,
    running_jobs_series,
    summarize,
    wait_cdf,
)
from .policies import (
    Policy,
    select,
    select_backfill,
    select_best_fit,
    select_fcfs,
    select_ljf,
    select_sjf,
)
from .resources import ResourcePool
from .workflow import (
    Dag,
    Task,
    TaskState,
    WorkflowSpec,
    build_dag,
    complete_task,
    generate_workflow,
    load_workflow,
    load_workflow_file,
    ready_tasks,
    start_task,
    topological_order,
)
from .workload import (
    Job,
    JobState,
    Workload,
    load_workload,
    parse_swf_line,
    parse_trace_lines,
    scan_trace_lines,
    synthetic_workload,
    to_swf_line,
)

__version__ = "0.1.0"
