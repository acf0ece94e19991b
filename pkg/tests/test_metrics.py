import random

import pytest

from schedsim import (
    EmptyInput,
    JobRecord,
    Policy,
    SimulationConfig,
    export_metrics,
    occupied_series,
    read_exported,
    run_batch,
    running_jobs_series,
    summarize,
    synthetic_workload,
    wait_cdf,
)

from conftest import random_workload_entries


def _record(id, submit, start, finish, cores):
    return JobRecord(id=id, submit=submit, start=start, finish=finish, cores=cores)


FCFS_RECORDS = [
    _record("J1", 0, 0, 10, 2),
    _record("J2", 0, 10, 15, 3),
    _record("J3", 1, 15, 20, 2),
]


def test_single_job_occupancy():
    series = occupied_series([_record("J", 0, 0, 10, 3)], 4)
    assert series.points == ((0, 3), (10, 0))


def test_fcfs_scenario_occupancy():
    series = occupied_series(FCFS_RECORDS, 4)
    assert series.points == ((0, 2), (10, 3), (15, 2), (20, 0))


def test_empty_records_empty_series():
    assert occupied_series([], 4).points == ()
    assert running_jobs_series([]).points == ()


def test_single_job_running_series():
    assert running_jobs_series([_record("J", 0, 5, 9, 1)]).points == ((5, 1), (9, 0))


def test_fcfs_scenario_running_series():
    # Exactly one job runs at a time; boundaries still get their points.
    assert running_jobs_series(FCFS_RECORDS).points == ((0, 1), (10, 1), (15, 1), (20, 0))


def test_overlapping_jobs_peak():
    records = [_record("A", 0, 0, 10, 1), _record("B", 0, 2, 8, 1)]
    series = running_jobs_series(records)
    assert max(v for _, v in series.points) == 2


def test_record_invariants_enforced():
    with pytest.raises(ValueError):
        _record("bad", 5, 3, 10, 1)
    with pytest.raises(ValueError):
        _record("bad", 0, 4, 3, 1)


def test_wait_cdf_thirds():
    cdf = wait_cdf(FCFS_RECORDS)
    assert cdf == [(0, pytest.approx(1 / 3)), (10, pytest.approx(2 / 3)), (14, 1.0)]


def test_wait_cdf_all_equal_single_step():
    records = [_record(f"J{i}", 0, 5, 6, 1) for i in range(4)]
    assert wait_cdf(records) == [(5, 1.0)]


def test_wait_cdf_single_record():
    assert wait_cdf([_record("J", 0, 7, 9, 1)]) == [(7, 1.0)]


def test_wait_cdf_empty_raises():
    with pytest.raises(EmptyInput):
        wait_cdf([])


def test_wait_cdf_is_monotone_and_ends_at_one():
    rng = random.Random(4)
    records = [
        _record(f"J{i}", 0, rng.randint(0, 50), rng.randint(51, 99), 1) for i in range(500)
    ]
    for points in (wait_cdf(records), wait_cdf(records, num_points=7), wait_cdf(records, 1)):
        assert points[-1][1] == 1.0
        assert all(a[0] < b[0] and a[1] <= b[1] for a, b in zip(points, points[1:]))
    assert len(wait_cdf(records, num_points=7)) <= 7


def test_summary_stats_for_hand_scenario():
    stats = summarize(FCFS_RECORDS, 4)
    assert stats.jobs == 3
    assert stats.mean_wait == pytest.approx(8.0)
    assert stats.median_wait == 10.0
    assert stats.max_wait == 14
    assert stats.makespan == 20
    assert stats.utilization == pytest.approx(45 / 80)


def test_summary_stats_empty():
    stats = summarize([], 4)
    assert (stats.jobs, stats.makespan, stats.utilization) == (0, 0, 0.0)


def test_area_conservation():
    for seed in range(5):
        entries = random_workload_entries(random.Random(40 + seed), max_cores=8)
        result = run_batch(
            SimulationConfig(policy=Policy.BEST_FIT, total_cores=8,
                             workload=synthetic_workload(entries))
        )
        series = occupied_series(result.records, 8)
        assert series.integral() == sum(r.cores * (r.finish - r.start) for r in result.records)


def test_value_at_lookup():
    series = occupied_series(FCFS_RECORDS, 4)
    assert series.value_at(-1) == 0
    assert series.value_at(0) == 2
    assert series.value_at(12) == 3
    assert series.value_at(99) == 0


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_export_round_trip(tmp_path, fmt):
    records = [
        JobRecord(id="1", submit=0, start=0, finish=10, cores=2, recorded_wait=3),
        JobRecord(id="2", submit=0, start=10, finish=15, cores=3),
        JobRecord(id="3", submit=1, start=15, finish=20, cores=2, recorded_wait=0),
    ]
    export_metrics(records, 4, tmp_path, fmt=fmt)
    loaded = read_exported(tmp_path, fmt=fmt)
    assert loaded["records"] == records
    assert loaded["occupied"].points == occupied_series(records, 4).points
    assert loaded["running"].points == running_jobs_series(records).points
    assert loaded["wait_cdf"] == wait_cdf(records)
    assert loaded["summary"] == summarize(records, 4)


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_empty_export_round_trip(tmp_path, fmt):
    paths = export_metrics([], 4, tmp_path, fmt=fmt)
    for path in paths:
        assert path.exists()
    loaded = read_exported(tmp_path, fmt=fmt)
    assert loaded["records"] == []
    assert loaded["summary"] == summarize([], 4)


def test_csv_export_headers_only_when_empty(tmp_path):
    export_metrics([], 2, tmp_path, fmt="csv")
    assert (tmp_path / "jobs.csv").read_text() == "id,submit,start,finish,cores,wait,recorded_wait\n"
    assert (tmp_path / "wait_cdf.csv").read_text() == "wait,fraction\n"


def test_jobs_csv_wait_column(tmp_path):
    export_metrics(FCFS_RECORDS, 4, tmp_path)
    lines = (tmp_path / "jobs.csv").read_text().splitlines()
    waits = [line.split(",")[5] for line in lines[1:]]
    assert waits == ["0", "10", "14"]


def test_exact_float_round_trip(tmp_path):
    rng = random.Random(77)
    records = [
        _record(f"J{i}", 0, rng.randint(0, 1000), rng.randint(1000, 2000), rng.randint(1, 7))
        for i in range(97)
    ]
    export_metrics(records, 700, tmp_path, fmt="csv")
    loaded = read_exported(tmp_path, fmt="csv")
    assert loaded["summary"].mean_wait == summarize(records, 700).mean_wait
    assert loaded["wait_cdf"] == wait_cdf(records)
