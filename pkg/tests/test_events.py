import random

import pytest

from schedsim import EventKind, EventPayload, EventQueue, SchedulingInPast


def _payload(tag) -> EventPayload:
    return EventPayload(EventKind.SCHEDULER_WAKE, tag)


def test_single_event_at_head():
    q = EventQueue()
    q.schedule(5, _payload("A"))
    record = q.pop_next()
    assert (record.time, record.seq) == (5, 0)
    assert q.now == 5


def test_equal_times_pop_in_insertion_order():
    q = EventQueue()
    q.schedule(5, _payload("A"))
    q.schedule(5, _payload("B"))
    assert [q.pop_next().payload.entity for _ in range(2)] == ["A", "B"]


def test_pop_order_is_time_then_seq():
    q = EventQueue()
    q.schedule(7, _payload("X"))
    q.schedule(3, _payload("Y"))
    q.schedule(5, _payload("Z"))
    assert [q.pop_next().payload.entity for _ in range(3)] == ["Y", "Z", "X"]


def test_pop_empty_returns_none():
    assert EventQueue().pop_next() is None


def test_pop_advances_current_time():
    q = EventQueue()
    q.schedule(3, _payload("Y"))
    q.schedule(3, _payload("Z"))
    q.pop_next()
    assert q.now == 3
    record = q.pop_next()
    assert (record.time, record.payload.entity) == (3, "Z")


def test_scheduling_in_past_rejected():
    q = EventQueue()
    q.schedule(10, _payload("A"))
    q.pop_next()
    with pytest.raises(SchedulingInPast):
        q.schedule(9, _payload("B"))
    q.schedule(10, _payload("C"))  # same instant is allowed


def test_run_empty_returns_zero():
    assert EventQueue().run(lambda e: None) == 0


def test_run_single_event():
    q = EventQueue()
    q.schedule(10, _payload("A"))
    assert q.run(lambda e: None) == 10


def test_run_handler_chains_events():
    q = EventQueue()
    seen = []

    def handler(event):
        seen.append(event.time)
        if event.time == 2:
            q.schedule(4, _payload("B"))

    q.schedule(2, _payload("A"))
    assert q.run(handler) == 4
    assert seen == [2, 4]


def test_dispatch_times_never_decrease():
    rng = random.Random(7)
    q = EventQueue()
    for _ in range(500):
        q.schedule(rng.randint(0, 1000), _payload(None))
    times = []
    q.run(lambda e: times.append(e.time))
    assert times == sorted(times)
    assert len(times) == 500


def test_identical_runs_produce_identical_dispatch_logs():
    def one_run():
        rng = random.Random(99)
        q = EventQueue()
        log = []

        def handler(event):
            log.append((event.time, event.seq, event.payload.entity))
            if rng.random() < 0.3:
                q.schedule(event.time + rng.randint(0, 5), _payload(len(log)))

        for i in range(100):
            q.schedule(rng.randint(0, 50), _payload(f"init{i}"))
        q.run(handler)
        return log

    assert one_run() == one_run()
