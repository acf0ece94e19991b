"""Deterministic discrete-event core: event queue and run loop.

Simulation time is integer seconds. Events are totally ordered by
(time, seq) where seq is the insertion counter, so same-time events
dispatch in the order they were scheduled and every run is reproducible.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Union

from .errors import SchedulingInPast

SimTime = int

EntityId = Union[str, int]


class EventKind(Enum):
    JOB_ARRIVAL = "arrival"
    JOB_START = "start"
    JOB_COMPLETION = "completion"
    TASK_READY = "task_ready"
    TASK_COMPLETION = "task_completion"
    SCHEDULER_WAKE = "scheduler_wake"


@dataclass(frozen=True, slots=True)
class EventPayload:
    kind: EventKind
    entity: Optional[EntityId] = None


@dataclass(frozen=True, slots=True)
class EventRecord:
    time: SimTime
    seq: int
    payload: EventPayload


class EventQueue:
    """Time-ordered event queue with a dispatch loop.

    Single-threaded; one instance per simulation. `now` starts at 0 and
    advances to each popped event's timestamp, never backwards.
    """

    def __init__(self) -> None:
        self._heap: list[tuple[SimTime, int, EventPayload]] = []
        self._next_seq = 0
        self.now: SimTime = 0

    def __len__(self) -> int:
        return len(self._heap)

    def schedule(self, time: SimTime, payload: EventPayload) -> None:
        """Enqueue an event at `time`, which must not precede `now`."""
        if time < self.now:
            raise SchedulingInPast(
                f"cannot schedule {payload.kind.value} at t={time}: current time is {self.now}"
            )
        heapq.heappush(self._heap, (time, self._next_seq, payload))
        self._next_seq += 1

    def peek_time(self) -> Optional[SimTime]:
        """Timestamp of the next event, or None when empty."""
        if not self._heap:
            return None
        return self._heap[0][0]

    def pop_next(self) -> Optional[EventRecord]:
        """Pop the minimum (time, seq) event and advance `now` to its time."""
        if not self._heap:
            return None
        time, seq, payload = heapq.heappop(self._heap)
        self.now = time
        return EventRecord(time, seq, payload)

    def run(self, handler: Callable[[EventRecord], None]) -> SimTime:
        """Dispatch all events in (time, seq) order.

        The handler may schedule further events at times >= `now`.
        Returns the final simulation time (0 if no event was dispatched).
        """
        while True:
            event = self.pop_next()
            if event is None:
                return self.now
            handler(event)
