"""Clock abstraction so deterministic runs produce deterministic traces.

Everything that stamps a time (trace events, gateway latency, run records)
takes a clock instead of calling ``time`` directly. Scripted runs use a
:class:`TickClock`, which makes trace files byte-identical across invocations.
"""

from __future__ import annotations

import time
from typing import Callable, Protocol


class Clock(Protocol):
    def now(self) -> float:
        """Seconds since the epoch (or a logical stand-in)."""
        ...

    def monotonic(self) -> float:
        ...


class SystemClock:
    def now(self) -> float:
        return time.time()

    def monotonic(self) -> float:
        return time.monotonic()


class TickClock:
    """Deterministic clock: advances by a fixed step on every ``now()`` call."""

    def __init__(self, start: float = 0.0, step: float = 1.0):
        self._value = start
        self._step = step

    def now(self) -> float:
        value = self._value
        self._value += self._step
        return value

    def monotonic(self) -> float:
        return self._value


SleepFn = Callable[[float], None]


def no_sleep(_seconds: float) -> None:
    """Sleep replacement for tests; backoff paths call this instantly."""
