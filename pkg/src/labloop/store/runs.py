"""In-process run registry: status, feedback queue, control flags.

The registry is the meeting point between an experiment loop running in
one thread and the HTTP API serving another. The loop is the only trace
writer; the API only enqueues feedback and raises control flags, which
the loop picks up at its next turn boundary.
"""

from __future__ import annotations

import queue
import threading
import uuid
from dataclasses import dataclass
from pathlib import Path

from ..clock import Clock, SystemClock
from ..errors import RunTerminal, UnknownRun

ACTIVE_STATUSES = ("running", "awaiting_feedback", "paused")
TERMINAL_STATUSES = ("completed", "failed", "aborted", "budget_exhausted")
RUN_STATUSES = ACTIVE_STATUSES + TERMINAL_STATUSES


@dataclass
class FeedbackMessage:
    author: str
    text: str
    in_reply_to: int | None = None
    timestamp: float = 0.0

    def to_dict(self) -> dict:
        return {
            "author": self.author,
            "text": self.text,
            "in_reply_to": self.in_reply_to,
            "timestamp": self.timestamp,
        }


class RunHandle:
    """One registered run; safe to touch from loop and server threads."""

    def __init__(self, run_id: str, title: str, trace_path: Path, created_at: float):
        self.run_id = run_id
        self.title = title
        self.trace_path = Path(trace_path)
        self.created_at = created_at
        self._status = "running"
        self._lock = threading.Lock()
        self._feedback: queue.Queue[FeedbackMessage] = queue.Queue()
        self._pause = threading.Event()
        self._abort = threading.Event()

    @property
    def status(self) -> str:
        with self._lock:
            return self._status

    @property
    def is_terminal(self) -> bool:
        return self.status in TERMINAL_STATUSES

    def set_status(self, new_status: str) -> None:
        if new_status not in RUN_STATUSES:
            raise ValueError(f"unknown run status {new_status!r}")
        with self._lock:
            if self._status in TERMINAL_STATUSES:
                raise RunTerminal(
                    f"run {self.run_id} already finished as {self._status!r}"
                )
            self._status = new_status

    def post_feedback(self, message: FeedbackMessage) -> None:
        if self.is_terminal:
            raise RunTerminal(f"run {self.run_id} no longer accepts feedback")
        self._feedback.put(message)

    def next_feedback(self, timeout: float | None = None) -> FeedbackMessage | None:
        try:
            return self._feedback.get(timeout=timeout)
        except queue.Empty:
            return None

    def drain_feedback(self) -> list[FeedbackMessage]:
        drained = []
        while True:
            try:
                drained.append(self._feedback.get_nowait())
            except queue.Empty:
                return drained

    def request_pause(self) -> None:
        self._pause.set()

    def clear_pause(self) -> None:
        self._pause.clear()

    @property
    def pause_requested(self) -> bool:
        return self._pause.is_set()

    def request_abort(self) -> None:
        self._abort.set()

    @property
    def abort_requested(self) -> bool:
        return self._abort.is_set()


class RunHost:
    def __init__(self, clock: Clock | None = None):
        self.clock = clock or SystemClock()
        self._runs: dict[str, RunHandle] = {}
        self._lock = threading.Lock()

    def register(
        self, title: str, trace_path: str | Path, run_id: str | None = None
    ) -> RunHandle:
        run_id = run_id or uuid.uuid4().hex[:12]
        handle = RunHandle(
            run_id=run_id,
            title=title,
            trace_path=Path(trace_path),
            created_at=self.clock.now(),
        )
        with self._lock:
            if run_id in self._runs:
                raise ValueError(f"run id {run_id!r} already registered")
            self._runs[run_id] = handle
        return handle

    def get(self, run_id: str) -> RunHandle:
        with self._lock:
            try:
                return self._runs[run_id]
            except KeyError:
                raise UnknownRun(f"no run with id {run_id!r}") from None

    def list_runs(self) -> list[RunHandle]:
        with self._lock:
            return sorted(self._runs.values(), key=lambda h: (h.created_at, h.run_id))
