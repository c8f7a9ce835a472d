"""Append-only run trace: length-prefixed JSON records on disk.

Each record is a 4-byte big-endian length followed by a compact JSON body
with sorted keys. Appends are flushed and fsynced, so a crash can lose at
most the record being written; readers discard a torn tail and always
return a gapless prefix. Reopening a trace truncates any torn tail before
the writer resumes, and sequence numbers keep climbing from there.
"""

from __future__ import annotations

import json
import os
import struct
from dataclasses import dataclass, field
from pathlib import Path

from ..clock import Clock, SystemClock
from ..errors import StorageError

EVENT_KINDS = (
    "turn",
    "action",
    "observation",
    "summary",
    "feedback",
    "control",
    "state_change",
)

_LENGTH = struct.Struct(">I")

# guards against a corrupt length prefix sending the reader into the weeds
MAX_RECORD_BYTES = 16 * 1024 * 1024


@dataclass
class TraceEvent:
    seq: int
    kind: str
    timestamp: float
    payload: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "kind": self.kind,
            "ts": self.timestamp,
            "payload": self.payload,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "TraceEvent":
        return cls(
            seq=int(raw["seq"]),
            kind=str(raw["kind"]),
            timestamp=float(raw["ts"]),
            payload=dict(raw.get("payload", {})),
        )


def encode_event(event: TraceEvent) -> bytes:
    body = json.dumps(
        event.to_dict(), sort_keys=True, separators=(",", ":"), ensure_ascii=False
    ).encode("utf-8")
    return _LENGTH.pack(len(body)) + body


def _parse_buffer(data: bytes) -> tuple[list[TraceEvent], int]:
    """Decode complete records; return events plus clean byte length."""
    events: list[TraceEvent] = []
    pos = 0
    while len(data) - pos >= _LENGTH.size:
        (length,) = _LENGTH.unpack_from(data, pos)
        if length > MAX_RECORD_BYTES:
            break  # corrupt prefix: everything from here on is noise
        start = pos + _LENGTH.size
        if start + length > len(data):
            break  # torn tail
        try:
            raw = json.loads(data[start : start + length].decode("utf-8"))
            event = TraceEvent.from_dict(raw)
        except (ValueError, KeyError, UnicodeDecodeError):
            break
        events.append(event)
        pos = start + length
    return events, pos


def scan_trace(path: str | Path) -> tuple[list[TraceEvent], int]:
    path = Path(path)
    if not path.exists():
        return [], 0
    return _parse_buffer(path.read_bytes())


def read_trace(path: str | Path) -> list[TraceEvent]:
    """All complete, well-formed records in the file."""
    events, _ = scan_trace(path)
    return events


class TraceWriter:
    """Single-writer append channel for one run's trace."""

    def __init__(self, path: str | Path, clock: Clock | None = None):
        self.path = Path(path)
        self.clock = clock or SystemClock()
        self.path.parent.mkdir(parents=True, exist_ok=True)
        existing, clean_length = scan_trace(self.path)
        if self.path.exists() and clean_length < self.path.stat().st_size:
            with open(self.path, "r+b") as fh:
                fh.truncate(clean_length)
        self._last_seq = existing[-1].seq if existing else 0
        self._fh = open(self.path, "ab")

    @property
    def last_seq(self) -> int:
        return self._last_seq

    def append(self, kind: str, payload: dict) -> TraceEvent:
        if kind not in EVENT_KINDS:
            raise StorageError(f"unknown trace event kind {kind!r}")
        if self._fh.closed:
            raise StorageError("trace writer is closed")
        event = TraceEvent(
            seq=self._last_seq + 1,
            kind=kind,
            timestamp=self.clock.now(),
            payload=payload,
        )
        self._fh.write(encode_event(event))
        self._fh.flush()
        os.fsync(self._fh.fileno())
        self._last_seq = event.seq
        return event

    def close(self) -> None:
        if not self._fh.closed:
            self._fh.close()

    def __enter__(self) -> "TraceWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


class TraceReader:
    """Incremental reader: each poll yields records appended since the last."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._offset = 0

    def poll(self) -> list[TraceEvent]:
        if not self.path.exists():
            return []
        with open(self.path, "rb") as fh:
            fh.seek(self._offset)
            data = fh.read()
        events, consumed = _parse_buffer(data)
        self._offset += consumed
        return events
