"""Deterministic scripted provider: replays recorded replies in strict order.

A session file is a sequence of JSON records, one per line:

    {"expect_substring": "Method:", "reply": "..."}
    {"reply": "..."}

``expect_substring`` is optional; when present the incoming prompt must
contain it, which catches prompt drift the moment it happens instead of three
steps later. Replay is strictly sequential — concurrent callers are serialized
on an internal lock and observe a total order.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import SessionExhausted, SessionMismatch
from .core import CompletionRequest, Usage


@dataclass
class SessionEntry:
    reply: str
    expect_substring: str | None = None


@dataclass
class ScriptedSession:
    entries: list[SessionEntry]
    cursor: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def exhausted(self) -> bool:
        return self.cursor >= len(self.entries)

    def next_reply(self, prompt: str) -> str:
        with self._lock:
            if self.cursor >= len(self.entries):
                raise SessionExhausted(
                    f"request {self.cursor + 1} against {len(self.entries)} scripted entries"
                )
            entry = self.entries[self.cursor]
            if entry.expect_substring is not None and entry.expect_substring not in prompt:
                raise SessionMismatch(self.cursor, entry.expect_substring)
            self.cursor += 1
            return entry.reply


def load_scripted_session(path: str | Path) -> ScriptedSession:
    """Load a session file (JSON lines, or a single JSON list for hand edits)."""
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.lstrip()
    if stripped.startswith("["):
        raw_entries = json.loads(text)
    else:
        raw_entries = [json.loads(line) for line in text.splitlines() if line.strip()]
    entries = []
    for i, raw in enumerate(raw_entries):
        if "reply" not in raw:
            raise ValueError(f"session entry {i} has no 'reply' field")
        entries.append(
            SessionEntry(reply=raw["reply"], expect_substring=raw.get("expect_substring"))
        )
    return ScriptedSession(entries=entries)


def save_scripted_session(entries: list[SessionEntry], path: str | Path) -> None:
    lines = []
    for entry in entries:
        record: dict = {"reply": entry.reply}
        if entry.expect_substring is not None:
            record["expect_substring"] = entry.expect_substring
        lines.append(json.dumps(record, ensure_ascii=False))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


class ScriptedProvider:
    """Provider backed by a ScriptedSession; usage counts are deterministic."""

    def __init__(self, session: ScriptedSession, provider_id: str = "scripted"):
        self.session = session
        self.provider_id = provider_id

    def complete(self, request: CompletionRequest) -> tuple[str, Usage]:
        reply = self.session.next_reply(request.prompt)
        # char/4 is a stable stand-in for a tokenizer; only relative size matters.
        usage = Usage(
            input_tokens=max(1, len(request.prompt) // 4),
            output_tokens=max(1, len(reply) // 4),
        )
        return reply, usage


def scripted_gateway(entries_or_session, **gateway_kwargs):
    """Build a Gateway over scripted replies; accepts raw strings for brevity."""
    from ..clock import TickClock, no_sleep
    from .core import Gateway

    if isinstance(entries_or_session, ScriptedSession):
        session = entries_or_session
    else:
        session = ScriptedSession(
            entries=[
                entry if isinstance(entry, SessionEntry) else SessionEntry(reply=entry)
                for entry in entries_or_session
            ]
        )
    gateway_kwargs.setdefault("clock", TickClock())
    gateway_kwargs.setdefault("sleep", no_sleep)
    return Gateway(ScriptedProvider(session), **gateway_kwargs)
