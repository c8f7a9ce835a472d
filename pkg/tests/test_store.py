"""Durable trace log and the in-process run registry."""

from __future__ import annotations

import json
import struct
import threading

import pytest

from labloop.clock import TickClock
from labloop.errors import RunTerminal, StorageError, UnknownRun
from labloop.store import (
    EVENT_KINDS,
    FeedbackMessage,
    RunHandle,
    RunHost,
    TraceEvent,
    TraceReader,
    TraceWriter,
    encode_event,
    read_trace,
    scan_trace,
)


def write_events(path, kinds_payloads, clock=None):
    with TraceWriter(path, clock=clock or TickClock()) as writer:
        for kind, payload in kinds_payloads:
            writer.append(kind, payload)
    return path


def test_event_kinds_are_the_known_seven():
    assert EVENT_KINDS == (
        "turn",
        "action",
        "observation",
        "summary",
        "feedback",
        "control",
        "state_change",
    )


def test_append_assigns_contiguous_seqs(tmp_path):
    path = tmp_path / "run.trace"
    with TraceWriter(path, clock=TickClock()) as writer:
        first = writer.append("turn", {"step": 1})
        second = writer.append("action", {"name": "List Files"})
    assert (first.seq, second.seq) == (1, 2)
    events = read_trace(path)
    assert [e.seq for e in events] == [1, 2]
    assert events[0].payload == {"step": 1}
    assert events[0].timestamp == 0.0


def test_append_rejects_unknown_kind(tmp_path):
    with TraceWriter(tmp_path / "t.trace", clock=TickClock()) as writer:
        with pytest.raises(StorageError):
            writer.append("gossip", {})


def test_record_framing_is_length_prefixed_json(tmp_path):
    path = write_events(tmp_path / "t.trace", [("turn", {"a": 1})])
    blob = path.read_bytes()
    (length,) = struct.unpack(">I", blob[:4])
    record = json.loads(blob[4 : 4 + length])
    assert record == {"kind": "turn", "payload": {"a": 1}, "seq": 1, "ts": 0.0}
    assert len(blob) == 4 + length
    # compact separators, keys sorted
    assert b" " not in blob[4 : 4 + length].replace(b'"payload"', b"")[:20]


def test_encode_decode_round_trip():
    event = TraceEvent(seq=7, kind="summary", timestamp=3.5, payload={"x": [1, 2]})
    blob = encode_event(event)
    (length,) = struct.unpack(">I", blob[:4])
    decoded = TraceEvent.from_dict(json.loads(blob[4:]))
    assert len(blob) == 4 + length
    assert decoded == event


def test_replay_identity(tmp_path):
    """Writing the events a reader returns reproduces the file byte for byte."""
    path = write_events(
        tmp_path / "a.trace",
        [("turn", {"step": 1}), ("action", {"name": "X", "input": {}}),
         ("observation", {"text": "ok"}), ("state_change", {"status": "completed"})],
    )
    events = read_trace(path)
    copy = tmp_path / "b.trace"
    with TraceWriter(copy, clock=TickClock()) as writer:
        for event in events:
            writer.append(event.kind, event.payload)
    assert copy.read_bytes() == path.read_bytes()


def test_torn_tail_is_discarded_on_read(tmp_path):
    path = write_events(
        tmp_path / "t.trace", [("turn", {"i": 1}), ("turn", {"i": 2})]
    )
    intact = path.read_bytes()
    path.write_bytes(intact + struct.pack(">I", 999) + b'{"partial')
    events, clean = scan_trace(path)
    assert [e.payload["i"] for e in events] == [1, 2]
    assert clean == len(intact)
    # read_trace hides the bookkeeping but returns the same prefix
    assert [e.seq for e in read_trace(path)] == [1, 2]


def test_writer_truncates_torn_tail_and_resumes_seq(tmp_path):
    path = write_events(tmp_path / "t.trace", [("turn", {"i": 1}), ("turn", {"i": 2})])
    intact = path.read_bytes()
    path.write_bytes(intact + b"\x00\x00\x00\x10garbage")
    with TraceWriter(path, clock=TickClock(start=2.0)) as writer:
        assert writer.last_seq == 2
        writer.append("turn", {"i": 3})
    events = read_trace(path)
    assert [e.seq for e in events] == [1, 2, 3]
    assert path.read_bytes()[: len(intact)] == intact


def test_corrupt_length_header_stops_the_scan(tmp_path):
    path = write_events(tmp_path / "t.trace", [("turn", {"i": 1})])
    good = path.read_bytes()
    # a length far past MAX_RECORD_BYTES reads as corruption, not a huge alloc
    path.write_bytes(good + struct.pack(">I", 2**31) + b"x" * 50)
    events, clean = scan_trace(path)
    assert len(events) == 1 and clean == len(good)


def test_reader_polls_incrementally(tmp_path):
    path = tmp_path / "t.trace"
    reader = TraceReader(path)
    assert reader.poll() == []
    with TraceWriter(path, clock=TickClock()) as writer:
        writer.append("turn", {"i": 1})
        assert [e.seq for e in reader.poll()] == [1]
        assert reader.poll() == []
        writer.append("turn", {"i": 2})
        writer.append("turn", {"i": 3})
        assert [e.seq for e in reader.poll()] == [2, 3]


def test_missing_trace_reads_empty(tmp_path):
    assert read_trace(tmp_path / "never_written.trace") == []


def test_run_handle_status_transitions(tmp_path):
    handle = RunHandle("r1", "demo", trace_path=tmp_path / "t.trace", created_at=0.0)
    assert handle.status == "running"
    handle.set_status("awaiting_feedback")
    handle.set_status("running")
    handle.set_status("completed")
    assert handle.is_terminal
    with pytest.raises(RunTerminal):
        handle.set_status("running")
    with pytest.raises(ValueError):
        RunHandle("r2", "demo", trace_path=tmp_path / "t.trace", created_at=0.0).set_status("meditating")


def test_run_handle_feedback_queue_and_flags(tmp_path):
    handle = RunHandle("r1", "demo", trace_path=tmp_path / "t.trace", created_at=0.0)
    handle.post_feedback(FeedbackMessage(author="ada", text="try a higher lr"))
    handle.post_feedback(FeedbackMessage(author="ada", text="and more epochs"))
    drained = handle.drain_feedback()
    assert [m.text for m in drained] == ["try a higher lr", "and more epochs"]
    assert handle.drain_feedback() == []
    assert handle.next_feedback(timeout=0.01) is None

    assert not handle.pause_requested
    handle.request_pause()
    assert handle.pause_requested
    handle.clear_pause()
    assert not handle.pause_requested
    handle.request_abort()
    assert handle.abort_requested

    handle.set_status("completed")
    with pytest.raises(RunTerminal):
        handle.post_feedback(FeedbackMessage(author="ada", text="too late"))


def test_next_feedback_wakes_on_post(tmp_path):
    handle = RunHandle("r1", "demo", trace_path=tmp_path / "t.trace", created_at=0.0)
    received = []

    def waiter():
        received.append(handle.next_feedback(timeout=5.0))

    thread = threading.Thread(target=waiter)
    thread.start()
    handle.post_feedback(FeedbackMessage(author="bo", text="hello"))
    thread.join(timeout=5.0)
    assert received and received[0].text == "hello"


def test_feedback_message_to_dict():
    message = FeedbackMessage(author="a", text="t", in_reply_to=3, timestamp=1.5)
    assert message.to_dict() == {
        "author": "a",
        "text": "t",
        "in_reply_to": 3,
        "timestamp": 1.5,
    }


def test_run_host_register_get_list(tmp_path):
    host = RunHost(clock=TickClock())
    first = host.register("alpha", tmp_path / "a.trace")
    second = host.register("beta", tmp_path / "b.trace", run_id="fixed-id")
    assert second.run_id == "fixed-id"
    assert len(first.run_id) == 12
    assert host.get(first.run_id) is first
    with pytest.raises(UnknownRun):
        host.get("nope")
    with pytest.raises(ValueError):
        host.register("dup", tmp_path / "c.trace", run_id="fixed-id")
    assert [h.title for h in host.list_runs()] == ["alpha", "beta"]
