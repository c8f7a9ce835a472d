"""HTTP endpoints over the run registry: auth, errors, control, streaming."""

from __future__ import annotations

import json
import threading
import time

import pytest
from fastapi.testclient import TestClient

from labloop.clock import TickClock
from labloop.store import RunHost, TOKEN_HEADER, TraceWriter, build_api


@pytest.fixture
def host(tmp_path):
    registry = RunHost(clock=TickClock())
    handle = registry.register("demo run", tmp_path / "demo.trace", run_id="demo")
    with TraceWriter(handle.trace_path, clock=TickClock()) as writer:
        writer.append("turn", {"step": 1, "raw": "..."})
        writer.append("observation", {"step": 1, "text": "ok"})
    return registry


@pytest.fixture
def client(host):
    return TestClient(build_api(host))


def error_code(response) -> str:
    return response.json()["error"]["code"]


def test_list_runs(client):
    body = client.get("/runs").json()
    assert [r["run_id"] for r in body["runs"]] == ["demo"]
    assert body["runs"][0]["status"] == "running"
    assert body["runs"][0]["title"] == "demo run"


def test_get_run_reports_last_seq(client):
    body = client.get("/runs/demo").json()
    assert body["run_id"] == "demo"
    assert body["last_seq"] == 2


def test_unknown_run_is_machine_readable(client):
    response = client.get("/runs/ghost")
    assert response.status_code == 404
    assert error_code(response) == "unknown_run"


def test_token_is_enforced_on_every_route(host):
    client = TestClient(build_api(host, token="s3cret"))
    for method, path in [
        ("get", "/runs"),
        ("get", "/runs/demo"),
        ("get", "/runs/demo/events"),
        ("post", "/runs/demo/feedback"),
        ("post", "/runs/demo/control"),
    ]:
        response = getattr(client, method)(path)
        assert response.status_code == 401, path
        assert error_code(response) == "unauthorized"
    ok = client.get("/runs", headers={TOKEN_HEADER: "s3cret"})
    assert ok.status_code == 200


def test_feedback_validation_and_queueing(client, host):
    assert client.post("/runs/demo/feedback", content=b"not json").status_code == 400
    assert (
        client.post("/runs/demo/feedback", json={"author": "", "text": "x"}).status_code
        == 400
    )
    assert (
        client.post("/runs/demo/feedback", json={"author": "a", "text": " "}).status_code
        == 400
    )
    assert (
        client.post(
            "/runs/demo/feedback",
            json={"author": "a", "text": "t", "in_reply_to": "one"},
        ).status_code
        == 400
    )

    response = client.post(
        "/runs/demo/feedback", json={"author": "ada", "text": "go faster", "in_reply_to": 2}
    )
    assert response.json() == {"queued": True, "run_id": "demo"}
    queued = host.get("demo").drain_feedback()
    assert len(queued) == 1
    assert (queued[0].author, queued[0].text, queued[0].in_reply_to) == (
        "ada",
        "go faster",
        2,
    )


def test_feedback_to_finished_run_conflicts(client, host):
    host.get("demo").set_status("completed")
    response = client.post("/runs/demo/feedback", json={"author": "a", "text": "t"})
    assert response.status_code == 409
    assert error_code(response) == "run_terminal"


def test_control_pause_resume_abort(client, host):
    handle = host.get("demo")
    body = client.post("/runs/demo/control", json={"action": "pause"}).json()
    assert body["status"] == "paused"
    assert handle.pause_requested

    body = client.post("/runs/demo/control", json={"action": "resume"}).json()
    assert body["status"] == "running"
    assert not handle.pause_requested

    client.post("/runs/demo/control", json={"action": "abort"})
    assert handle.abort_requested

    assert (
        client.post("/runs/demo/control", json={"action": "explode"}).status_code == 400
    )
    handle.set_status("aborted")
    response = client.post("/runs/demo/control", json={"action": "pause"})
    assert response.status_code == 409


def test_event_stream_ends_at_terminal_status(client, host):
    host.get("demo").set_status("completed")
    with client.stream("GET", "/runs/demo/events") as response:
        lines = [json.loads(l) for l in response.iter_lines() if l]
    assert [e["seq"] for e in lines] == [1, 2]
    assert lines[0]["kind"] == "turn"


def test_event_stream_resumes_from_seq(client, host):
    host.get("demo").set_status("completed")
    with client.stream("GET", "/runs/demo/events?from=2") as response:
        lines = [json.loads(l) for l in response.iter_lines() if l]
    assert [e["seq"] for e in lines] == [2]

    bad = client.get("/runs/demo/events?from=two")
    assert bad.status_code == 400


def test_event_stream_follows_a_live_writer(tmp_path):
    registry = RunHost(clock=TickClock())
    handle = registry.register("live", tmp_path / "live.trace", run_id="live")
    client = TestClient(build_api(registry, poll_interval=0.01))

    def produce():
        with TraceWriter(handle.trace_path, clock=TickClock()) as writer:
            for i in range(1, 6):
                writer.append("turn", {"i": i})
                time.sleep(0.01)
            writer.append("state_change", {"status": "completed"})
        handle.set_status("completed")

    thread = threading.Thread(target=produce)
    thread.start()
    with client.stream("GET", "/runs/live/events") as response:
        seqs = [json.loads(l)["seq"] for l in response.iter_lines() if l]
    thread.join()
    # nothing dropped, nothing reordered, the tail before the flip included
    assert seqs == [1, 2, 3, 4, 5, 6]
