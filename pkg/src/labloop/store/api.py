"""HTTP face of the run registry.

Four endpoints: list runs, fetch one, stream trace events as NDJSON, and
post feedback or control actions. Event streams follow a live run until
it reaches a terminal status, so a console can tail an experiment as it
happens and resume from any sequence number after a disconnect.

Errors are machine-readable: every non-2xx body is
``{"error": {"code": ..., "message": ...}}``.
"""

from __future__ import annotations

import json
import time

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, StreamingResponse

from ..errors import RunTerminal, UnknownRun
from .runs import FeedbackMessage, RunHandle, RunHost
from .trace import TraceReader, read_trace

TOKEN_HEADER = "x-labloop-token"

CONTROL_ACTIONS = ("pause", "resume", "abort")


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"error": {"code": code, "message": message}}
    )


def _summary(handle: RunHandle) -> dict:
    return {
        "run_id": handle.run_id,
        "title": handle.title,
        "status": handle.status,
        "created_at": handle.created_at,
    }


def build_api(
    host: RunHost, token: str | None = None, poll_interval: float = 0.05
) -> FastAPI:
    app = FastAPI(title="labloop run store")

    def auth_error(request: Request) -> JSONResponse | None:
        if token and request.headers.get(TOKEN_HEADER) != token:
            return _error(401, "unauthorized", "missing or wrong access token")
        return None

    def lookup(run_id: str) -> RunHandle:
        return host.get(run_id)

    @app.get("/runs")
    async def list_runs(request: Request):
        if err := auth_error(request):
            return err
        return {"runs": [_summary(h) for h in host.list_runs()]}

    @app.get("/runs/{run_id}")
    async def get_run(run_id: str, request: Request):
        if err := auth_error(request):
            return err
        try:
            handle = lookup(run_id)
        except UnknownRun as exc:
            return _error(404, "unknown_run", str(exc))
        events = read_trace(handle.trace_path)
        detail = _summary(handle)
        detail["last_seq"] = events[-1].seq if events else 0
        return detail

    @app.get("/runs/{run_id}/events")
    async def stream_events(run_id: str, request: Request):
        if err := auth_error(request):
            return err
        try:
            handle = lookup(run_id)
        except UnknownRun as exc:
            return _error(404, "unknown_run", str(exc))
        try:
            from_seq = int(request.query_params.get("from", "1"))
        except ValueError:
            return _error(400, "bad_request", "'from' must be an integer")

        def ndjson():
            reader = TraceReader(handle.trace_path)
            while True:
                # order matters: check terminal, then drain, so the tail
                # written just before the status flip is never dropped
                terminal = handle.is_terminal
                for event in reader.poll():
                    if event.seq >= from_seq:
                        yield json.dumps(event.to_dict(), sort_keys=True) + "\n"
                if terminal:
                    return
                time.sleep(poll_interval)

        return StreamingResponse(ndjson(), media_type="application/x-ndjson")

    @app.post("/runs/{run_id}/feedback")
    async def post_feedback(run_id: str, request: Request):
        if err := auth_error(request):
            return err
        try:
            handle = lookup(run_id)
        except UnknownRun as exc:
            return _error(404, "unknown_run", str(exc))
        try:
            body = await request.json()
        except ValueError:
            return _error(400, "bad_request", "body must be JSON")
        author = body.get("author")
        text = body.get("text")
        in_reply_to = body.get("in_reply_to")
        if not isinstance(author, str) or not author.strip():
            return _error(400, "bad_request", "'author' must be a non-empty string")
        if not isinstance(text, str) or not text.strip():
            return _error(400, "bad_request", "'text' must be a non-empty string")
        if in_reply_to is not None and not isinstance(in_reply_to, int):
            return _error(400, "bad_request", "'in_reply_to' must be an integer seq")
        message = FeedbackMessage(
            author=author.strip(),
            text=text.strip(),
            in_reply_to=in_reply_to,
            timestamp=host.clock.now(),
        )
        try:
            handle.post_feedback(message)
        except RunTerminal as exc:
            return _error(409, "run_terminal", str(exc))
        return {"queued": True, "run_id": run_id}

    @app.post("/runs/{run_id}/control")
    async def control(run_id: str, request: Request):
        if err := auth_error(request):
            return err
        try:
            handle = lookup(run_id)
        except UnknownRun as exc:
            return _error(404, "unknown_run", str(exc))
        try:
            body = await request.json()
        except ValueError:
            return _error(400, "bad_request", "body must be JSON")
        action = body.get("action")
        if action not in CONTROL_ACTIONS:
            return _error(
                400, "bad_request", f"'action' must be one of {list(CONTROL_ACTIONS)}"
            )
        if handle.is_terminal:
            return _error(409, "run_terminal", f"run {run_id} already finished")
        if action == "pause":
            handle.request_pause()
            if handle.status == "running":
                handle.set_status("paused")
        elif action == "resume":
            handle.clear_pause()
            if handle.status == "paused":
                handle.set_status("running")
        else:
            handle.request_abort()
        return {"run_id": run_id, "action": action, "status": handle.status}

    return app
