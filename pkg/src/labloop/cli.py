"""Command line interface.

Exit codes: 0 on success, 1 when a run or evaluation fails, 2 on usage
errors (click's default). Offline work uses recorded sessions; live work
needs a chat endpoint, with the API key taken from the environment.
"""

from __future__ import annotations

import json
import sys
import tempfile
import threading
from pathlib import Path

import click
import uvicorn

from .agent import ExperimentalSetup, RunConfig, run_trial
from .clock import SystemClock, TickClock
from .corpus import (
    StubLiteratureProvider,
    build_prompt_context,
    extract_problem,
    load_paper_dir,
    search_recent_works,
)
from .errors import LabloopError
from .evaluation import (
    DIRECTIONS,
    RECORDED_TABLES,
    improvement_pct,
    load_recorded_table,
    render_comparison_table,
    render_review_table,
    render_run_report,
    SUCCESS_THRESHOLD_PCT,
)
from .gateway import Gateway, HttpChatProvider, load_scripted_session, scripted_gateway
from .ideation import ResearchIdea, assemble_idea
from .mltools import StubHub, load_task_package
from .sandbox import seed_workspace
from .store import RunHost, TraceWriter, build_api, read_trace

RUN_TOKEN_BUDGET = 10_000_000


def _build_gateway(session: str | None, api_url: str | None, model: str) -> Gateway:
    if session:
        return scripted_gateway(
            load_scripted_session(session), token_budget=RUN_TOKEN_BUDGET
        )
    if api_url:
        return Gateway(HttpChatProvider(api_url, model), token_budget=RUN_TOKEN_BUDGET)
    raise click.UsageError(
        "provide --session for a recorded run or --api-url for a live provider"
    )


def _gateway_options(fn):
    fn = click.option(
        "--model", default="gpt-4", show_default=True, help="model name for --api-url"
    )(fn)
    fn = click.option("--api-url", default=None, help="chat completion endpoint")(fn)
    fn = click.option(
        "--session",
        type=click.Path(exists=True, dir_okay=False),
        default=None,
        help="recorded session file for offline runs",
    )(fn)
    return fn


class _Cli(click.Group):
    # surface domain errors as clean one-liners, not tracebacks
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except LabloopError as exc:
            raise click.ClickException(str(exc)) from exc


@click.group(cls=_Cli)
def main():
    """Turn a paper into a research idea and run the experiment."""


@main.command()
@click.argument("paper_dir", type=click.Path(exists=True, file_okay=False))
@_gateway_options
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None)
def ingest(paper_dir, session, api_url, model, output):
    """Extract research tasks, gaps, and keywords from a paper directory."""
    paper, warnings = load_paper_dir(paper_dir)
    for warning in warnings:
        click.echo(f"warning: {warning}", err=True)
    gateway = _build_gateway(session, api_url, model)
    frame = extract_problem(paper, gateway)
    payload = {
        "title": paper.title,
        "tasks": frame.tasks,
        "gaps": frame.gaps,
        "keywords": frame.keywords,
    }
    if output:
        Path(output).write_text(
            json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )
        click.echo(f"wrote {output}")
    else:
        click.echo(json.dumps(payload, indent=2, ensure_ascii=False))


@main.command()
@click.argument("paper_dir", type=click.Path(exists=True, file_okay=False))
@_gateway_options
@click.option(
    "--literature",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="record file for offline literature search",
)
@click.option("--limit", default=5, show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False), default="idea.json")
def idea(paper_dir, session, api_url, model, literature, limit, output):
    """Generate a hypothesis and experiment plan from a paper."""
    paper, warnings = load_paper_dir(paper_dir)
    for warning in warnings:
        click.echo(f"warning: {warning}", err=True)
    gateway = _build_gateway(session, api_url, model)
    frame = extract_problem(paper, gateway)
    context = build_prompt_context(paper, frame)
    related = []
    if literature:
        related = search_recent_works(
            context, limit=limit, provider=StubLiteratureProvider(literature)
        )
    result = assemble_idea(context, related, gateway)
    result.save(output)
    click.echo(f"method: {result.hypothesis.method.splitlines()[0]}")
    click.echo(f"plan stages: {len(result.plan.design)}")
    click.echo(f"wrote {output}")


def _serve_in_thread(app, host: str, port: int):
    config = uvicorn.Config(app, host=host, port=port, log_level="warning")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    return server, thread


@main.command()
@click.argument("task_dir", type=click.Path(exists=True, file_okay=False))
@_gateway_options
@click.option("--idea", "idea_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--problem", default=None, help="research problem text for the agent")
@click.option("--workspace", type=click.Path(file_okay=False), default=None)
@click.option("--trace", type=click.Path(dir_okay=False), default=None)
@click.option("--steps", default=50, show_default=True)
@click.option("--listen", default=None, metavar="HOST:PORT", help="serve the run store while running")
@click.option("--token", default=None, help="shared access token for --listen")
@click.option("--hub-models", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--hub-datasets", type=click.Path(exists=True, dir_okay=False), default=None)
def run(
    task_dir, session, api_url, model, idea_path, problem, workspace, trace,
    steps, listen, token, hub_models, hub_datasets,
):
    """Run the experiment agent against a task package."""
    task = load_task_package(task_dir)
    gateway = _build_gateway(session, api_url, model)
    workspace = Path(workspace) if workspace else Path(tempfile.mkdtemp(prefix="labloop-ws-"))
    ws = seed_workspace(workspace, task.prototype_dir)
    loaded_idea = ResearchIdea.load(idea_path) if idea_path else None
    hub = None
    if hub_models or hub_datasets:
        hub = StubHub(hub_models, hub_datasets)
    setup = ExperimentalSetup(
        workspace=ws,
        gateway=gateway,
        research_problem=problem
        or f"Improve the {task.metric} metric of the {task.name} task over the provided baseline.",
        hub=hub,
        task=task,
        idea=loaded_idea,
    )
    trace_path = Path(trace) if trace else workspace.parent / f"{task.name}.trace"
    # recorded sessions get a ticking clock so traces are reproducible
    clock = TickClock() if session else SystemClock()
    writer = TraceWriter(trace_path, clock=clock)

    server = thread = handle = None
    if listen:
        host_name, _, port_text = listen.partition(":")
        registry = RunHost()
        handle = registry.register(task.name, trace_path)
        app = build_api(registry, token=token)
        server, thread = _serve_in_thread(app, host_name or "127.0.0.1", int(port_text))
        click.echo(f"serving run store on http://{host_name or '127.0.0.1'}:{port_text}")

    try:
        report = run_trial(
            setup, config=RunConfig(step_budget=steps), writer=writer, handle=handle
        )
    finally:
        writer.close()
        if server is not None:
            server.should_exit = True
            thread.join(timeout=5)

    outcome = report.state.outcome
    click.echo(f"outcome: {outcome.status}")
    if outcome.answer:
        click.echo(f"answer: {outcome.answer}")
    if outcome.reason:
        click.echo(f"reason: {outcome.reason}")
    click.echo(render_run_report([report.metrics]).rstrip())
    click.echo(f"trace: {trace_path}")
    if outcome.status != "completed":
        sys.exit(1)


@main.group(name="eval")
def eval_group():
    """Quantitative evaluation helpers."""


@eval_group.command("tables")
@click.argument("name", type=click.Choice(RECORDED_TABLES), required=False)
def eval_tables(name):
    """Render recorded comparison tables with recomputed averages."""
    names = [name] if name else list(RECORDED_TABLES)
    for table_name in names:
        table = load_recorded_table(table_name)
        if "columns" in table:
            click.echo(render_comparison_table(table, title=table_name))
        else:
            click.echo(render_review_table(table, title=table_name))


@eval_group.command("improvement")
@click.argument("baseline", type=float)
@click.argument("final", type=float)
@click.argument("direction", type=click.Choice(DIRECTIONS))
def eval_improvement(baseline, final, direction):
    """Relative improvement of FINAL over BASELINE, in percent."""
    pct = improvement_pct(baseline, final, direction)
    verdict = "success" if pct >= SUCCESS_THRESHOLD_PCT else "no gain"
    click.echo(f"improvement: {pct:.2f}% ({verdict})")


@main.command()
@click.argument("trace", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True, help="dump raw events as NDJSON")
def replay(trace, as_json):
    """Re-render a recorded run trace as a readable transcript."""
    events = read_trace(trace)
    if as_json:
        for event in events:
            click.echo(json.dumps(event.to_dict(), sort_keys=True))
        return
    final_status = ""
    for event in events:
        payload = event.payload
        if event.kind == "turn":
            click.echo(f"--- step {payload.get('step', '?')} " + "-" * 40)
            click.echo(payload.get("raw", "").rstrip())
        elif event.kind == "action":
            click.echo(f">>> {payload.get('name')} {json.dumps(payload.get('input', {}))}")
        elif event.kind == "observation":
            click.echo(f"Observation:\n{payload.get('text', '')}")
        elif event.kind == "summary":
            click.echo(
                "[Reasoning]: {reasoning}\n[Action]: {action}\n"
                "[Observation]: {observation}\n[Feedback]: {feedback}".format(
                    **{k: payload.get(k, "") for k in ("reasoning", "action", "observation", "feedback")}
                )
            )
        elif event.kind == "feedback":
            click.echo(f"[feedback from {payload.get('author')}]: {payload.get('text')}")
        elif event.kind in ("control", "state_change"):
            status = payload.get("status", payload.get("action", ""))
            click.echo(f"* {event.kind}: {status}")
            if event.kind == "state_change" and "status" in payload:
                final_status = payload["status"]
    click.echo(f"{len(events)} events" + (f", final status {final_status}" if final_status else ""))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8765, show_default=True, type=int)
@click.option("--token", default=None, help="require this token on every request")
@click.option("--task", "task_dir", type=click.Path(exists=True, file_okay=False), default=None)
@_gateway_options
@click.option("--steps", default=50, show_default=True)
@click.option("--run-title", default=None)
@click.option("--state-dir", type=click.Path(file_okay=False), default=None)
def serve(host, port, token, task_dir, session, api_url, model, steps, run_title, state_dir):
    """Serve the run store API; optionally launch one run on startup."""
    registry = RunHost()
    app = build_api(registry, token=token)
    if task_dir:
        task = load_task_package(task_dir)
        gateway = _build_gateway(session, api_url, model)
        root = Path(state_dir) if state_dir else Path(tempfile.mkdtemp(prefix="labloop-run-"))
        ws = seed_workspace(root / "workspace", task.prototype_dir)
        handle = registry.register(run_title or task.name, root / "run.trace")
        writer = TraceWriter(root / "run.trace", clock=TickClock() if session else SystemClock())
        setup = ExperimentalSetup(
            workspace=ws,
            gateway=gateway,
            research_problem=f"Improve the {task.metric} metric of the {task.name} task over the provided baseline.",
            task=task,
        )

        def launch():
            try:
                run_trial(setup, config=RunConfig(step_budget=steps), writer=writer, handle=handle)
            finally:
                writer.close()

        threading.Thread(target=launch, daemon=True).start()
        click.echo(f"launched run {handle.run_id} ({handle.title})")
    click.echo(f"run store listening on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
