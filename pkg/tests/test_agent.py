"""Tests for action dispatch, step prompts, the run loop, and the trial harness."""

from __future__ import annotations

import threading
import time

import pytest

from labloop.agent.dispatch import (
    NO_HUB,
    NO_TASK,
    RESUBMIT_REFUSAL,
    DispatchResult,
    dispatch_action,
)
from labloop.agent.loop import NO_FEEDBACK_OBSERVATION, run_loop
from labloop.agent.prompts import build_step_prompt, render_history, render_idea_brief
from labloop.agent.state import ExperimentalSetup, RunConfig, RunOutcome, RunState
from labloop.agent.trial import measure_task, run_trial
from labloop.corpus import ProblemFrame, PromptContext, ResearchPaper
from labloop.errors import ArtifactMissing, ExecFailed, UnknownMetric
from labloop.gateway import load_scripted_session, scripted_gateway
from labloop.ideation import ExperimentPlan, Hypothesis, PlanStage, ResearchIdea
from labloop.mltools import StubHub, load_task_package
from labloop.protocol import Action, StepSummary, default_registry
from labloop.sandbox import ExecutionPolicy, Workspace, read_text, seed_workspace, undo_edit
from labloop.store import FeedbackMessage, RunHandle, TraceWriter, read_trace

VALID_SUMMARY = (
    "[Reasoning]: checked the script\n"
    "[Action]: ran one tool\n"
    "[Observation]: it worked\n"
    "[Feedback]: none"
)


def turn_text(action, action_input):
    return (
        "Reflection: the last observation was fine.\n"
        "Research Plan and Status: keep following the plan.\n"
        "Fact Check: nothing new to check.\n"
        "Thought: take the next step.\n"
        "Questions:\n"
        f"Action: {action}\n"
        f"Action Input: {action_input}\n"
    )


def make_setup(tmp_path, task_dir, replies=(), **kwargs):
    ws = seed_workspace(tmp_path / "ws", task_dir / "prototype")
    gw = scripted_gateway(list(replies))
    return ExperimentalSetup(
        workspace=ws,
        gateway=gw,
        research_problem="tune the toy trainer until the loss drops",
        **kwargs,
    )


def trace_kinds(path):
    return [event.kind for event in read_trace(path)]


# ---------------------------------------------------------------- dispatch


def test_dispatch_unknown_tool(tmp_path, task_dir):
    setup = make_setup(tmp_path, task_dir)
    result = dispatch_action(Action(name="Fly To Mars"), setup, RunState())
    assert result == DispatchResult(observation="Unknown tool 'Fly To Mars'.")


def test_dispatch_list_files(tmp_path, task_dir):
    setup = make_setup(tmp_path, task_dir)
    action = Action(name="List Files", input={"dir_path": "."})
    result = dispatch_action(action, setup, RunState())
    assert result.observation == "data.csv\neval.py\ntrain.py"


def test_dispatch_copy_file(tmp_path, task_dir):
    setup = make_setup(tmp_path, task_dir)
    action = Action(
        name="Copy File",
        input={"source": "train.py", "destination": "backup/train_v0.py"},
    )
    result = dispatch_action(action, setup, RunState())
    assert result.observation == "File train.py copied to backup/train_v0.py"
    assert (setup.workspace.root / "backup" / "train_v0.py").is_file()


def test_dispatch_execute_script_runs_trainer(tmp_path, task_dir):
    setup = make_setup(tmp_path, task_dir)
    action = Action(name="Execute Script", input={"script_name": "train.py"})
    result = dispatch_action(action, setup, RunState())
    assert "w=" in result.observation
    assert "final_loss=" in result.observation
    assert result.final_answer is None and result.help_request is None


def test_dispatch_execute_reports_nonzero_exit(tmp_path, task_dir):
    setup = make_setup(tmp_path, task_dir)
    (setup.workspace.root / "boom.py").write_text(
        "import sys\nprint('before')\nsys.exit(3)\n"
    )
    action = Action(name="Execute Script", input={"script_name": "boom.py"})
    result = dispatch_action(action, setup, RunState())
    assert result.observation.startswith("script exited with code 3")
    assert "before" in result.observation


def test_dispatch_timeout_keeps_partial_output(tmp_path, task_dir):
    setup = make_setup(tmp_path, task_dir)
    setup.workspace.policy = ExecutionPolicy(timeout=0.5)
    (setup.workspace.root / "slow.py").write_text(
        "import time\nprint('started', flush=True)\ntime.sleep(30)\n"
    )
    action = Action(name="Execute Script", input={"script_name": "slow.py"})
    result = dispatch_action(action, setup, RunState())
    assert "exceeded the 0.5s timeout" in result.observation
    assert "started" in result.observation


def test_dispatch_errors_become_observations(tmp_path, task_dir):
    # tool failures must never raise out of dispatch
    setup = make_setup(tmp_path, task_dir)
    action = Action(
        name="Inspect Script Lines",
        input={"script_name": "missing.py", "start_line_number": "1", "end_line_number": "5"},
    )
    result = dispatch_action(action, setup, RunState())
    assert "missing.py" in result.observation
    assert result.final_answer is None


def test_dispatch_inspect_coerces_numeric_strings(tmp_path, task_dir):
    setup = make_setup(tmp_path, task_dir)
    action = Action(
        name="Inspect Script Lines",
        input={"script_name": "train.py", "start_line_number": "1.0", "end_line_number": "2"},
    )
    result = dispatch_action(action, setup, RunState())
    assert "Baseline trainer" in result.observation

    action.input["start_line_number"] = "x"
    result = dispatch_action(action, setup, RunState())
    assert result.observation == "start_line_number must be a number, got 'x'"


def test_dispatch_final_answer_only_once(tmp_path, task_dir):
    setup = make_setup(tmp_path, task_dir)
    state = RunState()
    action = Action(name="Final Answer", input={"final_answer": "the fix worked"})
    first = dispatch_action(action, setup, state)
    assert first.observation == "Final answer submitted."
    assert first.final_answer == "the fix worked"
    assert state.submitted

    second = dispatch_action(action, setup, state)
    assert second.observation == RESUBMIT_REFUSAL
    assert second.final_answer is None


def test_dispatch_request_help_passthrough(tmp_path, task_dir):
    setup = make_setup(tmp_path, task_dir)
    action = Action(name="Request Help", input={"request": "which learning rate?"})
    result = dispatch_action(action, setup, RunState())
    assert result.observation == ""
    assert result.help_request == "which learning rate?"


def test_dispatch_edit_script_strips_fences(tmp_path, task_dir):
    reply = "```python\nprint('patched')\n```"
    setup = make_setup(tmp_path, task_dir, replies=[reply])
    prompts = []
    setup.gateway._record_hook = lambda req, resp: prompts.append(req.prompt)
    action = Action(
        name="Edit Script (AI)",
        input={
            "script_name": "train.py",
            "edit_instruction": "replace everything with a print",
            "save_name": "train.py",
        },
    )
    result = dispatch_action(action, setup, RunState())
    assert result.observation == (
        "The edited file is saved to train.py. Here is the new content:\n"
        "print('patched')\n"
    )
    assert read_text(setup.workspace, "train.py") == "print('patched')\n"
    assert "Baseline trainer" in prompts[0]
    assert "replace everything with a print" in prompts[0]
    # the edit went through history, so it can be rolled back
    undo_edit(setup.workspace, "train.py")
    assert "Baseline trainer" in read_text(setup.workspace, "train.py")


def test_dispatch_edit_script_creates_new_file(tmp_path, task_dir):
    setup = make_setup(tmp_path, task_dir, replies=["x = 1"])
    action = Action(
        name="Edit Script (AI)",
        input={
            "script_name": "fresh.py",
            "edit_instruction": "create a constant",
            "save_name": "fresh.py",
        },
    )
    result = dispatch_action(action, setup, RunState())
    assert read_text(setup.workspace, "fresh.py") == "x = 1\n"
    assert result.observation.startswith("The edited file is saved to fresh.py.")


def test_dispatch_understand_file(tmp_path, task_dir):
    setup = make_setup(tmp_path, task_dir, replies=["  It sets LEARNING_RATE to 0.0001.  "])
    prompts = []
    setup.gateway._record_hook = lambda req, resp: prompts.append(req.prompt)
    action = Action(
        name="Understand File",
        input={"file_name": "train.py", "things_to_look_for": "the learning rate"},
    )
    result = dispatch_action(action, setup, RunState())
    assert result.observation == "It sets LEARNING_RATE to 0.0001."
    assert "the learning rate" in prompts[0]
    assert "LEARNING_RATE = 0.0001" in prompts[0]


def test_dispatch_reflection_sees_recent_summaries_only(tmp_path, task_dir):
    setup = make_setup(tmp_path, task_dir, replies=["Progress is steady."])
    prompts = []
    setup.gateway._record_hook = lambda req, resp: prompts.append(req.prompt)
    state = RunState(
        summaries=[
            StepSummary(reasoning=f"milestone-{i}", action="a", observation="o")
            for i in range(7)
        ]
    )
    action = Action(name="Reflection", input={"things_to_reflect_on": "what remains?"})
    result = dispatch_action(action, setup, state)
    assert result.observation == "Progress is steady."
    # only the five newest summaries are replayed
    assert "milestone-6" in prompts[0]
    assert "milestone-2" in prompts[0]
    assert "milestone-1" not in prompts[0]


@pytest.mark.parametrize(
    "action",
    [
        Action(name="Retrieve Dataset", input={"instruction": "any", "save_dir": "d"}),
        Action(name="Retrieve Model", input={"instruction": "any"}),
    ],
)
def test_dispatch_hub_tools_without_hub(tmp_path, task_dir, action):
    setup = make_setup(tmp_path, task_dir)
    assert dispatch_action(action, setup, RunState()).observation == NO_HUB


def test_dispatch_train_without_task(tmp_path, task_dir):
    setup = make_setup(tmp_path, task_dir)
    action = Action(
        name="Train Model",
        input={
            "model_name": "linear-sgd",
            "result_dir": "output",
            "epochs": "10",
            "batch_size": "1",
            "warmup_steps": "0",
            "weight_decay": "0.0",
            "learning_rate": "0.1",
        },
    )
    assert dispatch_action(action, setup, RunState()).observation == NO_TASK


def test_dispatch_retrieve_model_lists_candidates(tmp_path, task_dir, fixtures_dir):
    hub = StubHub(models_path=fixtures_dir / "hub_models.jsonl")
    setup = make_setup(tmp_path, task_dir, hub=hub)
    action = Action(
        name="Retrieve Model",
        input={"instruction": "a linear regression model trained with gradient descent"},
    )
    result = dispatch_action(action, setup, RunState())
    lines = result.observation.splitlines()
    assert lines[0].startswith("linear-sgd (score ")
    assert "Single-feature linear regressor" in lines[0]


def test_dispatch_full_tool_chain(tmp_path, task_dir, fixtures_dir):
    hub = StubHub(datasets_path=fixtures_dir / "hub_datasets.jsonl")
    task = load_task_package(task_dir)
    setup = make_setup(tmp_path, task_dir, hub=hub, task=task)
    state = RunState()

    retrieve = dispatch_action(
        Action(
            name="Retrieve Dataset",
            input={"instruction": "a single-feature line for regression", "save_dir": "data_hub"},
        ),
        setup,
        state,
    )
    assert retrieve.observation == (
        "Retrieved dataset 'toy-line' to data_hub. "
        "Splits: test=3, train=6. Columns: model_input, model_output."
    )

    train = dispatch_action(
        Action(
            name="Train Model",
            input={
                "model_name": "linear-sgd",
                "result_dir": "output",
                "epochs": "200",
                "batch_size": "1",
                "warmup_steps": "0",
                "weight_decay": "0.0",
                "learning_rate": "0.1",
            },
        ),
        setup,
        state,
    )
    assert train.observation == (
        "Trained linear-sgd for 200 epochs; model saved to output/model.json."
    )

    execute = dispatch_action(
        Action(
            name="Execute Model on Test Set",
            input={
                "result_dir": "output",
                "load_dirs": "data_hub",
                "save_path": "preds.json",
                "batch_size": "2",
                "input_column": "model_input",
            },
        ),
        setup,
        state,
    )
    assert execute.observation == (
        "Executed the model on 3 test rows; predictions saved to preds.json."
    )

    evaluate = dispatch_action(
        Action(
            name="Evaluate Model",
            input={
                "load_dirs": "data_hub",
                "save_path": "preds.json",
                "output_column": "model_output",
            },
        ),
        setup,
        state,
    )
    scores = dict(line.split(": ") for line in evaluate.observation.splitlines())
    assert float(scores["mse"]) < 1e-6
    assert float(scores["pearson"]) == pytest.approx(1.0)


# ------------------------------------------------------------------ prompts


def test_build_step_prompt_layout(tmp_path, task_dir):
    setup = make_setup(tmp_path, task_dir)
    prompt = build_step_prompt(setup, RunState(), default_registry(), RunConfig())
    assert prompt.startswith("You are a research agent")
    assert "Tools:" in prompt
    assert "List Files" in prompt and "Evaluate Model" in prompt
    assert "Research Problem: tune the toy trainer until the loss drops" in prompt
    assert "Always respond in this exact format:" in prompt
    assert "(no steps taken yet)" in prompt
    assert prompt.endswith("Respond with your next step now.")


def test_build_step_prompt_includes_idea_brief(tmp_path, task_dir):
    idea = ResearchIdea(
        context=PromptContext(
            paper=ResearchPaper(title="Toy Regression"), frame=ProblemFrame()
        ),
        related=[],
        hypothesis=Hypothesis(method="Use a warm restart.", rationale="It helps."),
        plan=ExperimentPlan(
            design=[
                PlanStage(number=1, title="Prepare data"),
                PlanStage(number=2, title="Train", body="fit the model"),
            ],
            rationale="standard",
            raw="1. Prepare data\n2. Train: fit the model",
        ),
    )
    assert render_idea_brief(ExperimentalSetup(
        workspace=make_setup(tmp_path, task_dir).workspace,
        gateway=scripted_gateway([]),
        research_problem="p",
        idea=idea,
    )) == (
        "Proposed method:\nUse a warm restart.\n\n"
        "Planned experiment design:\n1. Prepare data\n2. Train: fit the model\n"
    )

    setup = make_setup(tmp_path, task_dir, idea=idea)
    prompt = build_step_prompt(setup, RunState(), default_registry(), RunConfig())
    assert "Proposed method:\nUse a warm restart." in prompt
    assert "2. Train: fit the model" in prompt


def test_build_step_prompt_renders_pending_feedback(tmp_path, task_dir):
    setup = make_setup(tmp_path, task_dir)
    state = RunState(pending_feedback=["use momentum", "log the losses"])
    prompt = build_step_prompt(setup, state, default_registry(), RunConfig())
    assert "New human feedback to address:\n- use momentum\n- log the losses" in prompt


def test_render_history_empty():
    assert render_history([], 1_000) == "(no steps taken yet)"


def test_render_history_drops_oldest_first():
    summaries = [
        StepSummary(reasoning=f"r{i} " + "x" * 120, action="a", observation="o")
        for i in range(10)
    ]
    text = render_history(summaries, 400)
    assert text.startswith("[earlier steps dropped to fit the prompt budget]")
    assert "r9" in text
    assert "r0" not in text
    assert "Step 10:" in text
    # the newest summary survives any budget
    tiny = render_history(summaries, 1)
    assert "r9" in tiny and "Step 10:" in tiny


# --------------------------------------------------------------------- loop


def test_loop_replays_recorded_toy_session(tmp_path, task_dir, agent_session):
    ws = seed_workspace(tmp_path / "ws", task_dir / "prototype")
    gw = scripted_gateway(load_scripted_session(agent_session))
    setup = ExperimentalSetup(
        workspace=ws,
        gateway=gw,
        research_problem="lower the training loss of train.py",
    )
    trace_path = tmp_path / "run.trace"
    with TraceWriter(trace_path) as writer:
        state = run_loop(setup, writer=writer)

    assert state.outcome.status == "completed"
    assert "learning rate" in state.outcome.answer
    assert state.steps_taken == 4
    assert state.submitted
    assert len(state.summaries) == 3
    assert "LEARNING_RATE = 0.1" in read_text(ws, "train.py")
    # three full steps then the final-answer step, which skips its summary
    assert trace_kinds(trace_path) == (
        ["turn", "action", "observation", "summary"] * 3
        + ["turn", "action", "observation", "state_change"]
    )
    events = read_trace(trace_path)
    assert events[-1].payload == state.outcome.to_dict()


def test_loop_garbage_provider_exhausts_step_budget(tmp_path, task_dir):
    config = RunConfig(step_budget=3, retry_budget=1)
    setup = make_setup(tmp_path, task_dir, replies=["total nonsense"] * 6)
    state = run_loop(setup, config=config)
    assert state.outcome.status == "budget_exhausted"
    assert state.outcome.reason == "step budget of 3 spent"
    assert state.steps_taken == 3
    assert len(state.summaries) == 3
    for summary in state.summaries:
        assert summary.reasoning == "The response did not follow the required format."
        assert summary.action == "none; the reply was rejected"
        assert summary.observation.startswith("Your response could not be used:")
    tags = [record.session_tag for record in setup.gateway.calls]
    assert tags == [
        "step:1", "step:1:retry1",
        "step:2", "step:2:retry1",
        "step:3", "step:3:retry1",
    ]


def test_loop_retry_recovers_from_one_bad_reply(tmp_path, task_dir):
    replies = ["??", turn_text("Final Answer", '{"final_answer": "done"}')]
    setup = make_setup(tmp_path, task_dir, replies=replies)
    prompts = []
    setup.gateway._record_hook = lambda req, resp: prompts.append(req.prompt)
    state = run_loop(setup, config=RunConfig(step_budget=5, retry_budget=2))
    assert state.outcome.status == "completed"
    assert state.outcome.answer == "done"
    assert state.steps_taken == 1
    assert prompts[1].startswith(prompts[0])
    assert "Your previous reply was rejected:" in prompts[1]
    assert prompts[1].endswith("Respond again following the required format exactly.")


def test_loop_token_starvation_fails_run(tmp_path, task_dir):
    setup = make_setup(tmp_path, task_dir, replies=["whatever"])
    setup.gateway.token_budget = 10
    state = run_loop(setup, config=RunConfig(step_budget=5))
    assert state.outcome.status == "failed"
    assert "budget" in state.outcome.reason


def test_loop_abort_flag_wins(tmp_path, task_dir):
    handle = RunHandle("r1", "toy", tmp_path / "r1.trace", created_at=0.0)
    handle.request_abort()
    setup = make_setup(tmp_path, task_dir)
    state = run_loop(setup, handle=handle)
    assert state.outcome.status == "aborted"
    assert state.outcome.reason == "abort requested"
    assert handle.status == "aborted"
    assert setup.gateway.calls == []


def test_loop_pause_parks_until_cleared(tmp_path, task_dir):
    handle = RunHandle("r2", "toy", tmp_path / "r2.trace", created_at=0.0)
    handle.request_pause()
    setup = make_setup(
        tmp_path, task_dir, replies=[turn_text("Final Answer", '{"final_answer": "ok"}')]
    )
    trace_path = tmp_path / "run.trace"
    config = RunConfig(pause_poll=0.01)
    done = {}

    def drive():
        with TraceWriter(trace_path) as writer:
            done["state"] = run_loop(setup, config=config, writer=writer, handle=handle)

    worker = threading.Thread(target=drive)
    worker.start()
    deadline = time.monotonic() + 5.0
    while time.monotonic() < deadline:
        paused = any(
            e.kind == "state_change" and e.payload == {"status": "paused"}
            for e in read_trace(trace_path)
        )
        if paused:
            break
        time.sleep(0.01)
    assert worker.is_alive()
    assert "turn" not in trace_kinds(trace_path)

    handle.clear_pause()
    worker.join(timeout=5.0)
    assert not worker.is_alive()
    assert done["state"].outcome.status == "completed"
    kinds = trace_kinds(trace_path)
    assert kinds[:3] == ["control", "state_change", "state_change"]
    assert handle.status == "completed"


def test_loop_help_request_times_out_without_handle(tmp_path, task_dir):
    replies = [
        turn_text("Request Help", '{"request": "which learning rate should I try?"}'),
        VALID_SUMMARY,
        turn_text("Final Answer", '{"final_answer": "tried 0.1"}'),
    ]
    setup = make_setup(tmp_path, task_dir, replies=replies)
    trace_path = tmp_path / "run.trace"
    with TraceWriter(trace_path) as writer:
        state = run_loop(setup, writer=writer)
    assert state.outcome.status == "completed"
    events = read_trace(trace_path)
    observations = [e.payload["text"] for e in events if e.kind == "observation"]
    assert observations[0] == NO_FEEDBACK_OBSERVATION
    waits = [e.payload for e in events if e.kind == "state_change"]
    assert waits[0] == {
        "status": "awaiting_feedback",
        "step": 1,
        "request": "which learning rate should I try?",
    }
    assert waits[1] == {"status": "running", "step": 1}


def test_loop_help_request_receives_live_feedback(tmp_path, task_dir):
    handle = RunHandle("r3", "toy", tmp_path / "r3.trace", created_at=0.0)
    replies = [
        turn_text("Request Help", '{"request": "stuck; advice?"}'),
        VALID_SUMMARY,
        turn_text("Final Answer", '{"final_answer": "followed the advice"}'),
    ]
    setup = make_setup(tmp_path, task_dir, replies=replies)
    trace_path = tmp_path / "run.trace"

    def post_later():
        time.sleep(0.05)
        handle.post_feedback(FeedbackMessage(author="ada", text="try a bigger learning rate"))

    poster = threading.Thread(target=post_later)
    poster.start()
    with TraceWriter(trace_path) as writer:
        state = run_loop(
            setup, config=RunConfig(feedback_timeout=5.0), writer=writer, handle=handle
        )
    poster.join()
    assert state.outcome.status == "completed"
    events = read_trace(trace_path)
    observations = [e.payload["text"] for e in events if e.kind == "observation"]
    assert observations[0] == "try a bigger learning rate"
    feedback = [e.payload for e in events if e.kind == "feedback"]
    assert feedback[0]["author"] == "ada"
    assert handle.status == "completed"


def test_loop_unsolicited_feedback_lands_in_next_prompt(tmp_path, task_dir):
    handle = RunHandle("r4", "toy", tmp_path / "r4.trace", created_at=0.0)
    handle.post_feedback(FeedbackMessage(author="ada", text="use momentum"))
    setup = make_setup(
        tmp_path, task_dir, replies=[turn_text("Final Answer", '{"final_answer": "ok"}')]
    )
    prompts = []
    setup.gateway._record_hook = lambda req, resp: prompts.append(req.prompt)
    state = run_loop(setup, handle=handle)
    assert state.outcome.status == "completed"
    assert "New human feedback to address:\n- use momentum" in prompts[0]


# -------------------------------------------------------------------- state


def test_run_config_rejects_bad_budgets():
    with pytest.raises(ValueError):
        RunConfig(step_budget=0)
    with pytest.raises(ValueError):
        RunConfig(retry_budget=-1)
    config = RunConfig()
    assert config.step_budget == 50
    assert config.retry_budget == 2
    assert config.feedback_timeout == 300.0


def test_run_outcome_validates_status():
    with pytest.raises(ValueError):
        RunOutcome("finished")
    outcome = RunOutcome("completed", answer="done")
    assert outcome.to_dict() == {"status": "completed", "answer": "done"}
    assert RunOutcome("failed", reason="oops").to_dict() == {
        "status": "failed",
        "reason": "oops",
    }


# -------------------------------------------------------------------- trial


def test_measure_task_baseline(tmp_path, task_dir):
    task = load_task_package(task_dir)
    ws = seed_workspace(tmp_path / "ws", task.prototype_dir)
    assert measure_task(task, ws) == pytest.approx(13.62017465838942, rel=1e-6)


def test_measure_task_exec_failure(tmp_path, task_dir):
    task = load_task_package(task_dir)
    ws = seed_workspace(tmp_path / "ws", task.prototype_dir)
    (ws.root / "train.py").write_text("import sys\nsys.exit(2)\n")
    with pytest.raises(ExecFailed, match="exited with 2"):
        measure_task(task, ws)


def test_measure_task_missing_metrics_file(tmp_path, task_dir):
    task = load_task_package(task_dir)
    ws = seed_workspace(tmp_path / "ws", task.prototype_dir)
    (ws.root / "eval.py").write_text("print('no metrics written')\n")
    with pytest.raises(ArtifactMissing):
        measure_task(task, ws)


def test_measure_task_unknown_metric(tmp_path, task_dir):
    task = load_task_package(task_dir)
    ws = seed_workspace(tmp_path / "ws", task.prototype_dir)
    (ws.root / "eval.py").write_text(
        "import json\njson.dump({'accuracy': 1.0}, open('metrics.json', 'w'))\n"
    )
    with pytest.raises(UnknownMetric):
        measure_task(task, ws)


def test_run_trial_recorded_session_beats_baseline(tmp_path, task_dir, agent_session):
    task = load_task_package(task_dir)
    ws = seed_workspace(tmp_path / "ws", task.prototype_dir)
    setup = ExperimentalSetup(
        workspace=ws,
        gateway=scripted_gateway(load_scripted_session(agent_session)),
        research_problem="lower the training loss of train.py",
        task=task,
    )
    report = run_trial(setup)
    assert report.state.outcome.status == "completed"
    assert report.metrics.baseline == pytest.approx(13.6202, rel=1e-4)
    assert report.metrics.final < 1e-6
    assert report.metrics.improvement >= 10.0
    assert report.metrics.succeeded


def test_run_trial_requires_task(tmp_path, task_dir):
    setup = make_setup(tmp_path, task_dir)
    with pytest.raises(ValueError, match="task package"):
        run_trial(setup)
