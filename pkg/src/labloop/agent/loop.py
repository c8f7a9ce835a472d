"""The think-act-observe loop driving one experiment run.

Each step: build the prompt, parse the reply into a turn, dispatch the
action, record the observation, then compress the step into a summary.
Malformed replies get a bounded number of re-asks and then burn a step
with a corrective observation, so any provider, however adversarial,
terminates within the step budget. Control flags and human feedback are
honored at step boundaries; the loop is the only writer of its trace.
"""

from __future__ import annotations

import time

from ..errors import LabloopError, MalformedInput, MissingHeader, ParseError, UnknownTool
from ..gateway import Gateway
from ..protocol import (
    AgentTurn,
    StepSummary,
    ToolRegistry,
    default_registry,
    parse_turn,
    summarize_step,
)
from ..store import RunHandle, TraceWriter
from ..textutil import truncate_to_budget
from .dispatch import dispatch_action
from .prompts import build_step_prompt
from .state import ExperimentalSetup, RunConfig, RunOutcome, RunState

NO_FEEDBACK_OBSERVATION = (
    "No human feedback arrived within the wait window. "
    "Continue with your best judgment."
)

_ABORTED = object()


def _trace(writer: TraceWriter | None, kind: str, payload: dict) -> None:
    if writer is not None:
        writer.append(kind, payload)


def _clip_words(text: str, limit: int) -> str:
    words = text.split()
    return " ".join(words[:limit])


def _ask_turn(
    gateway: Gateway,
    prompt: str,
    registry: ToolRegistry,
    config: RunConfig,
    step_no: int,
) -> tuple[AgentTurn | None, str, Exception | None]:
    error: Exception | None = None
    raw = ""
    current = prompt
    for attempt in range(config.retry_budget + 1):
        tag = f"step:{step_no}" if attempt == 0 else f"step:{step_no}:retry{attempt}"
        raw = gateway.ask(current, session_tag=tag)
        try:
            return parse_turn(raw, registry), raw, None
        except (MissingHeader, UnknownTool, MalformedInput) as exc:
            error = exc
            current = (
                prompt
                + f"\n\nYour previous reply was rejected: {exc} "
                "Respond again following the required format exactly."
            )
    return None, raw, error


def _attach_feedback(state: RunState, text: str) -> None:
    if state.summaries:
        last = state.summaries[-1]
        last.feedback = f"{last.feedback}\n{text}".strip()
    else:
        state.pending_feedback.append(text)


def _drain_feedback(handle: RunHandle | None, writer, state: RunState) -> None:
    if handle is None:
        return
    for message in handle.drain_feedback():
        _trace(writer, "feedback", message.to_dict())
        _attach_feedback(state, message.text)


def _sync_control(handle, writer, config: RunConfig, state: RunState) -> bool:
    """Honor pause/abort flags and unsolicited feedback. False means abort."""
    _drain_feedback(handle, writer, state)
    if handle is None:
        return True
    if handle.abort_requested:
        return False
    if handle.pause_requested:
        _trace(writer, "control", {"action": "pause"})
        _trace(writer, "state_change", {"status": "paused"})
        while handle.pause_requested and not handle.abort_requested:
            time.sleep(config.pause_poll)
        _drain_feedback(handle, writer, state)
        if handle.abort_requested:
            return False
        _trace(writer, "state_change", {"status": "running"})
        if handle.status == "paused":
            handle.set_status("running")
    return True


def _await_feedback(handle, writer, config: RunConfig, request: str, step_no: int):
    """Block on the feedback queue; None on timeout, _ABORTED on abort."""
    _trace(
        writer,
        "state_change",
        {"status": "awaiting_feedback", "step": step_no, "request": request},
    )
    message = None
    if handle is not None:
        if handle.status == "running":
            handle.set_status("awaiting_feedback")
        deadline = time.monotonic() + config.feedback_timeout
        while time.monotonic() < deadline:
            if handle.abort_requested:
                return _ABORTED
            remaining = deadline - time.monotonic()
            message = handle.next_feedback(timeout=max(0.01, min(0.1, remaining)))
            if message is not None:
                break
        if message is not None:
            _trace(writer, "feedback", message.to_dict())
        if handle.status == "awaiting_feedback":
            handle.set_status("running")
    _trace(writer, "state_change", {"status": "running", "step": step_no})
    return message


def _summarize(gateway, turn: AgentTurn, observation: str, feedback: str) -> StepSummary:
    try:
        return summarize_step(turn, observation, gateway, feedback=feedback)
    except ParseError:
        # summarizer would not cooperate; fall back to a mechanical digest
        return StepSummary(
            reasoning=_clip_words(turn.thought, 80),
            action=_clip_words(f"{turn.action.name} with input {turn.action.input}", 60),
            observation=_clip_words(observation, 140),
            feedback=_clip_words(feedback, 20),
        )


def run_loop(
    setup: ExperimentalSetup,
    config: RunConfig | None = None,
    writer: TraceWriter | None = None,
    handle: RunHandle | None = None,
    registry: ToolRegistry | None = None,
) -> RunState:
    """Drive the loop until final answer, abort, failure, or budget end."""
    config = config or RunConfig()
    registry = registry or default_registry()
    state = RunState()
    try:
        while state.steps_taken < config.step_budget:
            if not _sync_control(handle, writer, config, state):
                state.outcome = RunOutcome("aborted", reason="abort requested")
                break
            step_no = state.steps_taken + 1
            prompt = build_step_prompt(setup, state, registry, config)
            turn, raw, parse_error = _ask_turn(
                setup.gateway, prompt, registry, config, step_no
            )
            _trace(writer, "turn", {"step": step_no, "raw": raw})
            if state.pending_feedback:
                state.pending_feedback.clear()
            if turn is None:
                observation = (
                    f"Your response could not be used: {parse_error} "
                    "No action was taken. Use the exact headers and give "
                    "Action Input as valid JSON."
                )
                _trace(writer, "observation", {"step": step_no, "text": observation})
                state.summaries.append(
                    StepSummary(
                        reasoning="The response did not follow the required format.",
                        action="none; the reply was rejected",
                        observation=_clip_words(observation, 140),
                    )
                )
                state.steps_taken += 1
                continue
            _trace(
                writer,
                "action",
                {"step": step_no, "name": turn.action.name, "input": turn.action.input},
            )
            result = dispatch_action(turn.action, setup, state)
            observation = result.observation
            feedback_text = ""
            if result.help_request is not None:
                message = _await_feedback(
                    handle, writer, config, result.help_request, step_no
                )
                if message is _ABORTED:
                    state.outcome = RunOutcome("aborted", reason="abort requested")
                    break
                if message is None:
                    observation = NO_FEEDBACK_OBSERVATION
                else:
                    observation = message.text
                    feedback_text = message.text
            observation = truncate_to_budget(observation, config.observation_char_budget)
            _trace(writer, "observation", {"step": step_no, "text": observation})
            state.steps_taken += 1
            if result.final_answer is not None:
                state.outcome = RunOutcome("completed", answer=result.final_answer)
                break
            summary = _summarize(setup.gateway, turn, observation, feedback_text)
            state.summaries.append(summary)
            _trace(
                writer,
                "summary",
                {
                    "step": step_no,
                    "reasoning": summary.reasoning,
                    "action": summary.action,
                    "observation": summary.observation,
                    "feedback": summary.feedback,
                },
            )
        if state.outcome is None:
            state.outcome = RunOutcome(
                "budget_exhausted",
                reason=f"step budget of {config.step_budget} spent",
            )
    except LabloopError as exc:
        state.outcome = RunOutcome("failed", reason=str(exc))
    outcome = state.outcome
    _trace(writer, "state_change", outcome.to_dict())
    if handle is not None and not handle.is_terminal:
        handle.set_status(outcome.status)
    return state
