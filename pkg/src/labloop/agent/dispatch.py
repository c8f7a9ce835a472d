"""Action dispatch: protocol tool names wired to their implementations.

Every tool failure becomes observation text. The loop must keep turning
no matter what the model asked for, so nothing here raises on bad input;
only programming bugs are allowed to escape.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import LabloopError, TimedOut
from ..mltools.datasets import process_dataset, retrieve_dataset
from ..mltools.training import (
    evaluate_predictions,
    execute_on_test,
    retrieve_model,
    train_model,
)
from ..protocol import Action
from ..sandbox import (
    copy_file,
    execute_script,
    list_files,
    read_lines,
    read_text,
    undo_edit,
    write_with_history,
)
from ..textutil import strip_code_fences, truncate_to_budget
from .state import ExperimentalSetup, RunState

RESUBMIT_REFUSAL = "You can only submit once."

NO_HUB = "No retrieval hub is configured for this run."
NO_TASK = "No task package is configured for this run."

_UNDERSTAND_PROMPT = """\
Read the file content below and answer the request.

Request: {things_to_look_for}

File {file_name}:
{content}
"""

_EDIT_PROMPT = """\
Here is the current content of {script_name}:
```python
{content}
```

Edit it by following this instruction exactly:
{edit_instruction}

Reply with the complete content of the file after the edit, nothing else.
"""

_REFLECTION_PROMPT = """\
You are working on this research problem:
{research_problem}

Progress so far:
{history}

Reflect on the following and answer directly:
{things_to_reflect_on}
"""


@dataclass
class DispatchResult:
    observation: str
    final_answer: str | None = None
    help_request: str | None = None


def _split_dirs(raw: str) -> list[str]:
    return [part.strip() for part in raw.split(":") if part.strip()]


def _as_int(raw: str, name: str) -> int:
    try:
        return int(float(raw))
    except ValueError:
        raise LabloopError(f"{name} must be a number, got {raw!r}") from None


def _script_output(result) -> str:
    parts = [part for part in (result.stdout, result.stderr) if part]
    text = "\n".join(parts).strip()
    if result.exit_code != 0:
        text = f"script exited with code {result.exit_code}\n{text}".strip()
    return text or "script produced no output"


def dispatch_action(
    action: Action, setup: ExperimentalSetup, state: RunState
) -> DispatchResult:
    """Run one tool call; the observation is always a plain string."""
    handler = _HANDLERS.get(action.name)
    if handler is None:
        return DispatchResult(observation=f"Unknown tool {action.name!r}.")
    try:
        return handler(action.input, setup, state)
    except TimedOut as exc:
        tail = "\n".join(part for part in (exc.stdout, exc.stderr) if part)
        return DispatchResult(observation=f"{exc}\n{tail}".strip())
    except (LabloopError, ValueError, OSError) as exc:
        return DispatchResult(observation=str(exc))


def _list_files(inputs, setup, state):
    entries = list_files(setup.workspace, inputs["dir_path"])
    return DispatchResult(observation="\n".join(entries) or "(empty directory)")


def _copy_file(inputs, setup, state):
    message = copy_file(setup.workspace, inputs["source"], inputs["destination"])
    return DispatchResult(observation=message)


def _undo_edit(inputs, setup, state):
    return DispatchResult(observation=undo_edit(setup.workspace, inputs["script_name"]))


def _execute_script(inputs, setup, state):
    result = execute_script(setup.workspace, inputs["script_name"])
    return DispatchResult(observation=_script_output(result))


def _request_help(inputs, setup, state):
    return DispatchResult(observation="", help_request=inputs["request"])


def _final_answer(inputs, setup, state):
    if state.submitted:
        return DispatchResult(observation=RESUBMIT_REFUSAL)
    state.submitted = True
    return DispatchResult(
        observation="Final answer submitted.", final_answer=inputs["final_answer"]
    )


def _understand_file(inputs, setup, state):
    content = read_text(setup.workspace, inputs["file_name"])
    reply = setup.gateway.ask(
        _UNDERSTAND_PROMPT.format(
            things_to_look_for=inputs["things_to_look_for"],
            file_name=inputs["file_name"],
            content=truncate_to_budget(content, 16_000),
        ),
        session_tag="tool:understand_file",
    )
    return DispatchResult(observation=reply.strip())


def _inspect_lines(inputs, setup, state):
    start = _as_int(inputs["start_line_number"], "start_line_number")
    end = _as_int(inputs["end_line_number"], "end_line_number")
    return DispatchResult(
        observation=read_lines(setup.workspace, inputs["script_name"], start, end)
    )


def _edit_script(inputs, setup, state):
    script_name = inputs["script_name"]
    try:
        content = read_text(setup.workspace, script_name)
    except LabloopError:
        content = ""
    reply = setup.gateway.ask(
        _EDIT_PROMPT.format(
            script_name=script_name,
            content=content,
            edit_instruction=inputs["edit_instruction"],
        ),
        session_tag="tool:edit_script",
    )
    new_content = strip_code_fences(reply)
    if new_content and not new_content.endswith("\n"):
        new_content += "\n"
    write_with_history(
        setup.workspace,
        inputs["save_name"],
        new_content,
        edit_instruction=inputs["edit_instruction"],
    )
    return DispatchResult(
        observation=f"The edited file is saved to {inputs['save_name']}. "
        f"Here is the new content:\n{new_content}"
    )


def _reflection(inputs, setup, state):
    history = "\n\n".join(s.render() for s in state.summaries[-5:]) or "(no steps yet)"
    reply = setup.gateway.ask(
        _REFLECTION_PROMPT.format(
            research_problem=setup.research_problem,
            history=history,
            things_to_reflect_on=inputs["things_to_reflect_on"],
        ),
        session_tag="tool:reflection",
    )
    return DispatchResult(observation=reply.strip())


def _retrieve_dataset(inputs, setup, state):
    if setup.hub is None:
        return DispatchResult(observation=NO_HUB)
    save_dir = inputs["save_dir"]
    candidate = retrieve_dataset(
        inputs["instruction"], setup.workspace.resolve(save_dir), setup.hub
    )
    splits = ", ".join(f"{name}={rows}" for name, rows in sorted(candidate.splits.items()))
    return DispatchResult(
        observation=(
            f"Retrieved dataset {candidate.name!r} to {save_dir}. "
            f"Splits: {splits}. Columns: {', '.join(candidate.columns)}."
        )
    )


def _retrieve_model(inputs, setup, state):
    if setup.hub is None:
        return DispatchResult(observation=NO_HUB)
    candidates = retrieve_model(inputs["instruction"], setup.hub)
    if not candidates:
        return DispatchResult(observation="No model matched the instruction.")
    lines = []
    for candidate in candidates:
        line = f"{candidate.name} (score {candidate.score:g})"
        if candidate.description:
            line += f": {candidate.description}"
        lines.append(line)
    return DispatchResult(observation="\n".join(lines))


def _process_dataset(inputs, setup, state):
    report = process_dataset(
        inputs["instruction"],
        _split_dirs(inputs["load_dirs"]),
        _split_dirs(inputs["save_dirs"]),
        setup.gateway,
        setup.workspace,
    )
    return DispatchResult(observation=report)


def _train_model(inputs, setup, state):
    if setup.task is None:
        return DispatchResult(observation=NO_TASK)
    hyperparameters = {
        key: inputs[key]
        for key in ("epochs", "batch_size", "warmup_steps", "weight_decay", "learning_rate")
    }
    result_dir = train_model(setup.task, hyperparameters, inputs["result_dir"], setup.workspace)
    return DispatchResult(
        observation=(
            f"Trained {inputs['model_name']} for {inputs['epochs']} epochs; "
            f"model saved to {result_dir}/model.json."
        )
    )


def _execute_model(inputs, setup, state):
    count = execute_on_test(
        inputs["result_dir"],
        _split_dirs(inputs["load_dirs"]),
        inputs["save_path"],
        _as_int(inputs["batch_size"], "batch_size"),
        inputs["input_column"],
        setup.workspace,
    )
    return DispatchResult(
        observation=f"Executed the model on {count} test rows; "
        f"predictions saved to {inputs['save_path']}."
    )


def _evaluate_model(inputs, setup, state):
    scores = evaluate_predictions(
        _split_dirs(inputs["load_dirs"]),
        inputs["save_path"],
        inputs["output_column"],
        setup.workspace,
    )
    return DispatchResult(
        observation="\n".join(f"{name}: {value:.6g}" for name, value in scores.items())
    )


_HANDLERS = {
    "List Files": _list_files,
    "Copy File": _copy_file,
    "Undo Edit Script": _undo_edit,
    "Execute Script": _execute_script,
    "Request Help": _request_help,
    "Final Answer": _final_answer,
    "Understand File": _understand_file,
    "Inspect Script Lines": _inspect_lines,
    "Edit Script (AI)": _edit_script,
    "Reflection": _reflection,
    "Retrieve Dataset": _retrieve_dataset,
    "Retrieve Model": _retrieve_model,
    "Process Dataset": _process_dataset,
    "Train Model": _train_model,
    "Execute Model on Test Set": _execute_model,
    "Evaluate Model": _evaluate_model,
}
