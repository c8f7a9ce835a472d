"""Trial harness: baseline measurement, agent run, final measurement.

Both measurements run the task's own train and eval commands on the
current workspace state, so the final number reflects whatever code the
agent left behind, not just whichever artifacts happen to be lying
around.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..errors import ArtifactMissing, ExecFailed, UnknownMetric
from ..evaluation import RunMetrics
from ..mltools.taskpkg import TaskPackage
from ..sandbox import Workspace, execute_script
from ..store import RunHandle, TraceWriter
from .loop import run_loop
from .state import ExperimentalSetup, RunConfig, RunState


def measure_task(task: TaskPackage, workspace: Workspace) -> float:
    """Train and evaluate with the task's commands; return the metric."""
    for command in (task.baseline_command, task.eval_command):
        result = execute_script(workspace, command)
        if result.exit_code != 0:
            raise ExecFailed(
                f"{command} exited with {result.exit_code}: "
                f"{(result.stderr or result.stdout)[:500]}"
            )
    metrics_path = workspace.resolve(task.metrics_file)
    if not metrics_path.is_file():
        raise ArtifactMissing(f"{task.eval_command} wrote no {task.metrics_file}")
    metrics = json.loads(metrics_path.read_text(encoding="utf-8"))
    if task.metric not in metrics:
        raise UnknownMetric(f"{task.metrics_file} holds no {task.metric!r} value")
    return float(metrics[task.metric])


@dataclass
class TrialReport:
    metrics: RunMetrics
    state: RunState


def run_trial(
    setup: ExperimentalSetup,
    config: RunConfig | None = None,
    writer: TraceWriter | None = None,
    handle: RunHandle | None = None,
) -> TrialReport:
    """Measure the pristine task, run the agent, measure again."""
    if setup.task is None:
        raise ValueError("run_trial needs a task package on the setup")
    task = setup.task
    baseline = measure_task(task, setup.workspace)
    state = run_loop(setup, config=config, writer=writer, handle=handle)
    final = measure_task(task, setup.workspace)
    metrics = RunMetrics(
        task=task.name,
        metric=task.metric,
        direction=task.direction,
        baseline=baseline,
        final=final,
    )
    return TrialReport(metrics=metrics, state=state)
