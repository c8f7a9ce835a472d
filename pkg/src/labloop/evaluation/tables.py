"""Recorded comparison tables and plain-text report rendering.

Recorded tables live as fixtures: per-task values per column plus the
average each source printed. Rendering always recomputes the average so a
stale record cannot hide behind its own printout.
"""

from __future__ import annotations

import json

from ..fixtures import fixture_path
from .metrics import RunMetrics, aggregate_table

RECORDED_TABLES = (
    "improvement_by_task",
    "success_by_task",
    "idea_review",
    "design_review",
)


def load_recorded_table(name: str) -> dict:
    path = fixture_path("tables", f"{name}.json")
    return json.loads(path.read_text(encoding="utf-8"))


def recompute_averages(table: dict) -> dict[str, float]:
    """Column averages recomputed from per-task values."""
    tasks = table["tasks"]
    return {
        column: aggregate_table(dict(zip(tasks, values)))
        for column, values in table["columns"].items()
    }


def render_comparison_table(table: dict, title: str = "") -> str:
    """Task-by-column text table with a computed Average row."""
    tasks = table["tasks"]
    columns = table["columns"]
    averages = recompute_averages(table)
    label_width = max(len("Average"), *(len(task) for task in tasks))
    col_width = max(12, *(len(name) for name in columns))
    lines = []
    if title:
        lines.append(title)
    header = "Task".ljust(label_width) + "".join(
        f"  {name.rjust(col_width)}" for name in columns
    )
    lines.append(header)
    lines.append("-" * len(header))
    for index, task in enumerate(tasks):
        row = task.ljust(label_width) + "".join(
            f"  {values[index]:>{col_width}.1f}" for values in columns.values()
        )
        lines.append(row)
    lines.append("-" * len(header))
    lines.append(
        "Average".ljust(label_width)
        + "".join(f"  {averages[name]:>{col_width}.2f}" for name in columns)
    )
    return "\n".join(lines) + "\n"


def render_review_table(table: dict, title: str = "") -> str:
    """Criterion-by-reviewer table for recorded idea/design reviews."""
    lines = []
    if title:
        lines.append(title)
    sections = [(name, table[name]) for name in ("manual", "automated") if name in table]
    width = max(
        len("Criterion"),
        *(len(criterion) for _, rows in sections for criterion in rows),
    )
    header = f"{'Criterion'.ljust(width)}  {'baseline':>9}  {'agent':>9}"
    for name, rows in sections:
        lines.append(f"[{name}]")
        lines.append(header)
        for criterion, scores in rows.items():
            lines.append(
                f"{criterion.ljust(width)}  {scores['baseline']:>9.1f}  {scores['agent']:>9.1f}"
            )
    if "similarity" in table:
        sim = table["similarity"]
        lines.append(
            f"{'Similarity'.ljust(width)}  {sim['baseline']:>9.2f}  {sim['agent']:>9.2f}"
        )
    return "\n".join(lines) + "\n"


def render_run_report(runs: list[RunMetrics]) -> str:
    """Per-run improvement table over actual experiment outcomes."""
    if not runs:
        return "no runs to report\n"
    label_width = max(len("Average"), *(len(run.task) for run in runs))
    lines = [
        f"{'Task'.ljust(label_width)}  {'metric':>10}  {'baseline':>12}  "
        f"{'final':>12}  {'improvement':>12}  outcome"
    ]
    lines.append("-" * len(lines[0]))
    for run in runs:
        lines.append(
            f"{run.task.ljust(label_width)}  {run.metric:>10}  {run.baseline:>12.6g}  "
            f"{run.final:>12.6g}  {run.improvement:>11.2f}%  "
            + ("success" if run.succeeded else "no gain")
        )
    # keyed by position: repeated trials of one task must all count
    average = aggregate_table({str(i): run.improvement for i, run in enumerate(runs)})
    lines.append("-" * len(lines[0]))
    lines.append(f"{'Average'.ljust(label_width)}  {'':>10}  {'':>12}  {'':>12}  {average:>11.2f}%")
    return "\n".join(lines) + "\n"
