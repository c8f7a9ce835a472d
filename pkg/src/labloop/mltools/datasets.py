"""On-disk dataset format plus retrieval, alignment checks, and processing.

A materialized dataset is a directory holding `manifest.json` (name,
columns, split row counts) and one CSV file per split. Processing runs an
LLM-written transform inside the sandbox and enforces the mandated
`model_input` / `model_output` output columns.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import (
    CountMismatch,
    NoMatch,
    TransformFailed,
    WriteError,
)
from ..gateway import Gateway
from ..ideation import ExperimentPlan
from ..sandbox import Workspace, execute_script, write_with_history
from ..textutil import strip_code_fences
from .hub import DatasetCandidate, HubProvider, rank_records

MANIFEST_NAME = "manifest.json"

PROCESSED_INPUT_COLUMN = "model_input"
PROCESSED_OUTPUT_COLUMN = "model_output"


@dataclass
class AlignmentCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class AlignmentReport:
    checks: list[AlignmentCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def write_dataset(
    directory: str | Path,
    name: str,
    columns: list[str],
    splits: dict[str, list[dict]],
) -> None:
    """Write splits as CSV files plus a manifest."""
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        for split, rows in splits.items():
            with open(directory / f"{split}.csv", "w", newline="", encoding="utf-8") as fh:
                writer = csv.DictWriter(fh, fieldnames=columns)
                writer.writeheader()
                for row in rows:
                    writer.writerow({col: row.get(col, "") for col in columns})
        manifest = {
            "name": name,
            "columns": list(columns),
            "splits": {split: len(rows) for split, rows in splits.items()},
        }
        (directory / MANIFEST_NAME).write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        raise WriteError(f"cannot write dataset under {directory}: {exc}") from exc


def load_manifest(directory: str | Path) -> dict:
    path = Path(directory) / MANIFEST_NAME
    if not path.is_file():
        raise FileNotFoundError(f"no dataset manifest at {path}")
    return json.loads(path.read_text(encoding="utf-8"))


def read_split(directory: str | Path, split: str) -> list[dict]:
    path = Path(directory) / f"{split}.csv"
    if not path.is_file():
        raise FileNotFoundError(f"dataset at {directory} has no {split!r} split")
    with open(path, newline="", encoding="utf-8") as fh:
        return [dict(row) for row in csv.DictReader(fh)]


def dataset_candidate(directory: str | Path) -> DatasetCandidate:
    """Describe an already-materialized dataset directory."""
    manifest = load_manifest(directory)
    return DatasetCandidate(
        name=manifest["name"],
        columns=list(manifest["columns"]),
        splits=dict(manifest["splits"]),
        save_dir=str(directory),
    )


def retrieve_dataset(
    instruction: str,
    save_dir: str | Path,
    hub: HubProvider,
) -> DatasetCandidate:
    """Materialize the best-matching hub dataset under save_dir."""
    ranked = rank_records(hub.search_datasets(instruction), instruction)
    if not ranked:
        raise NoMatch(f"no dataset matches the instruction: {instruction!r}")
    score, record = ranked[0]
    columns = list(record.get("columns", []))
    rows_by_split = {
        split: [dict(zip(columns, row)) for row in rows]
        for split, rows in record.get("rows", {}).items()
    }
    if not rows_by_split:
        raise NoMatch(f"dataset record {record.get('name')!r} carries no split data")
    write_dataset(save_dir, record["name"], columns, rows_by_split)
    candidate = dataset_candidate(save_dir)
    candidate.score = score
    candidate.description = str(record.get("description", ""))
    return candidate


_SPLIT_WORDS = {
    "train": r"\btrain(?:ing)?\b",
    "validation": r"\bvalid(?:ation)?\b",
    "test": r"\btest(?:ing)?\b",
}


def required_splits(plan: ExperimentPlan) -> list[str]:
    """Split names the plan text mentions, in canonical order."""
    text = plan.raw.lower()
    return [split for split, pattern in _SPLIT_WORDS.items() if re.search(pattern, text)]


def post_checkup(
    dataset: DatasetCandidate,
    plan: ExperimentPlan,
    required_columns: tuple[str, ...] = (),
    metric: str | None = None,
    label_column: str = PROCESSED_OUTPUT_COLUMN,
) -> AlignmentReport:
    """Verify a materialized dataset against the plan's requirements.

    Requirements are mechanical: splits the plan text mentions, columns the
    caller demands, and a reference column when a metric must be computable.
    No requirements means a vacuous pass with zero checks.
    """
    report = AlignmentReport()
    for split in required_splits(plan):
        present = split in dataset.splits
        report.checks.append(
            AlignmentCheck(
                name=f"split:{split}",
                passed=present,
                detail="present" if present else f"plan mentions {split!r} but the dataset lacks it",
            )
        )
        if present:
            rows = dataset.splits[split]
            report.checks.append(
                AlignmentCheck(
                    name=f"split:{split}:rows",
                    passed=rows > 0,
                    detail=f"{rows} rows",
                )
            )
    for column in required_columns:
        present = column in dataset.columns
        report.checks.append(
            AlignmentCheck(
                name=f"column:{column}",
                passed=present,
                detail="present" if present else "missing",
            )
        )
    if metric is not None:
        computable = label_column in dataset.columns
        report.checks.append(
            AlignmentCheck(
                name=f"metric:{metric}",
                passed=computable,
                detail=(
                    f"reference column {label_column!r} available"
                    if computable
                    else f"metric {metric!r} needs reference column {label_column!r}"
                ),
            )
        )
    return report


_TRANSFORM_PROMPT = """\
Write the body of a python row transform for a tabular dataset.

Instruction: {instruction}

Input columns: {columns}
Sample rows (as dicts): {samples}

Reply with only python code defining:

def transform(row):
    ...

It receives one row as a dict of strings and must return a dict containing \
at least the keys "model_input" and "model_output". No imports beyond the \
standard library, no file access.
"""

_RUNNER_TEMPLATE = '''\
import csv
import json
import sys
from pathlib import Path

LOAD = Path({load_dir!r})
SAVE = Path({save_dir!r})

{transform_code}

manifest = json.loads((LOAD / "manifest.json").read_text(encoding="utf-8"))
out_columns = None
out_counts = {{}}
SAVE.mkdir(parents=True, exist_ok=True)
for split in manifest["splits"]:
    with open(LOAD / (split + ".csv"), newline="", encoding="utf-8") as fh:
        rows = [dict(r) for r in csv.DictReader(fh)]
    transformed = [transform(dict(row)) for row in rows]
    for row in transformed:
        if "model_input" not in row or "model_output" not in row:
            print("transform dropped a mandated column", file=sys.stderr)
            sys.exit(3)
    if transformed:
        out_columns = list(transformed[0].keys())
    with open(SAVE / (split + ".csv"), "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=out_columns or ["model_input", "model_output"])
        writer.writeheader()
        writer.writerows(transformed)
    out_counts[split] = len(transformed)
(SAVE / "manifest.json").write_text(json.dumps({{
    "name": manifest["name"] + "-processed",
    "columns": out_columns or ["model_input", "model_output"],
    "splits": out_counts,
}}, indent=2, sort_keys=True) + "\\n", encoding="utf-8")
print("processed", sum(out_counts.values()), "rows")
'''


def process_dataset(
    instruction: str,
    load_dirs: list[str],
    save_dirs: list[str],
    gateway: Gateway,
    workspace: Workspace,
) -> str:
    """Transform datasets via a generated script run in the sandbox."""
    if not load_dirs or len(load_dirs) != len(save_dirs):
        raise CountMismatch(
            f"{len(load_dirs)} load dirs vs {len(save_dirs)} save dirs; counts must match and be non-zero"
        )
    reports = []
    for index, (load_dir, save_dir) in enumerate(zip(load_dirs, save_dirs)):
        manifest = load_manifest(workspace.resolve(load_dir))
        first_split = next(iter(manifest["splits"]), None)
        samples = read_split(workspace.resolve(load_dir), first_split)[:3] if first_split else []
        reply = gateway.ask(
            _TRANSFORM_PROMPT.format(
                instruction=instruction,
                columns=manifest["columns"],
                samples=samples,
            ),
            session_tag=f"process_dataset:{index}",
        )
        transform_code = strip_code_fences(reply)
        if "def transform" not in transform_code:
            raise TransformFailed("generated code defines no transform function", reply)
        runner = _RUNNER_TEMPLATE.format(
            load_dir=load_dir, save_dir=save_dir, transform_code=transform_code
        )
        script_name = f"_process_{index}.py"
        write_with_history(workspace, script_name, runner, edit_instruction="dataset transform")
        result = execute_script(workspace, script_name)
        if result.exit_code != 0:
            raise TransformFailed(
                f"transform script failed with exit {result.exit_code}",
                result.stderr or result.stdout,
            )
        reports.append(f"{load_dir} -> {save_dir}: {result.stdout.strip()}")
    return "; ".join(reports)
