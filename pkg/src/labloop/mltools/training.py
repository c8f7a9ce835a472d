"""Train / execute / evaluate adapters over task-package entrypoints.

The trained artifact is a self-describing `model.json`; the only built-in
predictor is the linear kind the toy trainer writes. Everything else is
the task package's business.
"""

from __future__ import annotations

import json
import os
import statistics
from pathlib import Path

from ..errors import (
    ArtifactMissing,
    ExecFailed,
    MissingEntrypoint,
    NoMatch,
    RowMismatch,
    TimedOut,
    TrainFailed,
    UnknownMetric,
)
from ..sandbox import Workspace, execute_script
from .datasets import read_split
from .hub import HubProvider, ModelCandidate, rank_records
from .taskpkg import TaskPackage

MODEL_FILE = "model.json"

HYPERPARAMETER_FLAGS = ("epochs", "batch_size", "warmup_steps", "weight_decay", "learning_rate")


def _labloop_pythonpath() -> str:
    """PYTHONPATH entry exposing this package to sandboxed entrypoints."""
    import labloop

    # __path__ rather than __file__: editable installs may leave __file__ unset
    package_parent = str(Path(list(labloop.__path__)[0]).resolve().parent)
    existing = os.environ.get("PYTHONPATH", "")
    return package_parent + (os.pathsep + existing if existing else "")


def retrieve_model(
    instruction: str,
    hub: HubProvider,
    require_match: bool = False,
) -> list[ModelCandidate]:
    """Rank hub models against the instruction, best first."""
    ranked = rank_records(hub.search_models(instruction), instruction)
    if not ranked and require_match:
        raise NoMatch(f"no model matches the instruction: {instruction!r}")
    return [
        ModelCandidate(
            name=record["name"],
            description=str(record.get("description", "")),
            score=score,
            task_tags=list(record.get("tags", [])),
        )
        for score, record in ranked
    ]


def _validate_hyperparameters(hp: dict) -> dict:
    out = {}
    try:
        out["epochs"] = int(hp["epochs"])
        out["batch_size"] = int(hp["batch_size"])
        out["warmup_steps"] = int(hp.get("warmup_steps", 0))
        out["weight_decay"] = float(hp.get("weight_decay", 0.0))
        out["learning_rate"] = float(hp["learning_rate"])
    except (KeyError, ValueError, TypeError) as exc:
        raise TrainFailed(f"bad hyperparameters: {exc}", "") from exc
    if out["epochs"] < 1:
        raise TrainFailed("epochs must be at least 1", "")
    if out["batch_size"] < 1:
        raise TrainFailed("batch_size must be at least 1", "")
    if out["warmup_steps"] < 0:
        raise TrainFailed("warmup_steps must be non-negative", "")
    if out["weight_decay"] < 0:
        raise TrainFailed("weight_decay must be non-negative", "")
    if out["learning_rate"] <= 0:
        raise TrainFailed("learning_rate must be positive", "")
    return out


def train_model(
    task_package: TaskPackage,
    hyperparameters: dict,
    result_dir: str,
    workspace: Workspace,
) -> str:
    """Run the task's train entrypoint with hyperparameter flags."""
    if not task_package.train_entrypoint:
        raise MissingEntrypoint(f"task {task_package.name!r} declares no train entrypoint")
    entry = workspace.root / task_package.train_entrypoint
    if not entry.is_file():
        raise MissingEntrypoint(
            f"train entrypoint {task_package.train_entrypoint!r} not found in workspace"
        )
    hp = _validate_hyperparameters(hyperparameters)
    args = ["--result_dir", result_dir]
    for flag in HYPERPARAMETER_FLAGS:
        args += [f"--{flag}", str(hp[flag])]
    try:
        result = execute_script(
            workspace,
            task_package.train_entrypoint,
            args=tuple(args),
            extra_env={"PYTHONPATH": _labloop_pythonpath()},
        )
    except TimedOut as exc:
        raise TrainFailed(str(exc), exc.stderr) from exc
    if result.exit_code != 0:
        raise TrainFailed(
            f"train entrypoint exited with {result.exit_code}", result.stderr or result.stdout
        )
    artifact = workspace.resolve(result_dir) / MODEL_FILE
    if not artifact.is_file():
        raise TrainFailed(f"entrypoint wrote no {MODEL_FILE} under {result_dir!r}", result.stdout)
    return result_dir


def _load_artifact(workspace: Workspace, result_dir: str) -> dict:
    artifact = workspace.resolve(result_dir) / MODEL_FILE
    if not artifact.is_file():
        raise ArtifactMissing(f"no trained artifact at {result_dir}/{MODEL_FILE}")
    return json.loads(artifact.read_text(encoding="utf-8"))


def _predict(model: dict, inputs: list[str]) -> list[float]:
    kind = model.get("kind")
    if kind == "linear":
        w = float(model["w"])
        b = float(model["b"])
        try:
            return [w * float(x) + b for x in inputs]
        except ValueError as exc:
            raise ExecFailed(f"non-numeric input for a linear model: {exc}") from exc
    raise ExecFailed(f"unsupported artifact kind: {kind!r}")


def execute_on_test(
    result_dir: str,
    load_dirs: list[str],
    save_path: str,
    batch_size: int,
    input_column: str,
    workspace: Workspace,
) -> int:
    """Predict over every test split, in order; returns the prediction count."""
    if int(batch_size) < 1:
        raise ExecFailed("batch_size must be at least 1")
    model = _load_artifact(workspace, result_dir)
    predictions: list[float] = []
    for load_dir in load_dirs:
        try:
            rows = read_split(workspace.resolve(load_dir), "test")
        except FileNotFoundError as exc:
            raise ExecFailed(str(exc)) from exc
        inputs = []
        for row in rows:
            if input_column not in row:
                raise ExecFailed(f"{load_dir} rows lack input column {input_column!r}")
            inputs.append(row[input_column])
        for i in range(0, len(inputs), int(batch_size)):
            predictions.extend(_predict(model, inputs[i : i + int(batch_size)]))
    out_path = workspace.resolve(save_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(json.dumps({"predictions": predictions}) + "\n", encoding="utf-8")
    return len(predictions)


def accuracy(references: list, predictions: list) -> float:
    hits = sum(1 for r, p in zip(references, predictions) if str(r) == str(p))
    return hits / len(references)


def mean_squared_error(references: list[float], predictions: list[float]) -> float:
    return sum((r - p) ** 2 for r, p in zip(references, predictions)) / len(references)


def root_mean_squared_error(references: list[float], predictions: list[float]) -> float:
    return mean_squared_error(references, predictions) ** 0.5


def pearson(references: list[float], predictions: list[float]) -> float:
    return statistics.correlation(references, predictions)


METRICS = {
    "accuracy": accuracy,
    "mse": mean_squared_error,
    "rmse": root_mean_squared_error,
    "pearson": pearson,
}


def _as_floats(values: list) -> list[float] | None:
    try:
        return [float(v) for v in values]
    except (TypeError, ValueError):
        return None


def evaluate_predictions(
    load_dirs: list[str],
    save_path: str,
    output_column: str,
    workspace: Workspace,
    metric: str | None = None,
) -> dict[str, float]:
    """Compare stored predictions against test references, row by row."""
    saved = workspace.resolve(save_path)
    if not saved.is_file():
        raise ArtifactMissing(f"no prediction file at {save_path}")
    predictions = json.loads(saved.read_text(encoding="utf-8"))["predictions"]
    references: list = []
    for load_dir in load_dirs:
        for row in read_split(workspace.resolve(load_dir), "test"):
            if output_column not in row:
                raise RowMismatch(f"{load_dir} rows lack output column {output_column!r}")
            references.append(row[output_column])
    if len(references) != len(predictions):
        raise RowMismatch(
            f"{len(predictions)} predictions vs {len(references)} references"
        )
    if not references:
        raise RowMismatch("zero rows to evaluate")
    if metric is not None and metric not in METRICS:
        raise UnknownMetric(f"unsupported metric {metric!r}; known: {sorted(METRICS)}")

    results: dict[str, float] = {}
    ref_floats = _as_floats(references)
    pred_floats = _as_floats(predictions)
    numeric = ref_floats is not None and pred_floats is not None
    results["accuracy"] = accuracy(references, predictions)
    if numeric:
        results["mse"] = mean_squared_error(ref_floats, pred_floats)
        results["rmse"] = root_mean_squared_error(ref_floats, pred_floats)
        try:
            results["pearson"] = pearson(ref_floats, pred_floats)
        except statistics.StatisticsError:
            pass  # constant series: correlation undefined, metric omitted
    if metric is not None:
        if metric not in results:
            raise UnknownMetric(f"metric {metric!r} not computable on these rows")
        return {metric: results[metric]}
    return results
