"""Task packages: the self-contained unit a run executes against.

Layout: `task.meta` (JSON: name, metric, direction, commands, entrypoints)
next to a `prototype/` directory holding the seed code, and optionally
`fixtures/` with scripted sessions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

META_NAME = "task.meta"

DIRECTIONS = ("higher_better", "lower_better")


@dataclass
class TaskPackage:
    root: Path
    name: str
    metric: str
    direction: str
    baseline_command: str
    eval_command: str
    train_entrypoint: str = ""
    metrics_file: str = "metrics.json"

    @property
    def prototype_dir(self) -> Path:
        return self.root / "prototype"

    @property
    def fixtures_dir(self) -> Path:
        return self.root / "fixtures"


def load_task_package(path: str | Path) -> TaskPackage:
    root = Path(path)
    meta_path = root / META_NAME
    if not meta_path.is_file():
        raise FileNotFoundError(f"task package has no {META_NAME}: {root}")
    if not (root / "prototype").is_dir():
        raise FileNotFoundError(f"task package has no prototype/ directory: {root}")
    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    for key in ("name", "metric", "direction", "baseline_command", "eval_command"):
        if key not in meta:
            raise ValueError(f"{META_NAME} missing field {key!r}")
    if meta["direction"] not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {meta['direction']!r}")
    return TaskPackage(
        root=root,
        name=meta["name"],
        metric=meta["metric"],
        direction=meta["direction"],
        baseline_command=meta["baseline_command"],
        eval_command=meta["eval_command"],
        train_entrypoint=meta.get("train_entrypoint", ""),
        metrics_file=meta.get("metrics_file", "metrics.json"),
    )
