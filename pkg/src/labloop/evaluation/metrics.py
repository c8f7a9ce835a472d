"""Quantitative outcome metrics: improvement, success rates, aggregation.

All percentages are relative to the baseline metric. Table averages run in
decimal arithmetic because binary float summation drifts on exactly the
tenths-valued data these tables hold.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from decimal import Decimal

from ..errors import EmptyMap, EmptyTrials, ZeroBaseline

SUCCESS_THRESHOLD_PCT = 10.0

DIRECTIONS = ("higher_better", "lower_better")


def improvement_pct(baseline: float, final: float, direction: str) -> float:
    """Relative improvement of final over baseline, in percent."""
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    if baseline == 0:
        raise ZeroBaseline("baseline metric is zero; relative improvement undefined")
    if direction == "higher_better":
        return (final - baseline) / baseline * 100.0
    return (baseline - final) / baseline * 100.0


@dataclass
class TrialResult:
    baseline: float
    final: float
    direction: str = "higher_better"

    @property
    def improvement(self) -> float:
        return improvement_pct(self.baseline, self.final, self.direction)

    @property
    def succeeded(self) -> bool:
        return self.improvement >= SUCCESS_THRESHOLD_PCT


def success_rate(trials: list[TrialResult]) -> float:
    """Percentage of trials clearing the improvement threshold."""
    if not trials:
        raise EmptyTrials("success rate over zero trials is undefined")
    wins = sum(1 for trial in trials if trial.succeeded)
    return wins / len(trials) * 100.0


def aggregate_table(per_task: dict[str, float]) -> float:
    """Mean of per-task values in decimal arithmetic."""
    if not per_task:
        raise EmptyMap("cannot average an empty task map")
    total = sum((Decimal(str(v)) for v in per_task.values()), Decimal(0))
    return float(total / len(per_task))


@dataclass
class RunMetrics:
    """Outcome of one experiment run against its baseline."""

    task: str
    metric: str
    direction: str
    baseline: float
    final: float

    @property
    def improvement(self) -> float:
        return improvement_pct(self.baseline, self.final, self.direction)

    @property
    def succeeded(self) -> bool:
        return self.improvement >= SUCCESS_THRESHOLD_PCT

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "metric": self.metric,
            "direction": self.direction,
            "baseline": self.baseline,
            "final": self.final,
            "improvement_pct": self.improvement,
            "succeeded": self.succeeded,
        }


_TOKEN = re.compile(r"[a-z0-9]+")


def _term_frequencies(text: str) -> Counter:
    return Counter(_TOKEN.findall(text.lower()))


def similarity(a: str, b: str) -> float:
    """Term-frequency cosine similarity in [0, 1]; empty text scores 0."""
    freq_a = _term_frequencies(a)
    freq_b = _term_frequencies(b)
    if not freq_a or not freq_b:
        return 0.0
    dot = sum(count * freq_b[token] for token, count in freq_a.items())
    norm_a = math.sqrt(sum(c * c for c in freq_a.values()))
    norm_b = math.sqrt(sum(c * c for c in freq_b.values()))
    return dot / (norm_a * norm_b)
