"""Run configuration, per-run state, and the experiment wiring bundle."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from ..gateway import Gateway
from ..protocol import StepSummary
from ..sandbox import Workspace

if TYPE_CHECKING:
    from ..ideation import ResearchIdea
    from ..mltools.hub import HubProvider
    from ..mltools.taskpkg import TaskPackage


@dataclass
class RunConfig:
    step_budget: int = 50
    retry_budget: int = 2
    feedback_timeout: float = 300.0
    pause_poll: float = 0.05
    prompt_char_budget: int = 24_000
    observation_char_budget: int = 20_000

    def __post_init__(self):
        if self.step_budget < 1:
            raise ValueError("step_budget must be at least 1")
        if self.retry_budget < 0:
            raise ValueError("retry_budget must be non-negative")


TERMINAL_MAP = {
    "completed": "completed",
    "budget_exhausted": "budget_exhausted",
    "aborted": "aborted",
    "failed": "failed",
}


@dataclass
class RunOutcome:
    status: str
    answer: str = ""
    reason: str = ""

    def __post_init__(self):
        if self.status not in TERMINAL_MAP:
            raise ValueError(f"unknown outcome status {self.status!r}")

    def to_dict(self) -> dict:
        out = {"status": self.status}
        if self.answer:
            out["answer"] = self.answer
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass
class RunState:
    steps_taken: int = 0
    summaries: list[StepSummary] = field(default_factory=list)
    submitted: bool = False
    outcome: RunOutcome | None = None
    pending_feedback: list[str] = field(default_factory=list)


@dataclass
class ExperimentalSetup:
    """Everything a run needs, bundled so dispatch stays a pure function."""

    workspace: Workspace
    gateway: Gateway
    research_problem: str
    hub: "HubProvider | None" = None
    task: "TaskPackage | None" = None
    idea: "ResearchIdea | None" = None
