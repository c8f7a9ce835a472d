from .dispatch import NO_HUB, NO_TASK, RESUBMIT_REFUSAL, DispatchResult, dispatch_action
from .loop import NO_FEEDBACK_OBSERVATION, run_loop
from .prompts import build_step_prompt, render_history, render_idea_brief
from .state import ExperimentalSetup, RunConfig, RunOutcome, RunState
from .trial import TrialReport, measure_task, run_trial

__all__ = [
    "NO_HUB",
    "NO_TASK",
    "RESUBMIT_REFUSAL",
    "DispatchResult",
    "dispatch_action",
    "NO_FEEDBACK_OBSERVATION",
    "run_loop",
    "build_step_prompt",
    "render_history",
    "render_idea_brief",
    "ExperimentalSetup",
    "RunConfig",
    "RunOutcome",
    "RunState",
    "TrialReport",
    "measure_task",
    "run_trial",
]
