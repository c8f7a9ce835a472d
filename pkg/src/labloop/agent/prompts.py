"""Step prompt assembly for the experiment loop.

The prompt restates the tool catalog and the response format on every
step, then replays compressed step summaries, oldest first. When history
outgrows the character budget the oldest summaries fall off first; the
most recent steps always survive.
"""

from __future__ import annotations

from ..protocol import StepSummary, ToolRegistry, render_tool_catalog
from .state import ExperimentalSetup, RunConfig, RunState

_FORMAT_BLOCK = """\
Always respond in this exact format:
Reflection: What the previous observation means. If there is an error, what caused it and how to debug.
Research Plan and Status: The full high-level research plan, with the current status and confirmed results of each step briefly annotated. Revise it when needed.
Fact Check: List every objective statement in the updates above, each marked as guessed or directly confirmed by an observation.
Thought: What you are currently doing, what actions to perform and why.
Questions: Any questions for the human overseer. Leave empty if there are none.
Action: the name of exactly one tool
Action Input: the input to the action as valid JSON"""

_ELISION_NOTE = "[earlier steps dropped to fit the prompt budget]"


def render_history(summaries: list[StepSummary], budget: int) -> str:
    """Most recent summaries that fit, rendered oldest first."""
    if not summaries:
        return "(no steps taken yet)"
    blocks: list[str] = []
    used = 0
    total = len(summaries)
    for offset, summary in enumerate(reversed(summaries)):
        block = f"Step {total - offset}:\n{summary.render()}"
        if blocks and used + len(block) > budget:
            blocks.append(_ELISION_NOTE)
            break
        blocks.append(block)
        used += len(block)
    return "\n\n".join(reversed(blocks))


def render_idea_brief(setup: ExperimentalSetup) -> str:
    if setup.idea is None:
        return ""
    idea = setup.idea
    stages = []
    for stage in idea.plan.design:
        line = f"{stage.number}. {stage.title}"
        if stage.body:
            line += f": {stage.body}"
        stages.append(line)
    return (
        f"Proposed method:\n{idea.hypothesis.method}\n\n"
        f"Planned experiment design:\n" + "\n".join(stages) + "\n"
    )


def build_step_prompt(
    setup: ExperimentalSetup,
    state: RunState,
    registry: ToolRegistry,
    config: RunConfig,
) -> str:
    sections = [
        "You are a research agent working inside a sandboxed code workspace. "
        "You can act on the workspace only through the tools listed below, "
        "one action per response.",
        f"Tools:\n{render_tool_catalog(registry)}",
        f"Research Problem: {setup.research_problem}",
    ]
    brief = render_idea_brief(setup)
    if brief:
        sections.append(brief.rstrip())
    sections.append(_FORMAT_BLOCK)
    history_budget = max(1_000, config.prompt_char_budget - sum(len(s) for s in sections))
    sections.append(
        f"Your steps so far, oldest first:\n{render_history(state.summaries, history_budget)}"
    )
    if state.pending_feedback:
        notes = "\n".join(f"- {text}" for text in state.pending_feedback)
        sections.append(f"New human feedback to address:\n{notes}")
    sections.append("Respond with your next step now.")
    return "\n\n".join(sections)
