"""Step summaries: the compressed history fed back into later prompts.

Four labeled fields, at most 300 words in total. The summarizing model gets
one re-ask on a malformed or over-long reply; after that the text is
hard-truncated so the invariant holds no matter what the model does.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from ..errors import ParseError
from ..gateway import Gateway
from ..textutil import TRUNCATION_MARKER
from .turns import AgentTurn

MAX_SUMMARY_WORDS = 300

SUMMARY_LABELS = ("Reasoning", "Action", "Observation", "Feedback")

_SUMMARY_PROMPT = """\
Summarize your action and the observation in this format concisely in under \
300 words:
    [Reasoning]: Summarize the reasoning behind the action
    [Action]: Summarize all relevant details of the action objectively
    [Observation]: Summarize all relevant details in the observation objectively
    [Feedback]: Summarize all relevant details in the human feedback objectively
    Do not include any result that is guessed rather than directly confirmed \
by the observation.

Thought behind the action:
{thought}

Action taken:
{action}

Observation:
{observation}

Human feedback:
{feedback}
"""

_REASK = "\n\nYour previous summary {problem}. Reply again with all four labels in under 300 words."


@dataclass
class StepSummary:
    reasoning: str
    action: str
    observation: str
    feedback: str = ""

    @property
    def word_count(self) -> int:
        return len(" ".join([self.reasoning, self.action, self.observation, self.feedback]).split())

    def render(self) -> str:
        return (
            f"[Reasoning]: {self.reasoning}\n"
            f"[Action]: {self.action}\n"
            f"[Observation]: {self.observation}\n"
            f"[Feedback]: {self.feedback}"
        )


def _label_re(label: str) -> re.Pattern:
    return re.compile(r"\[" + label + r"\][ \t]*:?", re.IGNORECASE)


def parse_summary(text: str) -> StepSummary | None:
    """Parse a labeled summary; None when a mandatory label is missing."""
    positions: list[tuple[int, int, str]] = []
    for label in SUMMARY_LABELS:
        match = _label_re(label).search(text)
        if match:
            positions.append((match.start(), match.end(), label))
    found = {label for _, _, label in positions}
    if not {"Reasoning", "Action", "Observation"} <= found:
        return None
    positions.sort()
    bodies = {}
    for i, (start, end, label) in enumerate(positions):
        boundary = positions[i + 1][0] if i + 1 < len(positions) else len(text)
        bodies[label] = text[end:boundary].strip()
    return StepSummary(
        reasoning=bodies.get("Reasoning", ""),
        action=bodies.get("Action", ""),
        observation=bodies.get("Observation", ""),
        feedback=bodies.get("Feedback", ""),
    )


def _truncate(summary: StepSummary) -> StepSummary:
    """Clip the four fields to 299 words plus the marker (300 tokens total)."""
    budget = MAX_SUMMARY_WORDS - 1
    fields = {}
    used = 0
    marked = False
    for name in ("reasoning", "action", "observation", "feedback"):
        words = getattr(summary, name).split()
        take = min(len(words), budget - used)
        kept = words[:take]
        used += take
        if take < len(words) and not marked:
            kept.append(TRUNCATION_MARKER)
            marked = True
        fields[name] = " ".join(kept)
    return StepSummary(**fields)


def summarize_step(
    turn: AgentTurn,
    observation: str,
    gateway: Gateway,
    feedback: str = "",
) -> StepSummary:
    """Ask the gateway for a four-field digest of one step."""
    action_text = f"{turn.action.name} with input {json.dumps(turn.action.input, ensure_ascii=False)}"
    prompt = _SUMMARY_PROMPT.format(
        thought=turn.thought,
        action=action_text,
        observation=observation,
        feedback=feedback or "(none)",
    )
    reply = gateway.ask(prompt, session_tag="summarize_step")
    summary = parse_summary(reply)
    problem = None
    if summary is None:
        problem = "was missing one or more of the four labels"
    elif summary.word_count > MAX_SUMMARY_WORDS:
        problem = f"ran to {summary.word_count} words"
    if problem is not None:
        reply = gateway.ask(prompt + _REASK.format(problem=problem), session_tag="summarize_step:reask")
        summary = parse_summary(reply)
        if summary is None:
            raise ParseError("summary reply missing labels after re-ask")
    if summary.word_count > MAX_SUMMARY_WORDS:
        summary = _truncate(summary)
    return summary
