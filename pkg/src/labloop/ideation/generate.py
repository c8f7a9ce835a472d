"""Hypothesis and experiment-plan generation.

Each step builds a prompt from the accumulated context, asks the gateway
once, and retries once with a format reminder before giving up.  Parsing
is anchored on the literal "Method:" / "Rationale:" / "Experiment:"
headers the prompts request, so a well-behaved model round-trips exactly.
"""

from __future__ import annotations

import logging
import re

from ..corpus import PromptContext, RelatedWork
from ..errors import EmptyPlan, ParseError
from ..gateway import Gateway
from .model import ExperimentPlan, Hypothesis, PlanStage, ResearchIdea

log = logging.getLogger(__name__)

TEMPLATE_VERSION = "idea-v1"

_HYPOTHESIS_PROMPT = """\
You are a researcher planning the next study in this area.  Read the \
source material and the recent works below, then propose one concrete \
follow-up method that addresses the listed gaps.

{context}

Recent works:
{related}

Work through the tasks, gaps, and recent works systematically before \
committing to a direction.  Then answer in exactly this format:

Method:
<a descriptive title on the first line, then the full description of the \
proposed method>

Rationale:
<why this method is a plausible improvement, tied to the gaps above>
"""

_PLAN_PROMPT = """\
You are a researcher designing the experiment for a proposed method.  The \
source material, recent works, and the method are below.

{context}

Recent works:
{related}

Proposed method:
{method}

Method rationale:
{rationale}

Design an experiment that could validate the method.  Number the design \
stages (1., 2., ...) and keep each stage self-contained.  Answer in \
exactly this format:

Experiment:
<the experiment design, as a numbered list of stages>

Rationale:
<why this experiment is a sound test of the method>
"""

_REASK = (
    "\n\nYour previous reply could not be parsed: {problem}. "
    "Reply again using exactly the requested headers."
)

# A stage marker is a top-level "N." at the start of a line.  Deeper
# indentation means a nested list, not a new stage.
_STAGE_MARKER = re.compile(r"^ {0,3}(\d+)\.\s+", re.MULTILINE)


def _header_block(text: str, header: str) -> str | None:
    """Return the body following ``header`` on its own line, or None."""
    pattern = re.compile(
        r"^[ \t]*[-#*]*[ \t]*" + re.escape(header) + r"[ \t]*:[ \t]*", re.MULTILINE
    )
    match = pattern.search(text)
    if match is None:
        return None
    return text[match.end():]


def _split_two(text: str, first: str, second: str) -> tuple[str, str] | None:
    """Split ``text`` into the bodies of two ordered headers."""
    first_body = _header_block(text, first)
    if first_body is None:
        return None
    second_body = _header_block(first_body, second)
    if second_body is None:
        return None
    cut = len(first_body) - len(second_body)
    # walk back over the header line itself
    head = first_body[:cut]
    head = head[: head.rfind("\n") + 1] if "\n" in head else ""
    return head.strip(), second_body.strip()


def _render_related(related: list[RelatedWork]) -> str:
    if not related:
        return "(none found)"
    lines = []
    for work in related:
        year = f" ({work.year})" if work.year else ""
        lines.append(f"- {work.title}{year}: {work.abstract}".rstrip(": "))
    return "\n".join(lines)


def _with_feedback(prompt: str, feedback: str) -> str:
    if not feedback.strip():
        return prompt
    return (
        prompt
        + "\nReviewer feedback on the previous attempt, address it directly:\n"
        + feedback.strip()
        + "\n"
    )


def parse_hypothesis(reply: str) -> Hypothesis:
    """Parse a Method/Rationale reply.  Raises ParseError."""
    parts = _split_two(reply, "Method", "Rationale")
    if parts is None:
        raise ParseError("reply is missing a Method: or Rationale: header")
    method, rationale = parts
    if not method or not rationale:
        raise ParseError("reply has an empty Method or Rationale body")
    return Hypothesis(method=method, rationale=rationale)


def parse_plan(reply: str) -> ExperimentPlan:
    """Parse an Experiment/Rationale reply into ordered stages.

    Raises ParseError when the headers are absent and EmptyPlan when the
    experiment body contains no numbered stages.
    """
    parts = _split_two(reply, "Experiment", "Rationale")
    if parts is None:
        raise ParseError("reply is missing an Experiment: or Rationale: header")
    raw, rationale = parts
    markers = list(_STAGE_MARKER.finditer(raw))
    if not markers:
        raise EmptyPlan("experiment design contains no numbered stages")
    stages = []
    for i, match in enumerate(markers):
        end = markers[i + 1].start() if i + 1 < len(markers) else len(raw)
        text = raw[match.end():end].strip()
        first_line, _, rest = text.partition("\n")
        title = first_line.split(":", 1)[0].strip()
        body = (first_line.partition(":")[2] + "\n" + rest).strip()
        stages.append(PlanStage(number=int(match.group(1)), title=title, body=body))
    stages.sort(key=lambda s: s.number)
    return ExperimentPlan(design=stages, rationale=rationale, raw=raw)


def _ask_and_parse(gateway: Gateway, prompt: str, parser, session_tag: str):
    """One ask, one format-reminder re-ask, then let the error escape."""
    reply = gateway.ask(prompt, session_tag=session_tag)
    try:
        return parser(reply)
    except (ParseError, EmptyPlan) as exc:
        log.warning("%s reply unparseable (%s); re-asking once", session_tag, exc)
        reply = gateway.ask(prompt + _REASK.format(problem=exc), session_tag=session_tag)
        return parser(reply)


def generate_hypothesis(
    context: PromptContext,
    related: list[RelatedWork],
    gateway: Gateway,
    feedback: str = "",
) -> Hypothesis:
    prompt = _HYPOTHESIS_PROMPT.format(
        context=context.render(), related=_render_related(related)
    )
    prompt = _with_feedback(prompt, feedback)
    return _ask_and_parse(gateway, prompt, parse_hypothesis, "hypothesis")


def generate_plan(
    context: PromptContext,
    related: list[RelatedWork],
    hypothesis: Hypothesis,
    gateway: Gateway,
    feedback: str = "",
) -> ExperimentPlan:
    prompt = _PLAN_PROMPT.format(
        context=context.render(),
        related=_render_related(related),
        method=hypothesis.method,
        rationale=hypothesis.rationale,
    )
    prompt = _with_feedback(prompt, feedback)
    return _ask_and_parse(gateway, prompt, parse_plan, "plan")


def assemble_idea(
    context: PromptContext,
    related: list[RelatedWork],
    gateway: Gateway,
    feedback: str = "",
) -> ResearchIdea:
    """Run the hypothesis and plan steps and bundle the result."""
    hypothesis = generate_hypothesis(context, related, gateway, feedback)
    plan = generate_plan(context, related, hypothesis, gateway, feedback)
    return ResearchIdea(
        context=context,
        related=related,
        hypothesis=hypothesis,
        plan=plan,
        template_version=TEMPLATE_VERSION,
        provider_id=gateway.provider.provider_id,
    )


def refine_idea(idea: ResearchIdea, feedback: str, gateway: Gateway) -> ResearchIdea:
    """Regenerate an idea with reviewer feedback folded into every prompt."""
    return assemble_idea(idea.context, idea.related, gateway, feedback=feedback)
