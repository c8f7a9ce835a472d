"""LLM-backed extraction of the problem frame (tasks, gaps, keywords).

The reply format is headed plain-text sections, not free prose, so parsing is
mechanical. One automatic re-ask on missing headers, then a hard ParseError —
unbounded retries would only mask provider drift.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import EmptyExtraction, ParseError
from ..gateway import Gateway
from ..textutil import dedupe_case_insensitive, parse_list_items, split_sections
from .paper import ResearchPaper

TASKS_HEADER = "Research Tasks"
GAPS_HEADER = "Research Gaps"
KEYWORDS_HEADER = "Keywords"

EXTRACTION_TEMPLATE_VERSION = "extract-v1"

_EXTRACTION_PROMPT = """\
You are a research analyst. Read the paper material below and distill what it
works on, what it leaves open, and the key terms that describe it.

Title:
{title}

Abstract:
{abstract}

Introduction:
{introduction}

Related Work:
{related_work}

Reply with exactly these three sections:

Research Tasks:
[one task per line]

Research Gaps:
[one gap per line]

Keywords:
[comma-separated keywords]
"""

_REASK_SUFFIX = (
    "\n\nYour previous reply was missing one or more of the required section "
    "headers ({missing}). Reply again with all three sections: "
    "Research Tasks, Research Gaps, Keywords."
)


@dataclass
class ProblemFrame:
    tasks: list[str] = field(default_factory=list)
    gaps: list[str] = field(default_factory=list)
    keywords: list[str] = field(default_factory=list)


def extract_problem(paper: ResearchPaper, gateway: Gateway) -> ProblemFrame:
    """Extract tasks, gaps, and keywords from the paper via the gateway.

    Lists are deduplicated case-insensitively. Raises EmptyExtraction when the
    keyword list parses empty, ParseError when headers stay absent after one
    re-ask.
    """
    prompt = _EXTRACTION_PROMPT.format(
        title=paper.title,
        abstract=paper.abstract,
        introduction=paper.introduction,
        related_work=paper.related_work,
    )
    reply = gateway.ask(prompt, session_tag="extract_problem")
    sections = _parse_sections(reply)
    if sections is None:
        missing = _missing_headers(reply)
        reply = gateway.ask(
            prompt + _REASK_SUFFIX.format(missing=", ".join(missing)),
            session_tag="extract_problem:reask",
        )
        sections = _parse_sections(reply)
        if sections is None:
            raise ParseError(
                f"extraction reply missing headers {_missing_headers(reply)} after re-ask"
            )

    frame = ProblemFrame(
        tasks=dedupe_case_insensitive(parse_list_items(sections[TASKS_HEADER])),
        gaps=dedupe_case_insensitive(parse_list_items(sections[GAPS_HEADER])),
        keywords=dedupe_case_insensitive(
            parse_list_items(sections[KEYWORDS_HEADER], split_commas=True)
        ),
    )
    if not frame.keywords:
        raise EmptyExtraction("keyword section parsed to zero items")
    return frame


def _parse_sections(reply: str) -> dict[str, str] | None:
    sections = split_sections(reply, [TASKS_HEADER, GAPS_HEADER, KEYWORDS_HEADER])
    required = {TASKS_HEADER, GAPS_HEADER, KEYWORDS_HEADER}
    return sections if required <= sections.keys() else None


def _missing_headers(reply: str) -> list[str]:
    sections = split_sections(reply, [TASKS_HEADER, GAPS_HEADER, KEYWORDS_HEADER])
    return [
        header
        for header in (TASKS_HEADER, GAPS_HEADER, KEYWORDS_HEADER)
        if header not in sections
    ]
