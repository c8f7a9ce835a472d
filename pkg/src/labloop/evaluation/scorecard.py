"""Review scoring of ideas and experiment designs over a fixed rubric.

One gateway call covers a whole criterion set; the reply must carry one
"criterion: score" line per criterion. A malformed or out-of-range reply
earns exactly one re-ask before the typed error surfaces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal

from ..errors import ParseError, ScoreOutOfRange
from ..gateway import Gateway

IDEA_CRITERIA = ("clarity", "validity", "rigor", "innovativeness", "generalizability")
DESIGN_CRITERIA = ("clarity", "validity", "robustness", "feasibility", "reproducibility")

DEFAULT_SCALE = (1.0, 5.0)

_SCORE_PROMPT = """\
Review the research {kind} below. Rate each criterion on a scale from {low} \
to {high}, where {high} is best. Reply with one line per criterion in the \
form "criterion: score" and nothing else.

Criteria: {criteria}

{kind} under review:
{text}
"""

_REASK = """\
Your previous reply could not be used: {problem}
Answer again. {prompt}"""


@dataclass
class Scorecard:
    kind: str
    scores: dict[str, float] = field(default_factory=dict)
    scale: tuple[float, float] = DEFAULT_SCALE

    @property
    def average(self) -> float:
        total = sum((Decimal(str(v)) for v in self.scores.values()), Decimal(0))
        return float(total / len(self.scores))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "scores": dict(self.scores),
            "scale": list(self.scale),
            "average": self.average,
        }


def parse_scores(
    reply: str,
    criteria: tuple[str, ...],
    scale: tuple[float, float] = DEFAULT_SCALE,
) -> dict[str, float]:
    """Pull one numeric score per criterion out of a review reply."""
    low, high = scale
    scores: dict[str, float] = {}
    for criterion in criteria:
        pattern = re.compile(
            rf"^[ \t*-]*{re.escape(criterion)}[ \t]*:[ \t]*(-?\d+(?:\.\d+)?)",
            re.IGNORECASE | re.MULTILINE,
        )
        match = pattern.search(reply)
        if match is None:
            raise ParseError(f"reply carries no score for {criterion!r}")
        value = float(match.group(1))
        if not low <= value <= high:
            raise ScoreOutOfRange(
                f"{criterion} scored {value}, outside the {low}-{high} scale"
            )
        scores[criterion] = value
    return scores


def _score(
    kind: str,
    text: str,
    criteria: tuple[str, ...],
    gateway: Gateway,
    scale: tuple[float, float],
) -> Scorecard:
    prompt = _SCORE_PROMPT.format(
        kind=kind,
        low=scale[0],
        high=scale[1],
        criteria=", ".join(criteria),
        text=text,
    )
    # scoring wants repeatability, so it asks at temperature zero
    reply = gateway.ask(prompt, session_tag=f"score:{kind}", temperature=0.0)
    try:
        scores = parse_scores(reply, criteria, scale)
    except (ParseError, ScoreOutOfRange) as exc:
        reply = gateway.ask(
            _REASK.format(problem=exc, prompt=prompt),
            session_tag=f"score:{kind}:retry",
            temperature=0.0,
        )
        scores = parse_scores(reply, criteria, scale)
    return Scorecard(kind=kind, scores=scores, scale=scale)


def score_idea(
    text: str, gateway: Gateway, scale: tuple[float, float] = DEFAULT_SCALE
) -> Scorecard:
    return _score("idea", text, IDEA_CRITERIA, gateway, scale)


def score_design(
    text: str, gateway: Gateway, scale: tuple[float, float] = DEFAULT_SCALE
) -> Scorecard:
    return _score("experiment design", text, DESIGN_CRITERIA, gateway, scale)
