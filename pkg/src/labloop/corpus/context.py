"""The prompt context: paper contents plus the extracted problem frame.

Rendering is deterministic (same inputs, byte-identical output) because the
downstream idea generation must be reproducible under a scripted provider.
Sections render in a fixed order: paper contents, tasks, gaps, keywords.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..textutil import TRUNCATION_MARKER, truncate_to_budget
from .extraction import ProblemFrame
from .paper import ResearchPaper

DEFAULT_CHAR_BUDGET = 24_000


@dataclass
class PromptContext:
    paper: ResearchPaper
    frame: ProblemFrame
    char_budget: int = DEFAULT_CHAR_BUDGET

    def render(self) -> str:
        parts = [
            "Title:",
            self.paper.title,
            "",
            "Abstract:",
            self.paper.abstract,
            "",
            "Introduction:",
            self.paper.introduction,
            "",
            "Related Work:",
            self.paper.related_work,
            "",
            "Research Tasks:",
            *[f"- {task}" for task in self.frame.tasks],
            "",
            "Research Gaps:",
            *[f"- {gap}" for gap in self.frame.gaps],
            "",
            "Keywords:",
            ", ".join(self.frame.keywords),
        ]
        return truncate_to_budget("\n".join(parts), self.char_budget, TRUNCATION_MARKER)


def build_prompt_context(
    paper: ResearchPaper,
    frame: ProblemFrame,
    char_budget: int = DEFAULT_CHAR_BUDGET,
) -> PromptContext:
    return PromptContext(paper=paper, frame=frame, char_budget=char_budget)
