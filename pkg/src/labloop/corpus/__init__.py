from .context import DEFAULT_CHAR_BUDGET, PromptContext, build_prompt_context
from .extraction import ProblemFrame, extract_problem
from .literature import (
    HttpLiteratureProvider,
    LiteratureProvider,
    RelatedWork,
    StubLiteratureProvider,
    dedupe_and_rank,
    search_recent_works,
)
from .paper import ResearchPaper, load_paper_dir, parse_paper

__all__ = [
    "DEFAULT_CHAR_BUDGET",
    "HttpLiteratureProvider",
    "LiteratureProvider",
    "ProblemFrame",
    "PromptContext",
    "RelatedWork",
    "ResearchPaper",
    "StubLiteratureProvider",
    "build_prompt_context",
    "dedupe_and_rank",
    "extract_problem",
    "load_paper_dir",
    "parse_paper",
    "search_recent_works",
]
