"""Ingest a source paper into structured form.

The prompt context is built from exactly four sections — title, abstract,
introduction, and related work — so those are first-class fields; anything
else the document carries is kept in `extra_sections` in source order.
No PDF handling here: input is either pre-sectioned plain text or a fixture
directory with one file per section.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import MissingTitle

logger = logging.getLogger(__name__)

CORE_SECTIONS = ("abstract", "introduction", "related_work")

_SECTION_ALIASES = {
    "title": "title",
    "abstract": "abstract",
    "introduction": "introduction",
    "related work": "related_work",
    "related_work": "related_work",
}

# A header line: short, title-like, no sentence punctuation, optionally ending
# in a colon. "Abstract", "Related Work:", "Keywords (k)" all match.
_HEADER_LINE = re.compile(r"^[A-Za-z][A-Za-z0-9 ()_/-]{0,58}:?$")


@dataclass
class ResearchPaper:
    title: str
    abstract: str = ""
    introduction: str = ""
    related_work: str = ""
    extra_sections: dict[str, str] = field(default_factory=dict)
    source_id: str = ""

    def __post_init__(self):
        if not self.title.strip():
            raise MissingTitle("paper title must be non-empty")


def parse_paper(document: str, source_id: str = "") -> tuple[ResearchPaper, list[str]]:
    """Parse sectioned text into a ResearchPaper.

    Returns the paper plus a list of warnings, one per absent core section.
    Raises MissingTitle when no title line can be found.
    """
    blocks = _split_blocks(document)
    title = ""
    sections: dict[str, str] = {}
    extra: dict[str, str] = {}

    for name, body in blocks:
        canonical = _SECTION_ALIASES.get(name.lower().rstrip(":").strip())
        if canonical == "title":
            title = " ".join(body.split())
        elif canonical:
            sections[canonical] = body.strip()
        elif name:
            extra[name] = body.strip()
        elif not title:
            # Leading untitled block: its first line is the title, the rest
            # belongs to no section and is dropped with a warning below.
            first, _, rest = body.strip().partition("\n")
            title = first.strip()
            if rest.strip():
                extra[""] = rest.strip()

    if not title:
        raise MissingTitle("no title line found in document")

    warnings = [
        f"section {name!r} absent; left empty"
        for name in CORE_SECTIONS
        if name not in sections
    ]
    for warning in warnings:
        logger.warning("%s: %s", source_id or "<document>", warning)

    return (
        ResearchPaper(
            title=title,
            abstract=sections.get("abstract", ""),
            introduction=sections.get("introduction", ""),
            related_work=sections.get("related_work", ""),
            extra_sections=extra,
            source_id=source_id,
        ),
        warnings,
    )


def _split_blocks(document: str) -> list[tuple[str, str]]:
    """Split a document into (header, body) blocks.

    A header is a short title-like line preceded by a blank line (or the
    document start). Text before the first header lands in a ("", ...) block.
    """
    blocks: list[tuple[str, str]] = []
    current_header = ""
    current_lines: list[str] = []
    previous_blank = True

    for line in document.splitlines():
        stripped = line.strip()
        if previous_blank and stripped and _HEADER_LINE.match(stripped):
            if current_lines or current_header:
                blocks.append((current_header, "\n".join(current_lines)))
            current_header = stripped.rstrip(":")
            current_lines = []
        else:
            current_lines.append(line)
        previous_blank = not stripped
    if current_lines or current_header:
        blocks.append((current_header, "\n".join(current_lines)))
    return [(h, b) for h, b in blocks if h or b.strip()]


def load_paper_dir(path: str | Path) -> tuple[ResearchPaper, list[str]]:
    """Load a fixture-corpus paper: one directory, one .txt file per section."""
    directory = Path(path)
    if not directory.is_dir():
        raise FileNotFoundError(f"paper directory not found: {directory}")

    def read(name: str) -> str:
        file = directory / f"{name}.txt"
        return file.read_text(encoding="utf-8").strip() if file.exists() else ""

    title = " ".join(read("title").split())
    if not title:
        raise MissingTitle(f"{directory} has no title.txt or it is empty")

    known = {"title", "abstract", "introduction", "related_work"}
    extra = {
        file.stem: file.read_text(encoding="utf-8").strip()
        for file in sorted(directory.glob("*.txt"))
        if file.stem not in known
    }
    paper = ResearchPaper(
        title=title,
        abstract=read("abstract"),
        introduction=read("introduction"),
        related_work=read("related_work"),
        extra_sections=extra,
        source_id=directory.name,
    )
    warnings = [
        f"section {name!r} absent; left empty"
        for name in CORE_SECTIONS
        if not getattr(paper, name)
    ]
    return paper, warnings
