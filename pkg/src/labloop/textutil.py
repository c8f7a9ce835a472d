"""Small text helpers shared by the parsing-heavy modules.

LLM output is sloppy plain text; everything here is deliberately forgiving
about decoration (bullets, numbering, trailing colons) while staying strict
about which headers exist at all.
"""

from __future__ import annotations

import re

TRUNCATION_MARKER = "[truncated]"

_BULLET = re.compile(r"^\s*(?:[-*•]|\d+[.)])\s+")


def find_header(text: str, header: str, start: int = 0) -> tuple[int, int] | None:
    """Locate `header` on its own line (case-sensitive).

    A header line is the header text optionally followed by a short
    parenthetical tag and/or a colon; body content may continue on the same
    line after the colon. Returns (line_start, body_start) or None.
    """
    pattern = re.compile(
        r"^[ \t]*[-#*]*[ \t]*"
        + re.escape(header)
        + r"[ \t]*(\([^)\n]{0,20}\))?[ \t]*:?[ \t]*",
        re.MULTILINE,
    )
    match = pattern.search(text, start)
    return (match.start(), match.end()) if match else None


def split_sections(text: str, headers: list[str]) -> dict[str, str]:
    """Split `text` into the bodies following each named header.

    Headers may appear in any order; each body runs to the next found header
    (or end of text). Missing headers are simply absent from the result map.
    """
    found: list[tuple[int, int, str]] = []
    for header in headers:
        loc = find_header(text, header)
        if loc is not None:
            found.append((loc[0], loc[1], header))
    found.sort()
    sections: dict[str, str] = {}
    for i, (_, body_start, header) in enumerate(found):
        body_end = found[i + 1][0] if i + 1 < len(found) else len(text)
        sections[header] = text[body_start:body_end].strip()
    return sections


def parse_list_items(body: str, *, split_commas: bool = False) -> list[str]:
    """Turn a headed-section body into list items.

    One item per non-blank line; bullet and numbering prefixes are stripped.
    With `split_commas` each line is further split on commas/semicolons
    (keyword lists arrive comma-separated).
    """
    items: list[str] = []
    for line in body.splitlines():
        line = _BULLET.sub("", line).strip()
        if not line:
            continue
        if split_commas:
            items.extend(part.strip() for part in re.split(r"[,;]", line) if part.strip())
        else:
            items.append(line)
    return items


def dedupe_case_insensitive(items: list[str]) -> list[str]:
    """Drop later items that equal an earlier one modulo case and spacing."""
    seen: set[str] = set()
    result: list[str] = []
    for item in items:
        key = normalize_title(item)
        if key and key not in seen:
            seen.add(key)
            result.append(item)
    return result


def normalize_title(text: str) -> str:
    return " ".join(text.lower().split())


def truncate_to_budget(text: str, budget: int, marker: str = TRUNCATION_MARKER) -> str:
    """Clip `text` to exactly `budget` characters, ending in the marker.

    Keeps the head (section headings render first) and trims the tail.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    if len(text) <= budget:
        return text
    if budget <= len(marker):
        return marker[:budget]
    return text[: budget - len(marker)] + marker


def strip_code_fences(code: str) -> str:
    """Peel one wrapping markdown code fence off a reply, if present."""
    code = code.strip()
    if code.startswith("```"):
        first_newline = code.find("\n")
        code = code[first_newline + 1 :] if first_newline != -1 else ""
        if code.rstrip().endswith("```"):
            code = code.rstrip()[:-3]
    return code.strip()


def word_count(text: str) -> int:
    return len(text.split())


def tokenize(text: str) -> list[str]:
    """Lowercased alphanumeric tokens; the unit of the similarity metric."""
    return re.findall(r"[a-z0-9]+", text.lower())
