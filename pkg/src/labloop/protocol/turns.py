"""Parsing and rendering of agent turns.

A turn is the mandated seven-header response (Reflection, Research Plan and
Status, Fact Check, Thought, Questions, Action, Action Input). parse_turn
is total: any input yields either an AgentTurn or one of three typed,
recoverable errors the loop can re-prompt on. Action Input accepts the
sloppy JSON real models produce (single quotes, trailing commas, unquoted
numbers, escaped underscores) and normalizes every value to a string, the
way the canonical transcripts quote even line numbers.
"""

from __future__ import annotations

import ast
import json
import re
import warnings
from dataclasses import dataclass, field

from ..errors import MalformedInput, MissingHeader, UnknownTool
from .tools import ToolRegistry, ToolSpec

TURN_HEADERS = (
    "Reflection",
    "Research Plan and Status",
    "Fact Check",
    "Thought",
    "Questions",
    "Action",
    "Action Input",
)

# Headers appear at line starts, optionally decorated with a dash or bold
# markers, and are terminated by a colon.
def _header_re(header: str) -> re.Pattern:
    return re.compile(
        r"^[ \t]*[-*]{0,3}[ \t]*" + re.escape(header) + r"[ \t]*\**[ \t]*:",
        re.MULTILINE,
    )


_BOUNDARY_HEADERS = TURN_HEADERS + ("Observation",)


@dataclass
class Action:
    name: str
    input: dict[str, str] = field(default_factory=dict)


@dataclass
class AgentTurn:
    reflection: str
    plan_status: str
    fact_check: str
    thought: str
    questions: str
    action: Action


def _locate_sections(raw: str) -> dict[str, str]:
    """Map each turn header to its body text; absent headers are omitted."""
    matches: list[tuple[int, int, str]] = []
    for header in _BOUNDARY_HEADERS:
        for m in _header_re(header).finditer(raw):
            matches.append((m.start(), m.end(), header))
    matches.sort()
    sections: dict[str, str] = {}
    for i, (start, end, header) in enumerate(matches):
        if header in sections or header == "Observation":
            continue
        boundary = len(raw)
        for next_start, _, _ in matches[i + 1 :]:
            if next_start > start:
                boundary = next_start
                break
        sections[header] = raw[end:boundary].strip()
    return sections


def _canonical_key(key: str) -> str:
    return key.replace("\\", "").strip().strip('"').strip("'").lower()


def _normalize_value(value) -> str:
    if isinstance(value, str):
        return value.strip()
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, (int, float)):
        return repr(value)
    return json.dumps(value, sort_keys=True, ensure_ascii=False)


def _literal_eval_quiet(candidate: str):
    # model output full of stray backslashes triggers SyntaxWarnings in
    # compile(); parsing junk must stay silent
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return ast.literal_eval(candidate)


def _loads_lenient(candidate: str):
    try:
        return json.loads(candidate)
    except Exception:
        pass
    try:
        return _literal_eval_quiet(candidate)
    except Exception:
        pass
    # last resort: strip escaped underscores, smart quotes, stray commas
    cleaned = candidate.replace("\\_", "_")
    cleaned = cleaned.replace("“", '"').replace("”", '"')
    cleaned = cleaned.replace("‘", "'").replace("’", "'")
    cleaned = re.sub(r",\s*(?=,)", "", cleaned)
    cleaned = re.sub(r",\s*([}\]])", r"\1", cleaned)
    for loader in (json.loads, _literal_eval_quiet):
        try:
            return loader(cleaned)
        except Exception:
            continue
    return None


def parse_action_input(text: str, tool: ToolSpec | None = None) -> dict[str, str]:
    """Parse the Action Input body into a normalized {field: string} map."""
    text = text.strip()
    if text.startswith("```"):
        text = text.strip("`").strip()
    start = text.find("{")
    end = text.rfind("}")
    if start == -1 or end == -1 or end < start:
        if not text and (tool is None or not any(f.required for f in tool.input_schema)):
            return {}
        raise MalformedInput("Action Input does not contain a JSON object")
    parsed = _loads_lenient(text[start : end + 1])
    if not isinstance(parsed, dict):
        raise MalformedInput("Action Input is not a JSON object")

    by_canonical = {_canonical_key(str(k)): v for k, v in parsed.items()}
    result: dict[str, str] = {}
    if tool is not None:
        for spec in tool.input_schema:
            if spec.field in by_canonical:
                result[spec.field] = _normalize_value(by_canonical.pop(spec.field))
            elif spec.required:
                raise MalformedInput(
                    f"missing required field {spec.field!r} for tool {tool.name!r}"
                )
    for key in sorted(by_canonical):
        result[key] = _normalize_value(by_canonical[key])
    return result


def _clean_tool_name(body: str) -> str:
    name = body.strip().splitlines()[0] if body.strip() else ""
    return name.strip().strip("`").strip('"').strip("'").rstrip(".").strip()


def parse_turn(raw, registry: ToolRegistry) -> AgentTurn:
    """Parse one raw LLM response into an AgentTurn.

    Raises MissingHeader, UnknownTool, or MalformedInput; never anything else.
    """
    try:
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8", errors="replace")
        raw = str(raw)
        sections = _locate_sections(raw)
        for header in TURN_HEADERS:
            if header not in sections:
                raise MissingHeader(header)

        name = _clean_tool_name(sections["Action"])
        tool = registry.get(name)
        if tool is None:
            for candidate in registry:
                if candidate.name.lower() == name.lower():
                    tool = candidate
                    name = candidate.name
                    break
        if tool is None:
            raise UnknownTool(name or "<empty>")

        action_input = parse_action_input(sections["Action Input"], tool)
        return AgentTurn(
            reflection=sections["Reflection"],
            plan_status=sections["Research Plan and Status"],
            fact_check=sections["Fact Check"],
            thought=sections["Thought"],
            questions=sections["Questions"],
            action=Action(name=name, input=action_input),
        )
    except (MissingHeader, UnknownTool, MalformedInput):
        raise
    except Exception as exc:  # totality: anything unexpected is a parse fault
        raise MalformedInput(f"unparseable turn: {exc}") from exc


def render_turn(turn: AgentTurn) -> str:
    """Canonical text form of a turn; parse_turn inverts it."""
    input_json = json.dumps(turn.action.input, indent=4, ensure_ascii=False)
    return (
        f"Reflection: {turn.reflection}\n\n"
        f"Research Plan and Status: {turn.plan_status}\n\n"
        f"Fact Check: {turn.fact_check}\n\n"
        f"Thought: {turn.thought}\n\n"
        f"Questions: {turn.questions}\n\n"
        f"Action: {turn.action.name}\n\n"
        f"Action Input: {input_json}\n"
    )
