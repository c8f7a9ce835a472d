from .summary import MAX_SUMMARY_WORDS, StepSummary, parse_summary, summarize_step
from .tools import FieldSpec, ToolRegistry, ToolSpec, default_registry, render_tool_catalog
from .turns import (
    Action,
    AgentTurn,
    TURN_HEADERS,
    parse_action_input,
    parse_turn,
    render_turn,
)

__all__ = [
    "TURN_HEADERS",
    "MAX_SUMMARY_WORDS",
    "FieldSpec",
    "ToolSpec",
    "ToolRegistry",
    "default_registry",
    "render_tool_catalog",
    "Action",
    "AgentTurn",
    "parse_action_input",
    "parse_turn",
    "render_turn",
    "StepSummary",
    "parse_summary",
    "summarize_step",
]
