from .api import CONTROL_ACTIONS, TOKEN_HEADER, build_api
from .runs import (
    ACTIVE_STATUSES,
    RUN_STATUSES,
    TERMINAL_STATUSES,
    FeedbackMessage,
    RunHandle,
    RunHost,
)
from .trace import (
    EVENT_KINDS,
    TraceEvent,
    TraceReader,
    TraceWriter,
    encode_event,
    read_trace,
    scan_trace,
)

__all__ = [
    "CONTROL_ACTIONS",
    "TOKEN_HEADER",
    "build_api",
    "ACTIVE_STATUSES",
    "RUN_STATUSES",
    "TERMINAL_STATUSES",
    "FeedbackMessage",
    "RunHandle",
    "RunHost",
    "EVENT_KINDS",
    "TraceEvent",
    "TraceReader",
    "TraceWriter",
    "encode_event",
    "read_trace",
    "scan_trace",
]
