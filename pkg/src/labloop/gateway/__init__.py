from .core import (
    CallRecord,
    CompletionRequest,
    CompletionResponse,
    FlakyProvider,
    Gateway,
    Provider,
    Usage,
    project_tokens,
)
from .httpchat import HttpChatProvider
from .scripted import (
    ScriptedProvider,
    ScriptedSession,
    SessionEntry,
    load_scripted_session,
    save_scripted_session,
    scripted_gateway,
)

__all__ = [
    "CallRecord",
    "CompletionRequest",
    "CompletionResponse",
    "FlakyProvider",
    "Gateway",
    "HttpChatProvider",
    "Provider",
    "ScriptedProvider",
    "ScriptedSession",
    "SessionEntry",
    "Usage",
    "load_scripted_session",
    "project_tokens",
    "save_scripted_session",
    "scripted_gateway",
]
