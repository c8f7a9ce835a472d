from .execute import ExecutionResult, execute_script
from .workspace import (
    DEFAULT_ENV_ALLOWLIST,
    EditRecord,
    ExecutionPolicy,
    MAX_INSPECT_LINES,
    Workspace,
    copy_file,
    list_files,
    read_lines,
    read_text,
    seed_workspace,
    undo_edit,
    write_with_history,
)

__all__ = [
    "MAX_INSPECT_LINES",
    "DEFAULT_ENV_ALLOWLIST",
    "EditRecord",
    "ExecutionPolicy",
    "ExecutionResult",
    "Workspace",
    "copy_file",
    "execute_script",
    "list_files",
    "read_lines",
    "read_text",
    "seed_workspace",
    "undo_edit",
    "write_with_history",
]
