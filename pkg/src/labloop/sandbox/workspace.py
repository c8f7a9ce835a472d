"""The run workspace: a rooted directory tree the agent may see and edit.

Every operation resolves paths strictly inside the root; `..`, absolute
paths, and symlinks pointing elsewhere all raise InvalidPath. Edits push
the full prior bytes onto a per-file history stack, so undo is byte-exact
no matter what the edit did.
"""

from __future__ import annotations

import os
import shutil
from dataclasses import dataclass, field
from pathlib import Path

from ..clock import Clock, SystemClock
from ..errors import FileMissing, InvalidPath, NoHistory, RangeTooLarge, SourceMissing

MAX_INSPECT_LINES = 100

DEFAULT_ENV_ALLOWLIST = ("PATH", "HOME", "LANG", "LC_ALL", "PYTHONPATH", "TMPDIR")


@dataclass
class EditRecord:
    file: str
    previous_content: bytes
    timestamp: float
    edit_instruction: str | None = None
    # True when the write created the file; undo then removes it instead of
    # leaving an empty husk behind, restoring the tree byte-exactly.
    created: bool = False


@dataclass
class ExecutionPolicy:
    timeout: float = 60.0
    max_output_bytes: int = 20_000
    env_allowlist: tuple[str, ...] = DEFAULT_ENV_ALLOWLIST
    deny_network_install: bool = True

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_output_bytes <= 0:
            raise ValueError("max_output_bytes must be positive")


@dataclass
class Workspace:
    root: Path
    policy: ExecutionPolicy = field(default_factory=ExecutionPolicy)
    history: dict[str, list[EditRecord]] = field(default_factory=dict)
    clock: Clock = field(default_factory=SystemClock)

    def __post_init__(self):
        self.root = Path(self.root).resolve()
        if not self.root.is_dir():
            raise InvalidPath(f"workspace root is not a directory: {self.root}")

    def resolve(self, rel: str) -> Path:
        """Resolve a relative path inside the root or raise InvalidPath."""
        if not isinstance(rel, str) or not rel.strip():
            raise InvalidPath("empty path")
        candidate = Path(rel)
        if candidate.is_absolute():
            raise InvalidPath(f"absolute paths are not allowed: {rel}")
        resolved = (self.root / candidate).resolve()
        if resolved != self.root and self.root not in resolved.parents:
            raise InvalidPath(f"path escapes the workspace: {rel}")
        return resolved

    def relkey(self, rel: str) -> str:
        """Canonical key for the history map."""
        return self.resolve(rel).relative_to(self.root).as_posix()


def list_files(workspace: Workspace, dir_path: str = ".") -> list[str]:
    """Sorted entries of a directory; subdirectories carry a trailing slash."""
    target = workspace.resolve(dir_path)
    if not target.is_dir():
        raise InvalidPath(f"not a directory: {dir_path}")
    entries = []
    for child in target.iterdir():
        entries.append(child.name + "/" if child.is_dir() else child.name)
    return sorted(entries)


def read_text(workspace: Workspace, file: str) -> str:
    target = workspace.resolve(file)
    if not target.is_file():
        raise FileMissing(f"no such file: {file}")
    return target.read_text(encoding="utf-8", errors="replace")


def copy_file(workspace: Workspace, source: str, destination: str) -> str:
    """Copy source to destination inside the root, creating parents."""
    src = workspace.resolve(source)
    dst = workspace.resolve(destination)
    if not src.is_file():
        raise SourceMissing(f"File {source} copy to {destination} failed. Check whether the source file and the target file are valid.")
    dst.parent.mkdir(parents=True, exist_ok=True)
    shutil.copyfile(src, dst)
    return f"File {source} copied to {destination}"


def read_lines(workspace: Workspace, script: str, start: int, end: int) -> str:
    """Inclusive line range of a file, at most 100 lines, clipped at EOF."""
    if start < 1:
        raise ValueError("start_line_number must be at least 1")
    if end < start:
        raise ValueError("end_line_number must not precede start_line_number")
    if end - start + 1 > MAX_INSPECT_LINES:
        raise RangeTooLarge(
            f"requested {end - start + 1} lines; the limit is {MAX_INSPECT_LINES}"
        )
    target = workspace.resolve(script)
    if not target.is_file():
        raise FileMissing(f"no such file: {script}")
    lines = target.read_text(encoding="utf-8", errors="replace").splitlines(keepends=True)
    return "".join(lines[start - 1 : end])


def write_with_history(
    workspace: Workspace,
    file: str,
    new_content: str | bytes,
    edit_instruction: str | None = None,
) -> EditRecord:
    """Replace a file's content, pushing the prior bytes for undo."""
    target = workspace.resolve(file)
    key = workspace.relkey(file)
    existed = target.is_file()
    previous = target.read_bytes() if existed else b""
    record = EditRecord(
        file=key,
        previous_content=previous,
        timestamp=workspace.clock.now(),
        edit_instruction=edit_instruction,
        created=not existed,
    )
    target.parent.mkdir(parents=True, exist_ok=True)
    data = new_content.encode("utf-8") if isinstance(new_content, str) else new_content
    target.write_bytes(data)
    workspace.history.setdefault(key, []).append(record)
    return record


def undo_edit(workspace: Workspace, script: str) -> str:
    """Pop the newest edit of a file and restore the prior bytes."""
    key = workspace.relkey(script)
    stack = workspace.history.get(key)
    if not stack:
        raise NoHistory(f"no edit history for {script}")
    record = stack.pop()
    target = workspace.resolve(script)
    if record.created:
        if target.exists():
            target.unlink()
        return ""
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(record.previous_content)
    return record.previous_content.decode("utf-8", errors="replace")


def seed_workspace(root: str | Path, prototype_dir: str | Path) -> Workspace:
    """Create a workspace at root populated from a prototype directory."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    prototype = Path(prototype_dir)
    if prototype.is_dir():
        shutil.copytree(prototype, root, dirs_exist_ok=True)
    return Workspace(root=root)
