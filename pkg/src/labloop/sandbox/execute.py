"""Subprocess execution of workspace scripts under a policy.

The child runs with cwd = workspace root and an environment reduced to the
policy allowlist. Nonzero exit is a normal result the agent gets to see;
only a timeout or a missing script is a harness-level error.
"""

from __future__ import annotations

import os
import subprocess
import sys
import time

from dataclasses import dataclass

from ..errors import FileMissing, TimedOut
from ..textutil import TRUNCATION_MARKER
from .workspace import ExecutionPolicy, Workspace

# Mechanical stand-in for "do not install packages": refuse to run scripts
# that shell out to a package manager.
_INSTALL_PATTERNS = (
    "pip install",
    "pip3 install",
    "conda install",
    "apt-get install",
    "apt install",
    "npm install",
    "easy_install",
)


@dataclass
class ExecutionResult:
    stdout: str
    stderr: str
    exit_code: int
    duration: float
    truncated: bool = False

    @property
    def ok(self) -> bool:
        return self.exit_code == 0


def _clip(text: str, limit: int) -> tuple[str, bool]:
    if len(text.encode("utf-8")) <= limit:
        return text, False
    clipped = text.encode("utf-8")[:limit].decode("utf-8", errors="ignore")
    return clipped + "\n" + TRUNCATION_MARKER, True


def _filtered_env(policy: ExecutionPolicy, extra_env: dict[str, str] | None) -> dict[str, str]:
    env = {name: os.environ[name] for name in policy.env_allowlist if name in os.environ}
    if extra_env:
        env.update(extra_env)
    return env


def execute_script(
    workspace: Workspace,
    script: str,
    policy: ExecutionPolicy | None = None,
    args: tuple[str, ...] = (),
    extra_env: dict[str, str] | None = None,
    interpreter: str | None = None,
) -> ExecutionResult:
    """Run a python script from the workspace root and capture its output."""
    policy = policy or workspace.policy
    target = workspace.resolve(script)
    if not target.is_file():
        raise FileMissing(f"no such script: {script}")

    if policy.deny_network_install:
        source = target.read_text(encoding="utf-8", errors="replace").lower()
        for pattern in _INSTALL_PATTERNS:
            if pattern in source:
                return ExecutionResult(
                    stdout="",
                    stderr=(
                        f"blocked: the script invokes a package manager ({pattern!r}); "
                        "installing new packages is not allowed"
                    ),
                    exit_code=126,
                    duration=0.0,
                )

    command = [interpreter or sys.executable, str(target.relative_to(workspace.root)), *args]
    started = time.monotonic()
    try:
        completed = subprocess.run(
            command,
            cwd=workspace.root,
            env=_filtered_env(policy, extra_env),
            capture_output=True,
            timeout=policy.timeout,
        )
    except subprocess.TimeoutExpired as exc:
        stdout = (exc.stdout or b"").decode("utf-8", errors="replace")
        stderr = (exc.stderr or b"").decode("utf-8", errors="replace")
        raise TimedOut(
            f"script {script} exceeded the {policy.timeout:g}s timeout and was killed",
            stdout=stdout,
            stderr=stderr,
        ) from exc
    duration = time.monotonic() - started

    stdout, out_cut = _clip(completed.stdout.decode("utf-8", errors="replace"), policy.max_output_bytes)
    stderr, err_cut = _clip(completed.stderr.decode("utf-8", errors="replace"), policy.max_output_bytes)
    return ExecutionResult(
        stdout=stdout,
        stderr=stderr,
        exit_code=completed.returncode,
        duration=duration,
        truncated=out_cut or err_cut,
    )
