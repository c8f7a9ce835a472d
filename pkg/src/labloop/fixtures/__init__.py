"""Bundled fixture data: a sectioned sample paper, scripted provider
sessions, stub hub/literature records, recorded evaluation tables, and a
self-contained toy task package."""

from __future__ import annotations

from pathlib import Path

_ROOT = Path(__file__).resolve().parent


def fixture_path(*parts: str) -> Path:
    """Absolute path of a bundled fixture file or directory."""
    path = _ROOT.joinpath(*parts)
    if not path.exists():
        raise FileNotFoundError(f"no bundled fixture at {path}")
    return path
