from __future__ import annotations

from pathlib import Path

import pytest

import labloop

# editable installs leave __file__ unset on the package; __path__ always works
FIXTURES = Path(list(labloop.__path__)[0]) / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def paper_dir() -> Path:
    return FIXTURES / "paper_student_feedback"


@pytest.fixture
def task_dir() -> Path:
    return FIXTURES / "task_toy_linear"


@pytest.fixture
def idea_session() -> Path:
    return FIXTURES / "session_idea_student_feedback.jsonl"


@pytest.fixture
def agent_session() -> Path:
    return FIXTURES / "session_agent_toy.jsonl"
