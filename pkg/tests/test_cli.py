"""End-to-end command line tests over recorded sessions."""

from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from labloop.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def write_garbage_session(path, count):
    with open(path, "w") as fh:
        for _ in range(count):
            fh.write(json.dumps({"reply": "not a turn"}) + "\n")


def run_toy(runner, tmp_path, task_dir, agent_session, name="a"):
    trace = tmp_path / f"{name}.trace"
    result = runner.invoke(
        main,
        [
            "run",
            str(task_dir),
            "--session",
            str(agent_session),
            "--workspace",
            str(tmp_path / f"ws-{name}"),
            "--trace",
            str(trace),
            "--steps",
            "8",
        ],
    )
    return result, trace


def test_help_lists_commands(runner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    for command in ("ingest", "idea", "run", "replay", "serve", "eval"):
        assert command in result.output


def test_ingest_prints_problem_frame(runner, paper_dir, idea_session):
    result = runner.invoke(
        main, ["ingest", str(paper_dir), "--session", str(idea_session)]
    )
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["title"] == (
        "Dataset and Baseline for Automatic Student Feedback Analysis"
    )
    assert "student feedback corpus" in payload["tasks"][0]
    assert payload["gaps"] and payload["keywords"]


def test_ingest_writes_output_file(runner, tmp_path, paper_dir, idea_session):
    out = tmp_path / "frame.json"
    result = runner.invoke(
        main,
        ["ingest", str(paper_dir), "--session", str(idea_session), "-o", str(out)],
    )
    assert result.exit_code == 0
    assert f"wrote {out}" in result.output
    assert json.loads(out.read_text())["tasks"]


def test_gateway_source_is_required(runner, paper_dir):
    result = runner.invoke(main, ["ingest", str(paper_dir)])
    assert result.exit_code == 2
    assert "provide --session" in result.output


def test_idea_is_deterministic(runner, tmp_path, paper_dir, idea_session, fixtures_dir):
    literature = fixtures_dir / "literature_student_feedback.jsonl"
    outputs = []
    for name in ("one.json", "two.json"):
        out = tmp_path / name
        result = runner.invoke(
            main,
            [
                "idea",
                str(paper_dir),
                "--session",
                str(idea_session),
                "--literature",
                str(literature),
                "-o",
                str(out),
            ],
        )
        assert result.exit_code == 0
        assert "method: Advanced Aspect-Level Sentiment Analysis" in result.output
        assert "plan stages: 9" in result.output
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_run_completes_toy_task(runner, tmp_path, task_dir, agent_session):
    result, trace = run_toy(runner, tmp_path, task_dir, agent_session)
    assert result.exit_code == 0
    assert "outcome: completed" in result.output
    assert "100.00%" in result.output
    assert trace.is_file()


def test_run_fails_with_nonzero_exit(runner, tmp_path, task_dir):
    session = tmp_path / "garbage.jsonl"
    # one step, default retry budget of two: three rejected asks
    write_garbage_session(session, 3)
    result = runner.invoke(
        main,
        [
            "run",
            str(task_dir),
            "--session",
            str(session),
            "--workspace",
            str(tmp_path / "ws"),
            "--trace",
            str(tmp_path / "g.trace"),
            "--steps",
            "1",
        ],
    )
    assert result.exit_code == 1
    assert "outcome: budget_exhausted" in result.output


def test_replay_renders_transcript(runner, tmp_path, task_dir, agent_session):
    _, trace = run_toy(runner, tmp_path, task_dir, agent_session)
    result = runner.invoke(main, ["replay", str(trace)])
    assert result.exit_code == 0
    assert "--- step 1" in result.output
    assert ">>> Inspect Script Lines" in result.output
    assert result.output.rstrip().endswith("16 events, final status completed")


def test_replay_json_is_parseable(runner, tmp_path, task_dir, agent_session):
    _, trace = run_toy(runner, tmp_path, task_dir, agent_session)
    result = runner.invoke(main, ["replay", str(trace), "--json"])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert len(lines) == 16
    records = [json.loads(line) for line in lines]
    assert [r["seq"] for r in records] == list(range(1, 17))
    assert records[-1]["kind"] == "state_change"


def test_eval_improvement_verdicts(runner):
    result = runner.invoke(main, ["eval", "improvement", "13.62", "0.5", "lower_better"])
    assert result.exit_code == 0
    assert result.output == "improvement: 96.33% (success)\n"

    result = runner.invoke(main, ["eval", "improvement", "100", "105", "higher_better"])
    assert result.output == "improvement: 5.00% (no gain)\n"


def test_eval_tables_recomputes_averages(runner):
    result = runner.invoke(main, ["eval", "tables", "improvement_by_task"])
    assert result.exit_code == 0
    assert "39.74" in result.output
    assert "38.02" in result.output


def test_eval_tables_renders_all_by_default(runner):
    result = runner.invoke(main, ["eval", "tables"])
    assert result.exit_code == 0
    assert "improvement_by_task" in result.output
    assert "idea_review" in result.output
    assert "[manual]" in result.output


def test_eval_tables_rejects_unknown_name(runner):
    result = runner.invoke(main, ["eval", "tables", "nope"])
    assert result.exit_code == 2
