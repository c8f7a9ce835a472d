"""Typed errors shared across the package.

Every error raised by labloop code subclasses :class:`LabloopError`, so callers
can catch domain failures without swallowing programming bugs. Agent-facing
tools convert these into observation text; they are never allowed to kill the
run loop.
"""

from __future__ import annotations


class LabloopError(Exception):
    """Base class for every domain error in this package."""


# --- paper ingestion and literature ---------------------------------------

class MissingTitle(LabloopError):
    """No title line could be found in the source document."""


class EmptyExtraction(LabloopError):
    """Problem-frame extraction produced zero keywords."""


class ParseError(LabloopError):
    """A structured LLM response was missing required headers or labels."""


class ProviderUnavailable(LabloopError):
    """A remote provider kept failing after the retry budget was spent."""


class MalformedResponse(LabloopError):
    """A provider payload could not be parsed."""


class EmptyPlan(LabloopError):
    """An experiment plan parsed to zero numbered stages."""


# --- completion gateway ----------------------------------------------------

class TransientProviderError(LabloopError):
    """A retryable provider failure (timeouts, 5xx, connection resets)."""


class BudgetExhausted(LabloopError):
    """The run's token budget cannot cover the projected usage."""


class SessionMismatch(LabloopError):
    """A scripted session expectation did not match the incoming prompt."""

    def __init__(self, index: int, expected: str):
        super().__init__(
            f"scripted entry {index} expected prompt to contain {expected!r}"
        )
        self.index = index
        self.expected = expected


class SessionExhausted(LabloopError):
    """A request arrived past the last scripted entry."""


# --- workspace sandbox -----------------------------------------------------

class InvalidPath(LabloopError):
    """Path escapes the workspace root or does not resolve."""


class SourceMissing(LabloopError):
    """Copy source does not exist."""


class FileMissing(LabloopError):
    """The named file does not exist in the workspace."""


class RangeTooLarge(LabloopError):
    """More than the allowed number of lines was requested."""


class NoHistory(LabloopError):
    """Undo requested for a file with an empty edit history."""


class TimedOut(LabloopError):
    """A sandboxed process exceeded its time limit and was killed."""

    def __init__(self, message: str, stdout: str = "", stderr: str = ""):
        super().__init__(message)
        self.stdout = stdout
        self.stderr = stderr


# --- action protocol -------------------------------------------------------

class DuplicateTool(LabloopError):
    """Two tools with the same name were registered."""


class MissingHeader(LabloopError):
    """A mandated turn header was absent."""

    def __init__(self, header: str):
        super().__init__(f"missing required header: {header!r}")
        self.header = header


class UnknownTool(LabloopError):
    """The turn named a tool that is not in the registry."""

    def __init__(self, name: str):
        super().__init__(f"unknown tool: {name!r}")
        self.name = name


class MalformedInput(LabloopError):
    """Action Input could not be parsed into a field map."""


# --- ml toolkit ------------------------------------------------------------

class HubUnavailable(LabloopError):
    """A model/dataset hub kept failing after retries."""


class NoMatch(LabloopError):
    """The hub returned no candidate and the caller required one."""


class WriteError(LabloopError):
    """A dataset could not be materialized to disk."""


class CountMismatch(LabloopError):
    """load_dirs and save_dirs arity differs."""


class TransformFailed(LabloopError):
    """A generated dataset-transformation script failed."""

    def __init__(self, message: str, script_output: str = ""):
        super().__init__(message)
        self.script_output = script_output


class TrainFailed(LabloopError):
    """Training entrypoint failed or hyperparameters were invalid."""

    def __init__(self, message: str, stderr: str = ""):
        super().__init__(message)
        self.stderr = stderr


class MissingEntrypoint(LabloopError):
    """The task package does not declare the required entrypoint."""


class ArtifactMissing(LabloopError):
    """No trained artifact was found in the result directory."""


class ExecFailed(LabloopError):
    """Running a trained model over a test set failed."""


class RowMismatch(LabloopError):
    """Predictions and references do not align row-for-row."""


class UnknownMetric(LabloopError):
    """A metric name outside the supported set was requested."""


# --- evaluation ------------------------------------------------------------

class ScoreOutOfRange(LabloopError):
    """A reviewer score fell outside the 1..5 scale twice."""


class ZeroBaseline(LabloopError):
    """Percentage improvement is undefined for a zero baseline."""


class EmptyTrials(LabloopError):
    """Success rate requested over zero trials."""


class EmptyMap(LabloopError):
    """Aggregate requested over an empty table column."""


# --- run store -------------------------------------------------------------

class UnknownRun(LabloopError):
    """No run with that id exists in the store."""


class StorageError(LabloopError):
    """The trace file could not be written."""


class RunTerminal(LabloopError):
    """The run already reached a terminal outcome."""
