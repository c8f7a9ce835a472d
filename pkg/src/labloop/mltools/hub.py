"""Model and dataset hub clients: one search contract, two backends.

Local stubs read record files so every test is offline and deterministic;
the HTTP clients speak to a live hub with the same record shape. Ranking
is a total order: score descending, then name ascending.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import httpx

from ..clock import SleepFn
from ..errors import HubUnavailable, MalformedResponse
from ..textutil import tokenize

logger = logging.getLogger(__name__)


@dataclass
class ModelCandidate:
    name: str
    description: str = ""
    score: float = 0.0
    task_tags: list[str] = field(default_factory=list)


@dataclass
class DatasetCandidate:
    name: str
    description: str = ""
    score: float = 0.0
    splits: dict[str, int] = field(default_factory=dict)
    columns: list[str] = field(default_factory=list)
    save_dir: str = ""


class HubProvider(Protocol):
    def search_models(self, query: str) -> list[dict]: ...
    def search_datasets(self, query: str) -> list[dict]: ...


class StubHub:
    """Hub backed by local JSON-lines record files.

    Model records: {name, description, tags, score?}.
    Dataset records: {name, description, columns, rows: {split: [[...], ...]}, score?}.
    """

    def __init__(self, models_path: str | Path | None = None, datasets_path: str | Path | None = None):
        self._models = self._read(models_path)
        self._datasets = self._read(datasets_path)

    @staticmethod
    def _read(path) -> list[dict]:
        if path is None:
            return []
        return [
            json.loads(line)
            for line in Path(path).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]

    def search_models(self, query: str) -> list[dict]:
        return list(self._models)

    def search_datasets(self, query: str) -> list[dict]:
        return list(self._datasets)


class HttpHub:
    """Live hub client: GET {base}/models?query=... and {base}/datasets?query=..."""

    def __init__(
        self,
        base_url: str,
        *,
        max_retries: int = 3,
        backoff_base: float = 1.0,
        timeout: float = 30.0,
        sleep: SleepFn | None = None,
    ):
        import time

        self.base_url = base_url.rstrip("/")
        self.max_retries = max_retries
        self.backoff_base = backoff_base
        self.timeout = timeout
        self._sleep = sleep or time.sleep

    def _get(self, path: str, query: str) -> list[dict]:
        attempt = 0
        while True:
            try:
                response = httpx.get(
                    f"{self.base_url}/{path}",
                    params={"query": query},
                    timeout=self.timeout,
                )
                if response.status_code >= 500:
                    raise httpx.HTTPError(f"HTTP {response.status_code}")
                break
            except httpx.HTTPError as exc:
                if attempt >= self.max_retries:
                    raise HubUnavailable(f"hub {path} search failed after {attempt} retries: {exc}") from exc
                self._sleep(self.backoff_base * (2 ** attempt))
                attempt += 1
        try:
            body = response.json()
        except ValueError as exc:
            raise MalformedResponse(f"unparseable hub payload: {exc}") from exc
        records = body.get("data") if isinstance(body, dict) else body
        if not isinstance(records, list):
            raise MalformedResponse(f"expected a record list, got {type(records).__name__}")
        return records

    def search_models(self, query: str) -> list[dict]:
        return self._get("models", query)

    def search_datasets(self, query: str) -> list[dict]:
        return self._get("datasets", query)


def _record_score(record: dict, instruction: str) -> float | None:
    """Explicit provider score, else keyword overlap; None means no match."""
    if "score" in record:
        return float(record["score"])
    haystack = set(
        tokenize(
            " ".join(
                [
                    str(record.get("name", "")),
                    str(record.get("description", "")),
                    " ".join(record.get("tags", [])),
                ]
            )
        )
    )
    overlap = len(set(tokenize(instruction)) & haystack)
    return float(overlap) if overlap else None


def rank_records(records: list[dict], instruction: str) -> list[tuple[float, dict]]:
    scored = []
    for record in records:
        name = str(record.get("name", "")).strip()
        if not name:
            logger.warning("dropping hub record without a name: %r", record)
            continue
        score = _record_score(record, instruction)
        if score is None:
            continue
        scored.append((score, record))
    scored.sort(key=lambda pair: (-pair[0], str(pair[1]["name"])))
    return scored
