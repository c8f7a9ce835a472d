"""Recent-works retrieval from a pluggable literature provider.

One search contract covers both the live HTTP client (a public scholarly
search API) and the deterministic local stub used by every test. Both speak
the same record shape: {title, abstract, year, id, score}.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import httpx

from ..clock import SleepFn
from ..errors import MalformedResponse, ProviderUnavailable
from ..textutil import normalize_title
from .context import PromptContext

logger = logging.getLogger(__name__)

DEFAULT_LIMIT = 10


@dataclass
class RelatedWork:
    title: str
    abstract: str = ""
    year: int = 0
    source_id: str = ""
    relevance: float = 0.0


class LiteratureProvider(Protocol):
    def search(self, query: str, limit: int) -> list[dict]:
        """Return raw records: {title, abstract, year, id, score?}."""
        ...


class StubLiteratureProvider:
    """Reads the provider record format from a local JSON-lines file."""

    def __init__(self, path: str | Path):
        self.records = [
            json.loads(line)
            for line in Path(path).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]

    def search(self, query: str, limit: int) -> list[dict]:
        return list(self.records[: limit if limit >= 0 else None])


class HttpLiteratureProvider:
    """Live client for an HTTP paper-search endpoint.

    Expects GET {base_url}?query=...&limit=... returning either a bare JSON
    list of records or {"data": [...]}.
    """

    def __init__(
        self,
        base_url: str,
        *,
        max_retries: int = 3,
        backoff_base: float = 1.0,
        timeout: float = 30.0,
        sleep: SleepFn | None = None,
    ):
        self.base_url = base_url
        self.max_retries = max_retries
        self.backoff_base = backoff_base
        self.timeout = timeout
        self._sleep = sleep or _sleep

    def search(self, query: str, limit: int) -> list[dict]:
        attempt = 0
        while True:
            try:
                response = httpx.get(
                    self.base_url,
                    params={"query": query, "limit": limit},
                    timeout=self.timeout,
                )
                if response.status_code >= 500:
                    raise httpx.HTTPError(f"HTTP {response.status_code}")
                break
            except httpx.HTTPError as exc:
                if attempt >= self.max_retries:
                    raise ProviderUnavailable(
                        f"literature provider failed after {attempt} retries: {exc}"
                    ) from exc
                self._sleep(self.backoff_base * (2 ** attempt))
                attempt += 1
        try:
            body = response.json()
        except ValueError as exc:
            raise MalformedResponse(f"unparseable provider payload: {exc}") from exc
        records = body.get("data") if isinstance(body, dict) else body
        if not isinstance(records, list):
            raise MalformedResponse(f"expected a record list, got {type(records).__name__}")
        return records


def search_recent_works(
    context: PromptContext,
    limit: int = DEFAULT_LIMIT,
    provider: LiteratureProvider | None = None,
) -> list[RelatedWork]:
    """Retrieve up to `limit` recent works, ranked by relevance descending.

    Relevance is the provider score when supplied, otherwise the number of
    context keywords occurring in the record's title + abstract.
    """
    if limit < 0:
        raise ValueError("limit must be non-negative")
    if limit == 0:
        return []
    if provider is None:
        raise ValueError("a literature provider must be configured")

    query = ", ".join(context.frame.keywords)
    keywords = [k.lower() for k in context.frame.keywords]
    works: list[RelatedWork] = []
    for record in provider.search(query, limit):
        try:
            title = str(record.get("title", "")).strip()
            if not title:
                logger.warning("dropping untitled literature record: %r", record)
                continue
            abstract = str(record.get("abstract", "") or "")
            if record.get("score") is not None:
                relevance = float(record["score"])
            else:
                haystack = f"{title} {abstract}".lower()
                relevance = float(sum(1 for k in keywords if k and k in haystack))
            works.append(
                RelatedWork(
                    title=title,
                    abstract=abstract,
                    year=int(record.get("year") or 0),
                    source_id=str(record.get("id", "")),
                    relevance=relevance,
                )
            )
        except (TypeError, ValueError) as exc:
            raise MalformedResponse(f"bad literature record {record!r}: {exc}") from exc
    return dedupe_and_rank(works)[:limit]


def dedupe_and_rank(candidates: list[RelatedWork]) -> list[RelatedWork]:
    """Collapse duplicate titles and order the survivors.

    Duplicates share a normalized title (lowercase, whitespace-collapsed); the
    best-ranked survivor wins. Order: relevance desc, year desc, title asc.
    """
    ranked = sorted(candidates, key=lambda w: (-w.relevance, -w.year, w.title))
    seen: set[str] = set()
    result: list[RelatedWork] = []
    for work in ranked:
        key = normalize_title(work.title)
        if key not in seen:
            seen.add(key)
            result.append(work)
    return result


def _sleep(seconds: float) -> None:
    import time

    time.sleep(seconds)
