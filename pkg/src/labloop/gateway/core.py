"""Provider-agnostic completion gateway.

One call contract (`Provider.complete`) behind which a live HTTP provider and
the deterministic scripted replayer are interchangeable. The gateway owns the
cross-cutting concerns: retry with exponential backoff, a per-run token budget
enforced before dispatch, and an optional record hook so every call lands in
the run trace.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol

from ..clock import Clock, SleepFn, SystemClock
from ..errors import BudgetExhausted, ProviderUnavailable, TransientProviderError

DEFAULT_MAX_RETRIES = 3
DEFAULT_BACKOFF_BASE = 1.0
DEFAULT_TOKEN_BUDGET = 200_000


@dataclass
class Usage:
    input_tokens: int = 0
    output_tokens: int = 0

    @property
    def total(self) -> int:
        return self.input_tokens + self.output_tokens


@dataclass
class CompletionRequest:
    prompt: str
    max_output_tokens: int = 4096
    temperature: float = 0.7
    session_tag: str = ""

    def __post_init__(self):
        if not self.prompt:
            raise ValueError("prompt must be non-empty")
        if self.max_output_tokens <= 0:
            raise ValueError("max_output_tokens must be positive")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must be in [0, 2]")


@dataclass
class CompletionResponse:
    text: str
    provider_id: str
    usage: Usage
    latency: float


class Provider(Protocol):
    provider_id: str

    def complete(self, request: CompletionRequest) -> tuple[str, Usage]:
        """Return (reply text, usage). Raise TransientProviderError to retry."""
        ...


@dataclass
class CallRecord:
    """One completed gateway call, for budget accounting and tests."""

    session_tag: str
    usage: Usage
    retries: int
    latency: float


def project_tokens(request: CompletionRequest) -> int:
    """Conservative projection of a request's token cost, used pre-dispatch.

    Characters/3 overestimates tokens for English text, which is the point:
    the budget gate should trip before a runaway loop does real damage.
    """
    return len(request.prompt) // 3 + request.max_output_tokens


class Gateway:
    """Completion interface with retries and a per-run token budget.

    Thread-safe: budget accounting and the call log are lock-protected so
    concurrent tool calls within one run cannot corrupt the ledger.
    """

    def __init__(
        self,
        provider: Provider,
        *,
        max_retries: int = DEFAULT_MAX_RETRIES,
        backoff_base: float = DEFAULT_BACKOFF_BASE,
        token_budget: int = DEFAULT_TOKEN_BUDGET,
        clock: Optional[Clock] = None,
        sleep: Optional[SleepFn] = None,
        record_hook: Optional[Callable[[CompletionRequest, CompletionResponse], None]] = None,
    ):
        self.provider = provider
        self.max_retries = max_retries
        self.backoff_base = backoff_base
        self.token_budget = token_budget
        self.tokens_used = 0
        self.calls: list[CallRecord] = []
        self._clock = clock or SystemClock()
        self._sleep = sleep if sleep is not None else _default_sleep
        self._record_hook = record_hook
        self._lock = threading.Lock()

    @property
    def tokens_remaining(self) -> int:
        return self.token_budget - self.tokens_used

    def complete(self, request: CompletionRequest) -> CompletionResponse:
        projected = project_tokens(request)
        with self._lock:
            if projected > self.token_budget - self.tokens_used:
                raise BudgetExhausted(
                    f"projected {projected} tokens exceeds remaining "
                    f"budget {self.token_budget - self.tokens_used}"
                )

        started = self._clock.monotonic()
        retries = 0
        while True:
            try:
                text, usage = self.provider.complete(request)
                break
            except TransientProviderError as exc:
                if retries >= self.max_retries:
                    raise ProviderUnavailable(
                        f"provider failed after {retries} retries: {exc}"
                    ) from exc
                self._sleep(self.backoff_base * (2 ** retries))
                retries += 1

        latency = self._clock.monotonic() - started
        response = CompletionResponse(
            text=text,
            provider_id=self.provider.provider_id,
            usage=usage,
            latency=latency,
        )
        with self._lock:
            self.tokens_used += usage.total
            self.calls.append(
                CallRecord(request.session_tag, usage, retries, latency)
            )
        if self._record_hook is not None:
            self._record_hook(request, response)
        return response

    def ask(self, prompt: str, *, session_tag: str = "", temperature: float = 0.7,
            max_output_tokens: int = 4096) -> str:
        """Convenience wrapper returning just the reply text."""
        return self.complete(
            CompletionRequest(
                prompt=prompt,
                max_output_tokens=max_output_tokens,
                temperature=temperature,
                session_tag=session_tag,
            )
        ).text


def _default_sleep(seconds: float) -> None:
    import time

    time.sleep(seconds)


@dataclass
class FlakyProvider:
    """Test helper: fail with TransientProviderError N times, then delegate."""

    inner: Provider
    failures: int
    provider_id: str = field(init=False)
    attempts: int = field(default=0, init=False)

    def __post_init__(self):
        self.provider_id = self.inner.provider_id

    def complete(self, request: CompletionRequest) -> tuple[str, Usage]:
        self.attempts += 1
        if self.attempts <= self.failures:
            raise TransientProviderError(f"injected fault {self.attempts}")
        return self.inner.complete(request)
