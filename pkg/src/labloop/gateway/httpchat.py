"""Live provider speaking the common HTTP chat-completion wire format.

Configured by base URL + model name; credentials come from an environment
variable only (never from config files). Network-level failures surface as
TransientProviderError so the gateway's retry policy applies.
"""

from __future__ import annotations

import os

import httpx

from ..errors import MalformedResponse, TransientProviderError
from .core import CompletionRequest, Usage


class HttpChatProvider:
    def __init__(
        self,
        base_url: str,
        model: str,
        *,
        api_key_env: str = "LABLOOP_API_KEY",
        timeout: float = 60.0,
    ):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.api_key_env = api_key_env
        self.timeout = timeout
        self.provider_id = f"http:{model}"

    def complete(self, request: CompletionRequest) -> tuple[str, Usage]:
        headers = {}
        api_key = os.environ.get(self.api_key_env)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "max_tokens": request.max_output_tokens,
            "temperature": request.temperature,
        }
        try:
            response = httpx.post(
                f"{self.base_url}/chat/completions",
                json=payload,
                headers=headers,
                timeout=self.timeout,
            )
        except httpx.HTTPError as exc:
            raise TransientProviderError(str(exc)) from exc
        if response.status_code >= 500 or response.status_code == 429:
            raise TransientProviderError(f"HTTP {response.status_code}")
        if response.status_code >= 400:
            raise MalformedResponse(
                f"HTTP {response.status_code}: {response.text[:200]}"
            )
        try:
            body = response.json()
            text = body["choices"][0]["message"]["content"]
            raw_usage = body.get("usage", {})
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise MalformedResponse(f"unexpected completion payload: {exc}") from exc
        usage = Usage(
            input_tokens=int(raw_usage.get("prompt_tokens", len(request.prompt) // 4)),
            output_tokens=int(raw_usage.get("completion_tokens", len(text) // 4)),
        )
        return text, usage
