"""Chat-completion providers: OpenAI-compatible HTTP endpoint and scripted mock.

Every call returns token usage and latency so downstream cost accounting can
reconcile run totals against per-call sums.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import httpx

from .errors import (
    AuthError,
    MalformedProviderReply,
    ScriptExhausted,
    TransientExhausted,
)

RETRYABLE_STATUS = {429, 500, 502, 503, 504}


@dataclass(frozen=True)
class ChatRequest:
    model: str
    system_prompt: str
    user_prompt: str
    temperature: float = 1.0
    max_output_tokens: int = 1024

    def __post_init__(self) -> None:
        if not self.system_prompt or not self.user_prompt:
            raise ValueError("prompts must be non-empty")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature {self.temperature} outside [0, 2]")
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be positive")


@dataclass(frozen=True)
class ChatResponse:
    text: str
    prompt_tokens: int
    completion_tokens: int
    latency_ms: int
    model: str

    @property
    def total_tokens(self) -> int:
        return self.prompt_tokens + self.completion_tokens


@dataclass(frozen=True)
class ProviderConfig:
    base_url: str = "https://api.openai.com/v1"
    api_key_env: str = "OPENAI_API_KEY"
    request_timeout_s: float = 60.0
    max_retries: int = 5
    parallelism: int = 4
    backoff_base_s: float = 0.5

    def __post_init__(self) -> None:
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        if not 0 <= self.max_retries <= 10:
            raise ValueError("max_retries must be in 0..10")


class HttpProvider:
    """POSTs to ``{base_url}/chat/completions``; retries 429/5xx/timeouts."""

    serial = False

    def __init__(self, cfg: ProviderConfig, transport: Optional[httpx.BaseTransport] = None):
        self.cfg = cfg
        self._client = httpx.Client(timeout=cfg.request_timeout_s, transport=transport)

    def close(self) -> None:
        self._client.close()

    def _api_key(self) -> str:
        key = os.environ.get(self.cfg.api_key_env, "")
        if not key:
            raise AuthError(f"no API key in environment variable {self.cfg.api_key_env}")
        return key

    def complete(self, req: ChatRequest) -> ChatResponse:
        url = self.cfg.base_url.rstrip("/") + "/chat/completions"
        headers = {"Authorization": f"Bearer {self._api_key()}"}
        payload = {
            "model": req.model,
            "messages": [
                {"role": "system", "content": req.system_prompt},
                {"role": "user", "content": req.user_prompt},
            ],
            "temperature": req.temperature,
            "max_tokens": req.max_output_tokens,
        }
        start = time.perf_counter()
        last_reason = "no attempt made"
        for attempt in range(self.cfg.max_retries + 1):
            if attempt:
                time.sleep(self.cfg.backoff_base_s * 2 ** (attempt - 1))
            try:
                resp = self._client.post(url, json=payload, headers=headers)
            except httpx.TransportError as exc:
                last_reason = f"transport error: {exc}"
                continue
            if resp.status_code in (401, 403):
                raise AuthError(f"HTTP {resp.status_code} from {url}")
            if resp.status_code in RETRYABLE_STATUS:
                last_reason = f"HTTP {resp.status_code}"
                continue
            latency_ms = int((time.perf_counter() - start) * 1000)
            return self._parse(resp, req.model, latency_ms)
        raise TransientExhausted(f"{self.cfg.max_retries} retries spent; last failure: {last_reason}")

    @staticmethod
    def _parse(resp: httpx.Response, model: str, latency_ms: int) -> ChatResponse:
        try:
            body = resp.json()
            text = body["choices"][0]["message"]["content"]
            usage = body["usage"]
            prompt_tokens = int(usage["prompt_tokens"])
            completion_tokens = int(usage["completion_tokens"])
        except (KeyError, IndexError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise MalformedProviderReply(f"reply missing text or usage: {exc}") from exc
        if text is None:
            raise MalformedProviderReply("reply has null content")
        if prompt_tokens < 0 or completion_tokens < 0:
            raise MalformedProviderReply("negative token counts")
        total = usage.get("total_tokens")
        if total is not None and int(total) != prompt_tokens + completion_tokens:
            raise MalformedProviderReply(
                f"usage total {total} != {prompt_tokens} + {completion_tokens}"
            )
        return ChatResponse(
            text=text,
            prompt_tokens=prompt_tokens,
            completion_tokens=completion_tokens,
            latency_ms=latency_ms,
            model=str(body.get("model", model)),
        )


@dataclass
class _ScriptLine:
    text: str
    prompt_tokens: int
    completion_tokens: int
    match: Optional[str] = None
    latency_ms: int = 0
    consumed: bool = field(default=False, compare=False)


class MockProvider:
    """Replays a JSON-lines script; requests consume the first unconsumed
    line whose ``match`` substring occurs in the user prompt (lines without
    ``match`` accept anything). Consumption is serialized for determinism.
    """

    serial = True

    def __init__(self, lines: list[_ScriptLine], source: str = "script"):
        self._lines = lines
        self._source = source
        self._lock = threading.Lock()
        self._next_unconsumed = 0

    def complete(self, req: ChatRequest) -> ChatResponse:
        with self._lock:
            for idx in range(self._next_unconsumed, len(self._lines)):
                line = self._lines[idx]
                if line.consumed:
                    continue
                if line.match is not None and line.match not in req.user_prompt:
                    continue
                line.consumed = True
                while (
                    self._next_unconsumed < len(self._lines)
                    and self._lines[self._next_unconsumed].consumed
                ):
                    self._next_unconsumed += 1
                return ChatResponse(
                    text=line.text,
                    prompt_tokens=line.prompt_tokens,
                    completion_tokens=line.completion_tokens,
                    latency_ms=line.latency_ms,
                    model=req.model,
                )
        raise ScriptExhausted(f"no unconsumed line in {self._source} matches the request")

    def close(self) -> None:
        pass


def mock_from_script(script_path: str | Path) -> MockProvider:
    """Build a MockProvider from a JSON-lines script file."""
    lines: list[_ScriptLine] = []
    with open(script_path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
                lines.append(
                    _ScriptLine(
                        text=str(obj["text"]),
                        prompt_tokens=int(obj["prompt_tokens"]),
                        completion_tokens=int(obj["completion_tokens"]),
                        match=obj.get("match"),
                        latency_ms=int(obj.get("latency_ms", 0)),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise MalformedProviderReply(f"{script_path}:{lineno}: bad script line: {exc}") from exc
    return MockProvider(lines, source=str(script_path))
