"""Chat-completion client with deterministic record/replay.

Transcripts are content-addressed JSON files keyed by a stable hash of the
normalized request, so replay mode is a pure function of its inputs and the
store directory can be committed as a test fixture.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from ..errors import ProviderError, ReplayMiss, StoreCollision, TransportError

MODES = ("live", "record", "replay")
DEFAULT_TIMEOUT = 60.0
DEFAULT_RETRIES = 2


@dataclass(frozen=True)
class ChatRequest:
    model: str
    messages: tuple[tuple[str, str], ...]  # (role, content) pairs
    temperature: float = 0.0
    max_tokens: int = 2048

    def __post_init__(self):
        if not self.model:
            raise ValueError("request needs a model name")
        if not self.messages:
            raise ValueError("request needs at least one message")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must be in [0, 2]")
        for role, _ in self.messages:
            if role not in ("system", "user", "assistant"):
                raise ValueError(f"unknown role {role!r}")

    def normalized(self) -> str:
        doc = {
            "model": self.model,
            "messages": [{"role": r, "content": c} for r, c in self.messages],
            "temperature": self.temperature,
        }
        return json.dumps(doc, sort_keys=True, ensure_ascii=False, separators=(",", ":"))

    @property
    def key(self) -> str:
        return hashlib.sha256(self.normalized().encode()).hexdigest()


@dataclass
class ChatResponse:
    content: str
    usage: dict[str, int] = field(default_factory=dict)


class TranscriptStore:
    """Directory of `<key>.json` transcripts; writes are atomic renames."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def get(self, key: str) -> dict | None:
        path = self.root / f"{key}.json"
        if not path.exists():
            return None
        return json.loads(path.read_text())

    def put(self, request: ChatRequest, response: ChatResponse) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        existing = self.get(request.key)
        doc = {
            "key": request.key,
            "request": json.loads(request.normalized()),
            "response": response.content,
            "usage": response.usage,
            "recorded_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        }
        if existing is not None:
            if existing["response"] != response.content:
                raise StoreCollision(f"key {request.key} already stored with different content")
            return
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh, indent=2, ensure_ascii=False)
            fh.write("\n")
        os.replace(tmp, self.root / f"{request.key}.json")


def http_transport(base_url: str, api_key: str, timeout: float = DEFAULT_TIMEOUT,
                   retries: int = DEFAULT_RETRIES) -> Callable[[ChatRequest], ChatResponse]:
    """Plain JSON chat-completion POST with exponential backoff on transient failures."""

    def call(request: ChatRequest) -> ChatResponse:
        import requests

        payload = {
            "model": request.model,
            "messages": [{"role": r, "content": c} for r, c in request.messages],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        headers = {"Authorization": f"Bearer {api_key}"} if api_key else {}
        last_error: Exception | None = None
        for attempt in range(retries + 1):
            try:
                resp = requests.post(
                    f"{base_url.rstrip('/')}/chat/completions",
                    json=payload,
                    headers=headers,
                    timeout=timeout,
                )
            except requests.RequestException as exc:
                last_error = exc
                time.sleep(2**attempt * 0.5)
                continue
            if resp.status_code >= 500:
                last_error = ProviderError(resp.status_code, resp.text)
                time.sleep(2**attempt * 0.5)
                continue
            if resp.status_code != 200:
                raise ProviderError(resp.status_code, resp.text)
            doc = resp.json()
            content = doc["choices"][0]["message"]["content"]
            return ChatResponse(content=content, usage=doc.get("usage", {}))
        raise TransportError(f"transport failed after {retries + 1} attempts: {last_error}")

    return call


class LlmClient:
    """Shared, thread-safe client; mode decides network vs. transcript behavior."""

    def __init__(
        self,
        mode: str = "replay",
        store: TranscriptStore | None = None,
        transport: Callable[[ChatRequest], ChatResponse] | None = None,
        model: str = "default-model",
    ):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        if mode == "replay" and store is None:
            raise ValueError("replay mode requires a transcript store")
        if mode in ("live", "record") and transport is None:
            raise ValueError(f"{mode} mode requires a transport")
        self.mode = mode
        self.store = store
        self.transport = transport
        self.model = model

    def complete(self, request: ChatRequest, template: str | None = None) -> ChatResponse:
        if self.mode == "replay":
            assert self.store is not None
            entry = self.store.get(request.key)
            if entry is None:
                raise ReplayMiss(request.key, template)
            return ChatResponse(content=entry["response"], usage=entry.get("usage", {}))
        assert self.transport is not None
        response = self.transport(request)
        if self.mode == "record" and self.store is not None:
            self.store.put(request, response)
        return response

    def chat(self, prompt: str, system: str | None = None,
             template: str | None = None) -> str:
        messages: list[tuple[str, str]] = []
        if system:
            messages.append(("system", system))
        messages.append(("user", prompt))
        request = ChatRequest(model=self.model, messages=tuple(messages))
        return self.complete(request, template=template).content
