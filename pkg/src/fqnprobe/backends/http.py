"""HTTP completion-endpoint client.

One POST per request with body ``{"prompt", "max_tokens", "stop"}``; the first
choice's ``text`` is taken verbatim. Transport failures, timeouts and 5xx/429
responses are retried up to ``retries`` times; auth failures are not.
"""

from __future__ import annotations

import json
import logging
import os
import socket
import threading
import time
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

from .base import (
    NO_COMPLETION_TEXT,
    AuthenticationError,
    BackendError,
    BackendTimeout,
    CompletionRequest,
    CompletionResult,
    TransportError,
)

API_KEY_ENV = "FQN_PROBE_API_KEY"

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HttpSettings:
    base_url: str
    path: str = "/v1/completions"
    timeout_ms: int = 30_000
    retries: int = 2
    concurrency: int = 1
    auth_header: str | None = "Authorization"
    auth_scheme: str = "Bearer"
    require_auth: bool = False
    retry_backoff_ms: int = 0

    @classmethod
    def from_dict(cls, data: dict) -> "HttpSettings":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)


class HttpBackend:
    def __init__(self, settings: HttpSettings, api_key: str | None = None):
        if settings.retries < 0 or settings.concurrency < 1 or settings.timeout_ms <= 0:
            raise ValueError("retries >= 0, concurrency >= 1 and timeout_ms > 0 are required")
        self.settings = settings
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        if settings.require_auth and not self.api_key:
            raise AuthenticationError(f"{API_KEY_ENV} is not set but the endpoint requires authentication")
        self._slots = threading.BoundedSemaphore(settings.concurrency)
        self.attempts = 0
        self._lock = threading.Lock()

    @property
    def url(self) -> str:
        return self.settings.base_url.rstrip("/") + "/" + self.settings.path.lstrip("/")

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.api_key and self.settings.auth_header:
            scheme = self.settings.auth_scheme
            headers[self.settings.auth_header] = f"{scheme} {self.api_key}" if scheme else self.api_key
        return headers

    def _post_once(self, body: bytes) -> dict:
        with self._lock:
            self.attempts += 1
        req = urllib.request.Request(self.url, data=body, headers=self._headers(), method="POST")
        try:
            with urllib.request.urlopen(req, timeout=self.settings.timeout_ms / 1000) as resp:
                payload = resp.read()
        except urllib.error.HTTPError as exc:
            if exc.code in (401, 403):
                raise AuthenticationError(f"HTTP {exc.code} from {self.url}") from exc
            if exc.code == 429 or exc.code >= 500:
                raise TransportError(f"HTTP {exc.code} from {self.url}") from exc
            raise BackendError(f"HTTP {exc.code} from {self.url}") from exc
        except (socket.timeout, TimeoutError) as exc:
            raise BackendTimeout(f"no response from {self.url} within {self.settings.timeout_ms} ms") from exc
        except urllib.error.URLError as exc:
            if isinstance(exc.reason, (socket.timeout, TimeoutError)):
                raise BackendTimeout(f"no response from {self.url} within {self.settings.timeout_ms} ms") from exc
            raise TransportError(f"cannot reach {self.url}: {exc.reason}") from exc
        except (ConnectionError, OSError) as exc:
            raise TransportError(f"cannot reach {self.url}: {exc}") from exc
        try:
            return json.loads(payload)
        except json.JSONDecodeError as exc:
            raise TransportError(f"malformed JSON from {self.url}") from exc

    def complete(self, request: CompletionRequest) -> CompletionResult:
        body = json.dumps({
            "prompt": request.text,
            "max_tokens": request.max_new_tokens,
            "stop": list(request.stop_sequences),
        }).encode()
        with self._slots:
            start = time.perf_counter()
            for attempt in range(self.settings.retries + 1):
                try:
                    data = self._post_once(body)
                    break
                except BackendError as exc:
                    if not exc.retryable or attempt == self.settings.retries:
                        raise
                    log.warning("attempt %d failed: %s", attempt + 1, exc)
                    time.sleep(self.settings.retry_backoff_ms / 1000)
            latency = int((time.perf_counter() - start) * 1000)
        return CompletionResult(_first_choice(data), latency)

    def complete_many(self, requests: Iterable[CompletionRequest]) -> list[CompletionResult]:
        with ThreadPoolExecutor(max_workers=self.settings.concurrency) as pool:
            return list(pool.map(self.complete, requests))


def _first_choice(data: dict) -> str | None:
    choices = data.get("choices") or []
    if not choices:
        return None
    text = choices[0].get("text") if isinstance(choices[0], dict) else None
    if not text or text.strip() == NO_COMPLETION_TEXT:
        return None
    return text
