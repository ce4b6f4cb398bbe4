"""Completion interface shared by every model backend."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

from ..composer import ARROW

NO_COMPLETION_TEXT = "No completions were found"


class BackendError(RuntimeError):
    retryable = False


class TransportError(BackendError):
    retryable = True


class BackendTimeout(BackendError):
    retryable = True


class AuthenticationError(BackendError):
    retryable = False


@dataclass(frozen=True)
class CompletionRequest:
    text: str
    max_new_tokens: int = 64
    stop_sequences: tuple[str, ...] = ("\n",)
    # optional run metadata; local backends use it, the HTTP backend ignores it
    snippet_id: str | None = None
    file_name: str | None = None
    shot: str | None = None

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("completion request text must be non-empty")
        if self.max_new_tokens < 1:
            raise ValueError("max_new_tokens must be positive")


@dataclass(frozen=True)
class CompletionResult:
    """``text is None`` means the model produced no completion."""

    text: str | None
    latency_ms: int = 0

    def __post_init__(self) -> None:
        if self.text == "":
            object.__setattr__(self, "text", None)
        if self.latency_ms < 0:
            raise ValueError("latency must be non-negative")

    @property
    def no_completion(self) -> bool:
        return self.text is None


@runtime_checkable
class Backend(Protocol):
    def complete(self, request: CompletionRequest) -> CompletionResult: ...


_DESCRIPTION_QUERY = re.compile(r'^// the fully qualified name of (?:"(?P<q>[^"\s]+)"|(?P<p>\S+)) is$')
_SYMBOL_QUERY = re.compile(rf'^// (?:"(?P<q>[^"\s]+)"|(?P<p>\S+)) {ARROW}$')
_DESCRIPTION_EXAMPLE = re.compile(
    r'^// the fully qualified name of (?:"(?P<q>[^"\s]+)"|(?P<p>\S+)) is (?:"[^"\s]+"|\S+)$'
)
_SYMBOL_EXAMPLE = re.compile(rf'^// (?:"(?P<q>[^"\s]+)"|(?P<p>\S+)) {ARROW} (?:"[^"\s]+"|\S+)$')


def parse_query(text: str) -> tuple[str, bool] | None:
    """Recover ``(simple_name, quoted)`` from the last line of a task input."""
    last = text.rstrip("\n").rsplit("\n", 1)[-1].rstrip()
    for pattern in (_DESCRIPTION_QUERY, _SYMBOL_QUERY):
        m = pattern.match(last)
        if m:
            if m.group("q") is not None:
                return m.group("q"), True
            return m.group("p"), False
    return None


def parse_example_names(text: str) -> list[str]:
    """Simple names of the example prompt lines in a task input (query line excluded)."""
    names = []
    for line in text.rstrip("\n").split("\n")[:-1]:
        for pattern in (_DESCRIPTION_EXAMPLE, _SYMBOL_EXAMPLE):
            m = pattern.match(line.rstrip())
            if m:
                names.append(m.group("q") or m.group("p"))
                break
    return names


def render_answer(fqn: str, quoted: bool) -> str:
    return f' "{fqn}"' if quoted else f" {fqn}"
