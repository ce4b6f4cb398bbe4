"""Prediction extraction and post-processing before exact-match scoring."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .backends.base import CompletionResult

FAILURE_MARKER = "..."

_QUOTES = "\"'`“”‘’"
_OPEN = {"(": ")", "[": "]", "<": ">"}
_CLOSE = {v: k for k, v in _OPEN.items()}
_DOTS = re.compile(r"\.{2,}")
# whitespace (as str.strip sees it) and sentence punctuation at either end
_EDGES = re.compile(r"^[\s.,;:!?]+|[\s.,;:!?]+$")


@dataclass(frozen=True)
class Prediction:
    raw: str
    normalized: str

    @property
    def failed(self) -> bool:
        return self.normalized == FAILURE_MARKER

    @classmethod
    def from_raw(cls, raw: str) -> "Prediction":
        return cls(raw=raw, normalized=normalize_fqn(raw))


def extract_prediction(result: CompletionResult) -> str:
    """First line of a completion, trimmed; the failure marker if there is none."""
    if result.text is None:
        return FAILURE_MARKER
    return result.text.split("\n", 1)[0].strip()


def _empty_brackets(text: str) -> str:
    # Match bracket pairs with a stack; outermost pairs keep their delimiters
    # and lose their contents, unmatched brackets are dropped.
    stack: list[tuple[str, int]] = []
    pairs: dict[int, int] = {}
    for i, ch in enumerate(text):
        if ch in _OPEN:
            stack.append((ch, i))
        elif ch in _CLOSE:
            if stack and stack[-1][0] == _CLOSE[ch]:
                _, j = stack.pop()
                pairs[j] = i
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if i in pairs:
            out.append(ch + text[pairs[i]])
            i = pairs[i] + 1
            continue
        if ch not in _OPEN and ch not in _CLOSE:
            out.append(ch)
        i += 1
    return "".join(out)


def normalize_fqn(raw: str) -> str:
    """Post-process a predicted FQN.

    >>> normalize_fqn('"java.util.List<String>"')
    'java.util.List<>'
    >>> normalize_fqn("javax.swing#JFrame")
    'javax.swing.JFrame'
    """
    text = raw.strip()
    for q in _QUOTES:
        text = text.replace(q, "")
    text = _empty_brackets(text)
    text = text.replace("#", ".").replace("$", ".")
    text = _DOTS.sub(".", text)
    text = _EDGES.sub("", text)
    return text or FAILURE_MARKER


def is_correct(prediction: str, gold: str) -> bool:
    return prediction != FAILURE_MARKER and prediction == gold
