"""Simulated code model whose recall depends on FQN usage, length and shot setting.

Recall probability::

    p = clamp(base[shot] * usage_gain[usage bucket] * length_penalty[length bucket]
              + (in_context_bonus if an in-snippet example is shown else 0))

On a miss the model answers with a near-miss FQN (one interior package token
swapped for another token from the corpus vocabulary) or with nothing, 50/50.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from typing import Mapping

import numpy as np

from ..composer import ShotKind, ShotSetting
from ..corpus import (
    LENGTH_BUCKETS,
    USAGE_BUCKETS,
    Corpus,
    FqnStats,
    compute_stats,
    length_bucket,
    usage_bucket,
)
from .base import CompletionRequest, CompletionResult, parse_example_names, render_answer
from .oracle import OracleBackend

SHOT_KEYS = tuple(k.value for k in ShotKind)


@dataclass(frozen=True)
class RecallParams:
    base: Mapping[str, float]
    usage_gain: Mapping[str, float]
    length_penalty: Mapping[str, float]
    in_context_bonus: float = 0.0
    seed: int = 0
    version: int = 1

    def __post_init__(self) -> None:
        if set(self.base) != set(SHOT_KEYS):
            raise ValueError(f"base needs exactly the shot keys {SHOT_KEYS}")
        if any(not 0.0 <= v <= 1.0 for v in self.base.values()):
            raise ValueError("base probabilities must lie in [0, 1]")
        gains = [self.usage_gain[b] for b in USAGE_BUCKETS]
        if any(b > a for a, b in zip(gains[1:], gains)):
            raise ValueError("usage_gain must be non-decreasing with usage")
        penalties = [self.length_penalty[b] for b in LENGTH_BUCKETS]
        if any(b < a for a, b in zip(penalties[1:], penalties)):
            raise ValueError("length_penalty must be non-increasing with length")
        if min(gains + penalties) < 0:
            raise ValueError("weights must be non-negative")

    @classmethod
    def from_dict(cls, data: Mapping) -> "RecallParams":
        return cls(
            base=dict(data["base"]),
            usage_gain=dict(data["usage_gain"]),
            length_penalty=dict(data["length_penalty"]),
            in_context_bonus=float(data.get("in_context_bonus", 0.0)),
            seed=int(data.get("seed", 0)),
            version=int(data.get("version", 1)),
        )

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "base": dict(self.base),
            "usage_gain": dict(self.usage_gain),
            "length_penalty": dict(self.length_penalty),
            "in_context_bonus": self.in_context_bonus,
            "seed": self.seed,
        }

    @classmethod
    def defaults(cls, seed: int | None = None) -> "RecallParams":
        text = resources.files("fqnprobe").joinpath("data/recall_defaults_v1.json").read_text()
        data = json.loads(text)
        if seed is not None:
            data["seed"] = seed
        return cls.from_dict(data)


def stochastic_recall_probability(
    stats: FqnStats, shot: ShotSetting | ShotKind | str, in_context: bool, params: RecallParams
) -> float:
    if isinstance(shot, ShotSetting):
        key = shot.kind.value
    elif isinstance(shot, ShotKind):
        key = shot.value
    else:
        key = ShotSetting.parse(shot).kind.value
    p = (
        params.base[key]
        * params.usage_gain[usage_bucket(stats.usage_count)]
        * params.length_penalty[length_bucket(stats.length_tokens)]
    )
    if in_context:
        p += params.in_context_bonus
    return min(1.0, max(0.0, p))


def _generator(seed: int, key: str) -> np.random.Generator:
    digest = hashlib.sha256(f"{seed}|{key}".encode()).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "little"))


class StochasticBackend:
    """Seeded simulated model; results depend only on (seed, task file, text)."""

    def __init__(self, corpus: Corpus, params: RecallParams | None = None, stats: Mapping[str, FqnStats] | None = None):
        self.params = params or RecallParams.defaults()
        self.stats = stats if stats is not None else compute_stats(corpus)
        self.oracle = OracleBackend.from_corpus(corpus)
        self.snippet_names = {sid: {p.simple_name for p in pairs} for sid, pairs in corpus.pairs.items()}
        vocab = {tok for fqn in self.stats for tok in fqn.split(".")[:-1]}
        self.vocabulary = sorted(vocab)

    def _shot(self, request: CompletionRequest, examples: list[str], in_context: bool) -> str:
        if request.shot is not None:
            return ShotSetting.parse(request.shot).kind.value
        n = len(self.snippet_names.get(request.snippet_id or "", ()))
        if not examples:
            return "zero"
        if len(examples) == 1:
            return "one" if in_context else "one-enic"
        return "few-loo" if len(examples) == n - 1 else "few-rep"

    def corrupt(self, fqn: str, rng: np.random.Generator) -> str | None:
        tokens = fqn.split(".")
        idx = int(rng.integers(1, len(tokens) - 1)) if len(tokens) >= 3 else 0
        choices = [t for t in self.vocabulary if t != tokens[idx]]
        if not choices:
            return None
        tokens[idx] = choices[int(rng.integers(len(choices)))]
        return ".".join(tokens)

    def complete(self, request: CompletionRequest) -> CompletionResult:
        found = self.oracle.gold(request)
        if found is None:
            return CompletionResult(None)
        fqn, quoted = found
        examples = parse_example_names(request.text)
        names = self.snippet_names.get(request.snippet_id or "", set())
        in_context = any(name in names for name in examples)
        shot = self._shot(request, examples, in_context)
        p = stochastic_recall_probability(self.stats[fqn], shot, in_context, self.params)
        rng = _generator(self.params.seed, request.file_name or request.text)
        if rng.random() < p:
            return CompletionResult(render_answer(fqn, quoted))
        if rng.random() < 0.5:
            return CompletionResult(None)
        wrong = self.corrupt(fqn, rng)
        return CompletionResult(None if wrong is None else render_answer(wrong, quoted))
