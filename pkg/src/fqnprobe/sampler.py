"""Greedy diversity sampling of representative methods, one package at a time."""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .corpus import CodeSnippet, Corpus
from .scanner import tokenize_lenient

Similarity = Callable[[CodeSnippet, CodeSnippet], float]


@dataclass(frozen=True)
class SamplerConfig:
    similarity_threshold: float = 0.9
    max_loc: int = 30
    min_pairs: int = 4
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0 < self.similarity_threshold <= 1:
            raise ValueError("similarity_threshold must be in (0, 1]")
        if self.max_loc < 1:
            raise ValueError("max_loc must be at least 1")


@lru_cache(maxsize=65536)
def shingles(source_text: str, k: int = 3) -> frozenset[tuple[str, ...]]:
    tokens = tuple(t.text for t in tokenize_lenient(source_text))
    if not tokens:
        return frozenset()
    if len(tokens) < k:
        return frozenset({tokens})
    return frozenset(tokens[i : i + k] for i in range(len(tokens) - k + 1))


def similarity(a: CodeSnippet, b: CodeSnippet) -> float:
    """Jaccard coefficient over 3-token shingles of the lenient token stream."""
    sa, sb = shingles(a.source_text), shingles(b.source_text)
    if not sa or not sb:
        return 1.0 if a.source_text == b.source_text else 0.0
    return len(sa & sb) / len(sa | sb)


@dataclass
class SampleLogEntry:
    package: str
    accepted: str | None
    max_similarity: float | None = None
    rejected: dict[str, float] = field(default_factory=dict)
    reason: str = ""


@dataclass
class SampleResult:
    snippets: list[CodeSnippet]
    log: list[SampleLogEntry]

    @property
    def ids(self) -> list[str]:
        return [s.id for s in self.snippets]


def sample_with_log(corpus: Corpus, config: SamplerConfig, metric: Similarity = similarity) -> SampleResult:
    by_package: dict[str, list[CodeSnippet]] = defaultdict(list)
    for snippet in corpus:
        if snippet.loc < config.max_loc:
            by_package[snippet.package_path].append(snippet)
    if not by_package:
        return SampleResult([], [])
    rng = random.Random(config.seed)
    packages = sorted(by_package)
    for methods in by_package.values():
        methods.sort(key=lambda s: s.id)

    first_pkg = rng.choice(packages)
    seed_method = rng.choice(by_package[first_pkg])
    sampled = [seed_method]
    log = [SampleLogEntry(first_pkg, seed_method.id, reason="seed")]

    rest = [p for p in packages if p != first_pkg]
    rng.shuffle(rest)
    for pkg in rest:
        entry = SampleLogEntry(pkg, None)
        best: tuple[float, str, CodeSnippet] | None = None
        for method in by_package[pkg]:
            worst = max(metric(method, s) for s in sampled)
            if worst >= config.similarity_threshold:
                entry.rejected[method.id] = worst
                continue
            if len(corpus.pairs[method.id]) < config.min_pairs:
                entry.rejected[method.id] = worst
                continue
            if best is None or (worst, method.id) < best[:2]:
                best = (worst, method.id, method)
        if best is None:
            entry.reason = "no candidate"
        else:
            entry.accepted = best[1]
            entry.max_similarity = best[0]
            sampled.append(best[2])
        log.append(entry)
    return SampleResult(sampled, log)


def sample(corpus: Corpus, config: SamplerConfig, metric: Similarity = similarity) -> list[CodeSnippet]:
    return sample_with_log(corpus, config, metric).snippets
