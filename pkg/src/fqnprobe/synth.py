"""Synthetic corpora with Zipfian FQN usage, polysemous simple names and near-clones."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass

import numpy as np

from .corpus import CodeSnippet, Corpus, NameKind, NamePair, count_loc

_SYLLABLES = ("ka", "lo", "mi", "ne", "ro", "ta", "vu", "zi", "pe", "su", "da", "fo", "gri", "bel", "tor", "quan")
_VERBS = ("get", "set", "make", "load", "read", "write", "open", "close", "find", "build", "parse", "emit")


@dataclass(frozen=True)
class SynthConfig:
    n_snippets: int = 500
    n_fqns: int = 600
    n_packages: int = 120
    zipf_exponent: float = 1.8
    max_usage: int = 60_000
    pair_exponent: float = 0.6
    pairs_per_snippet: tuple[int, int] = (2, 8)
    class_name_pool: int = 380
    clone_rate: float = 0.0
    long_rate: float = 0.0
    library: str = "synth"
    seed: int = 0


def _word(rng: np.random.Generator, lo: int = 2, hi: int = 3) -> str:
    n = int(rng.integers(lo, hi + 1))
    return "".join(_SYLLABLES[int(rng.integers(len(_SYLLABLES)))] for _ in range(n))


def _length(rank: int, rng: np.random.Generator) -> int:
    if rank < 12:
        return int(rng.integers(2, 5))
    u = rng.random()
    if u < 0.45:
        return int(rng.integers(2, 5))
    if u < 0.75:
        return int(rng.integers(5, 8))
    if u < 0.92:
        return int(rng.integers(8, 11))
    return int(rng.integers(11, 14))


def _fqn_vocabulary(cfg: SynthConfig, rng: np.random.Generator):
    class_names = sorted({_word(rng).capitalize() + _word(rng, 1, 2).capitalize() for _ in range(cfg.class_name_pool * 2)})
    class_names = [class_names[int(i)] for i in rng.permutation(len(class_names))[: cfg.class_name_pool]]
    pkg_tokens = sorted({_word(rng, 1, 2) for _ in range(200)})
    fqns, simple = [], []
    seen = set()
    rank = 0
    while len(fqns) < cfg.n_fqns:
        length = _length(rank, rng)
        cls = class_names[int(rng.integers(len(class_names)))]
        pkg = [pkg_tokens[int(rng.integers(len(pkg_tokens)))] for _ in range(length - 1)]
        fqn = ".".join(pkg + [cls])
        if fqn in seen:
            continue
        seen.add(fqn)
        fqns.append(fqn)
        simple.append(cls)
        rank += 1
    return fqns, simple


def zipfian_corpus(cfg: SynthConfig = SynthConfig()) -> Corpus:
    """Generate a corpus whose per-FQN usage totals follow a Zipf law.

    FQN of rank ``r`` has usage ``max_usage / r**zipf_exponent`` (at least 1)
    spread over ``~usage**pair_exponent`` name pairs; frequent FQNs are short.
    Receiver variables give several simple names per FQN, and the class-name
    pool is smaller than the FQN count so base names are shared across FQNs.
    """
    rng = np.random.default_rng(cfg.seed)
    fqns, class_of = _fqn_vocabulary(cfg, rng)
    usage = [max(1, round(cfg.max_usage / (r + 1) ** cfg.zipf_exponent)) for r in range(len(fqns))]
    slots = [max(1, min(u, round(u**cfg.pair_exponent))) for u in usage]

    pool = np.repeat(np.arange(len(fqns)), slots)
    queue = deque(int(f) for f in pool[rng.permutation(len(pool))])
    lo, hi = cfg.pairs_per_snippet
    packages = [f"org.synth.p{k:03d}" for k in range(cfg.n_packages)]

    raw: list[list[int]] = []
    while queue and len(raw) < cfg.n_snippets:
        size = int(rng.integers(lo, hi + 1))
        chosen: list[int] = []
        skipped: list[int] = []
        while queue and len(chosen) < size:
            f = queue.popleft()
            (skipped if f in chosen else chosen).append(f)
        queue.extendleft(reversed(skipped))
        raw.append(chosen)

    # usage totals are split as evenly as possible over the pairs actually placed
    placed = np.bincount([f for members in raw for f in members], minlength=len(fqns))
    counts: dict[int, list[int]] = {}
    for f, m in enumerate(placed.tolist()):
        if m:
            total = max(usage[f], m)
            counts[f] = [total // m + (1 if k < total % m else 0) for k in range(m)]

    corpus = Corpus()
    for idx, members in enumerate(raw):
        sid = f"syn{idx:05d}"
        pairs: list[NamePair] = []
        names: set[str] = set()
        lines: list[str] = []
        for f in members:
            count = counts[f].pop()
            cls = class_of[f]
            verb = _VERBS[int(rng.integers(len(_VERBS)))]
            receiver = cls[0].lower() + cls[1:] + str(int(rng.integers(0, 3)))
            if rng.random() < 0.35 and receiver not in names:
                name, kind = receiver, NameKind.RECEIVER
                lines.append(f"{name}.{verb}{_word(rng, 1, 2).capitalize()}({_word(rng, 1, 1)}, {int(rng.integers(100))});")
            elif cls not in names:
                name, kind = cls, NameKind.DECL_TYPE
                lines.append(f"{cls} {_word(rng, 1, 2)} = {_word(rng, 1, 2)}.{verb}({int(rng.integers(100))});")
            else:
                continue
            names.add(name)
            pairs.append(NamePair(sid, name, fqns[f], kind, count))
        extra = int(rng.integers(0, 6))
        if cfg.long_rate and rng.random() < cfg.long_rate:
            extra += 30
        for _ in range(extra):
            lines.append(f"int {_word(rng, 1, 2)} = {_word(rng, 1, 2)}({int(rng.integers(1000))});")
        order = rng.permutation(len(lines))
        source = "\n".join(lines[int(i)] for i in order) + "\n"
        package = packages[int(rng.integers(len(packages)))]
        corpus.add(CodeSnippet(sid, cfg.library, package, source, count_loc(source)), pairs)

    if cfg.clone_rate:
        _inject_clones(corpus, cfg, rng, packages)
    return corpus


def _inject_clones(corpus: Corpus, cfg: SynthConfig, rng: np.random.Generator, packages: list[str]) -> None:
    originals = list(corpus)
    n_clones = min(len(originals), round(cfg.clone_rate * len(originals)))
    for k, i in enumerate(rng.choice(len(originals), size=n_clones, replace=False)):
        src = originals[int(i)]
        lines = src.source_text.splitlines()
        j = int(rng.integers(len(lines)))
        lines[j] = re.sub(r"\d+", lambda m: str(int(m.group()) + 1), lines[j], count=1)
        text = "\n".join(lines) + "\n"
        cid = f"{src.id}c{k}"
        package = packages[int(rng.integers(len(packages)))]
        pairs = [NamePair(cid, p.simple_name, p.fqn, p.kind, p.occurrence_count) for p in corpus.pairs[src.id]]
        corpus.add(CodeSnippet(cid, cfg.library, package, text, count_loc(text)), pairs)
