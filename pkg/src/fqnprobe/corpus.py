"""Dataset model for partial-code snippets and their simple-name/FQN bindings.

A corpus file is UTF-8 JSON Lines, one snippet per line::

    {"id": "m1", "library": "jdk", "package": "java.io", "loc": 4,
     "code": "...", "pairs": [{"name": "File", "fqn": "java.io.File",
                               "kind": "decl", "count": 1}, ...]}
"""

from __future__ import annotations

import json
import re
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping

FORM_SUFFIXES = ("<>", "[]", "()")

_WHITESPACE = re.compile(r"\s")


class CorpusError(ValueError):
    """Raised when a corpus file or record violates the dataset invariants."""


class NameKind(Enum):
    """Syntactic role of a cannot-be-resolved simple name."""

    DECL_TYPE = "decl"
    INST_TYPE = "inst"
    RECEIVER = "recv"
    MEMBER = "member"


def split_form(simple_name: str) -> tuple[str, str]:
    """Split a form-tagged name into ``(base, suffix)``; suffix may be ``""``."""
    for suffix in FORM_SUFFIXES:
        if simple_name.endswith(suffix) and len(simple_name) > len(suffix):
            return simple_name[: -len(suffix)], suffix
    return simple_name, ""


def base_name(simple_name: str) -> str:
    return split_form(simple_name)[0]


def count_loc(source_text: str) -> int:
    """Number of non-blank lines."""
    return sum(1 for line in source_text.splitlines() if line.strip())


@dataclass(frozen=True)
class CodeSnippet:
    id: str
    library: str
    package_path: str
    source_text: str
    loc: int

    def __post_init__(self) -> None:
        if not self.source_text:
            raise CorpusError(f"snippet {self.id}: empty source text")
        if self.loc != count_loc(self.source_text):
            raise CorpusError(
                f"snippet {self.id}: loc {self.loc} != {count_loc(self.source_text)} non-blank lines"
            )


@dataclass(frozen=True)
class NamePair:
    snippet_id: str
    simple_name: str
    fqn: str
    kind: NameKind
    occurrence_count: int = 1

    def __post_init__(self) -> None:
        where = f"snippet {self.snippet_id}"
        if not self.simple_name or _WHITESPACE.search(self.simple_name):
            raise CorpusError(f"{where}: bad simple name {self.simple_name!r}")
        base, _ = split_form(self.simple_name)
        if any(ch in base for ch in "<>[]()"):
            raise CorpusError(f"{where}: bad form suffix in {self.simple_name!r}")
        if _WHITESPACE.search(self.fqn) or len(self.fqn.split(".")) < 2:
            raise CorpusError(f"{where}: bad fqn {self.fqn!r} for {self.simple_name}")
        if any(not token for token in self.fqn.split(".")):
            raise CorpusError(f"{where}: empty token in fqn {self.fqn!r}")
        if self.occurrence_count < 1:
            raise CorpusError(f"{where}: count must be positive for {self.simple_name}")

    @property
    def base(self) -> str:
        return base_name(self.simple_name)


@dataclass(frozen=True)
class FqnStats:
    fqn: str
    length_tokens: int
    usage_count: int
    sn_fqn: int
    fqn_sn: int


@dataclass(frozen=True)
class PropertyBuckets:
    length_bucket: str
    usage_bucket: str
    sn_fqn_bucket: str
    fqn_sn_bucket: str


LENGTH_BUCKETS = ("2-4", "5-7", "8-10", ">=11")
USAGE_BUCKETS = ("[1,10)", "[10,1k)", "[1k,10k)", ">=10k")
CARDINALITY_BUCKETS = ("1:1", "1:2", "1:3", "1:>=4")


def length_bucket(length_tokens: int) -> str:
    if length_tokens <= 4:
        return "2-4"
    if length_tokens <= 7:
        return "5-7"
    if length_tokens <= 10:
        return "8-10"
    return ">=11"


def usage_bucket(usage_count: int) -> str:
    if usage_count < 10:
        return "[1,10)"
    if usage_count < 1_000:
        return "[10,1k)"
    if usage_count < 10_000:
        return "[1k,10k)"
    return ">=10k"


def cardinality_bucket(n: int) -> str:
    return CARDINALITY_BUCKETS[min(max(n, 1), 4) - 1]


def bucketize(stats: FqnStats) -> PropertyBuckets:
    return PropertyBuckets(
        length_bucket=length_bucket(stats.length_tokens),
        usage_bucket=usage_bucket(stats.usage_count),
        sn_fqn_bucket=cardinality_bucket(stats.sn_fqn),
        fqn_sn_bucket=cardinality_bucket(stats.fqn_sn),
    )


@dataclass
class Corpus:
    """Snippets plus their name pairs, indexed by snippet id."""

    snippets: dict[str, CodeSnippet] = field(default_factory=dict)
    pairs: dict[str, list[NamePair]] = field(default_factory=dict)

    @classmethod
    def from_records(cls, items: Iterable[tuple[CodeSnippet, list[NamePair]]]) -> "Corpus":
        corpus = cls()
        for snippet, pairs in items:
            corpus.add(snippet, pairs)
        return corpus

    def add(self, snippet: CodeSnippet, pairs: Iterable[NamePair]) -> None:
        if snippet.id in self.snippets:
            raise CorpusError(f"duplicate snippet id: {snippet.id}")
        pairs = list(pairs)
        seen: set[str] = set()
        for pair in pairs:
            if pair.snippet_id != snippet.id:
                raise CorpusError(f"pair {pair.simple_name} filed under {snippet.id} but tagged {pair.snippet_id}")
            if pair.simple_name in seen:
                raise CorpusError(f"shadowed simple name {pair.simple_name!r} in snippet {snippet.id}")
            seen.add(pair.simple_name)
        self.snippets[snippet.id] = snippet
        self.pairs[snippet.id] = pairs

    def __len__(self) -> int:
        return len(self.snippets)

    def __iter__(self) -> Iterator[CodeSnippet]:
        return iter(self.snippets.values())

    def all_pairs(self) -> Iterator[NamePair]:
        for pairs in self.pairs.values():
            yield from pairs

    @property
    def n_pairs(self) -> int:
        return sum(len(p) for p in self.pairs.values())

    def subset(self, snippet_ids: Iterable[str]) -> "Corpus":
        return Corpus.from_records((self.snippets[i], self.pairs[i]) for i in snippet_ids)

    def libraries(self) -> dict[str, str]:
        return {s.id: s.library for s in self}


def _parse_record(obj: Mapping, lineno: int) -> tuple[CodeSnippet, list[NamePair]]:
    from .normalizer import normalize_fqn  # gold FQNs must already be in normal form

    try:
        sid = str(obj["id"])
        snippet = CodeSnippet(
            id=sid,
            library=str(obj.get("library", "")),
            package_path=str(obj.get("package", "")),
            source_text=obj["code"],
            loc=int(obj["loc"]),
        )
        pairs = []
        for p in obj.get("pairs", []):
            pair = NamePair(
                snippet_id=sid,
                simple_name=p["name"],
                fqn=p["fqn"],
                kind=NameKind(p["kind"]),
                occurrence_count=int(p.get("count", 1)),
            )
            if normalize_fqn(pair.fqn) != pair.fqn:
                raise CorpusError(f"snippet {sid}: fqn {pair.fqn!r} is not in normalized form")
            pairs.append(pair)
    except CorpusError as exc:
        raise CorpusError(f"line {lineno}: {exc}") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise CorpusError(f"line {lineno}: malformed record ({exc!r})") from None
    return snippet, pairs


def load_corpus(path: str | Path) -> Corpus:
    """Load and validate a JSON Lines corpus file."""
    corpus = Corpus()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {lineno}: malformed JSON ({exc.msg})") from None
            if not isinstance(obj, dict):
                raise CorpusError(f"line {lineno}: record is not a JSON object")
            snippet, pairs = _parse_record(obj, lineno)
            corpus.add(snippet, pairs)
    return corpus


def snippet_record(snippet: CodeSnippet, pairs: Iterable[NamePair]) -> dict:
    return {
        "id": snippet.id,
        "library": snippet.library,
        "package": snippet.package_path,
        "loc": snippet.loc,
        "code": snippet.source_text,
        "pairs": [
            {"name": p.simple_name, "fqn": p.fqn, "kind": p.kind.value, "count": p.occurrence_count}
            for p in pairs
        ],
    }


def dump_corpus(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for snippet in corpus:
            fh.write(json.dumps(snippet_record(snippet, corpus.pairs[snippet.id]), ensure_ascii=False))
            fh.write("\n")


def name_cardinality(corpus: Corpus) -> dict[str, int]:
    """Distinct FQNs per base simple name (form suffix stripped)."""
    groups: dict[str, set[str]] = defaultdict(set)
    for pair in corpus.all_pairs():
        groups[pair.base].add(pair.fqn)
    return {name: len(fqns) for name, fqns in groups.items()}


def compute_stats(corpus: Corpus) -> dict[str, FqnStats]:
    """Corpus-wide statistics, one entry per distinct FQN.

    ``sn_fqn`` is the largest polysemy among the base names bound to the FQN;
    ``fqn_sn`` counts distinct receiver names bound to it (at least 1, the
    type's own name).
    """
    usage: dict[str, int] = defaultdict(int)
    bases: dict[str, set[str]] = defaultdict(set)
    receivers: dict[str, set[str]] = defaultdict(set)
    for pair in corpus.all_pairs():
        usage[pair.fqn] += pair.occurrence_count
        bases[pair.fqn].add(pair.base)
        if pair.kind is NameKind.RECEIVER:
            receivers[pair.fqn].add(pair.simple_name)
    polysemy = name_cardinality(corpus)
    return {
        fqn: FqnStats(
            fqn=fqn,
            length_tokens=len(fqn.split(".")),
            usage_count=count,
            sn_fqn=max(polysemy[b] for b in bases[fqn]),
            fqn_sn=max(1, len(receivers[fqn])),
        )
        for fqn, count in sorted(usage.items())
    }
