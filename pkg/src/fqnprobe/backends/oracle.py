"""Deterministic lookup backend: answers every query with its gold FQN."""

from __future__ import annotations

import time
from collections import defaultdict
from typing import Iterable

from ..composer import ManifestRecord
from ..corpus import Corpus
from .base import CompletionRequest, CompletionResult, parse_query, render_answer


class OracleBackend:
    """Looks the queried simple name up in a gold table.

    Lookups are scoped by ``request.snippet_id``; without one, a name resolves
    only if it maps to a single FQN across the whole table.
    """

    def __init__(self, table: dict[tuple[str, str], str]):
        self.table = dict(table)
        by_name: dict[str, set[str]] = defaultdict(set)
        for (_, name), fqn in self.table.items():
            by_name[name].add(fqn)
        self._unscoped = {name: next(iter(f)) for name, f in by_name.items() if len(f) == 1}

    @classmethod
    def from_corpus(cls, corpus: Corpus) -> "OracleBackend":
        return cls({(p.snippet_id, p.simple_name): p.fqn for p in corpus.all_pairs()})

    @classmethod
    def from_manifest(cls, records: Iterable[ManifestRecord]) -> "OracleBackend":
        return cls({(r.snippet_id, r.target): r.gold_fqn for r in records})

    def gold(self, request: CompletionRequest) -> tuple[str, bool] | None:
        parsed = parse_query(request.text)
        if parsed is None:
            return None
        name, quoted = parsed
        if request.snippet_id is not None:
            fqn = self.table.get((request.snippet_id, name))
        else:
            fqn = self._unscoped.get(name)
        return None if fqn is None else (fqn, quoted)

    def oracle_lookup(self, request: CompletionRequest) -> str | None:
        found = self.gold(request)
        return None if found is None else render_answer(*found)

    def complete(self, request: CompletionRequest) -> CompletionResult:
        start = time.perf_counter()
        text = self.oracle_lookup(request)
        return CompletionResult(text, int((time.perf_counter() - start) * 1000))
