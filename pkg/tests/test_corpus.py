from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from fqnprobe.corpus import (
    CARDINALITY_BUCKETS,
    LENGTH_BUCKETS,
    USAGE_BUCKETS,
    CodeSnippet,
    Corpus,
    CorpusError,
    FqnStats,
    NameKind,
    NamePair,
    bucketize,
    compute_stats,
    count_loc,
    dump_corpus,
    load_corpus,
    split_form,
)
from fqnprobe.normalizer import normalize_fqn


def _record(sid="m1", pairs=None, code="File f = new File(p);\nf.delete();\n"):
    pairs = pairs if pairs is not None else [
        {"name": "File", "fqn": "java.io.File", "kind": "decl", "count": 1},
        {"name": "File()", "fqn": "java.io.File()", "kind": "inst", "count": 1},
        {"name": "f", "fqn": "java.io.File", "kind": "recv", "count": 1},
        {"name": "delete()", "fqn": "java.io.File.delete()", "kind": "member", "count": 1},
    ]
    return {"id": sid, "library": "jdk", "package": "p", "loc": count_loc(code), "code": code, "pairs": pairs}


def _write(tmp_path, records):
    path = tmp_path / "c.jsonl"
    path.write_text("".join(json.dumps(r) + "\n" for r in records))
    return path


def _snippet(sid, code="x();\n"):
    return CodeSnippet(sid, "jdk", "p", code, count_loc(code))


class TestLoad:
    def test_one_snippet_four_pairs(self, tmp_path):
        corpus = load_corpus(_write(tmp_path, [_record()]))
        assert len(corpus) == 1
        assert corpus.n_pairs == 4

    def test_duplicate_id(self, tmp_path):
        with pytest.raises(CorpusError, match="duplicate snippet id: m1"):
            load_corpus(_write(tmp_path, [_record(), _record()]))

    def test_shadowed_name_names_snippet(self, tmp_path):
        pairs = [
            {"name": "Date", "fqn": "java.util.Date", "kind": "decl", "count": 1},
            {"name": "Date", "fqn": "java.sql.Date", "kind": "decl", "count": 1},
        ]
        with pytest.raises(CorpusError, match="shadowed.*m9"):
            load_corpus(_write(tmp_path, [_record("m9", pairs)]))

    def test_malformed_line_number(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(json.dumps(_record()) + "\n{not json\n")
        with pytest.raises(CorpusError, match="line 2"):
            load_corpus(path)

    def test_missing_field_line_number(self, tmp_path):
        bad = _record("m2")
        del bad["code"]
        with pytest.raises(CorpusError, match="line 2"):
            load_corpus(_write(tmp_path, [_record(), bad]))

    def test_loc_must_match(self, tmp_path):
        bad = _record()
        bad["loc"] = 7
        with pytest.raises(CorpusError, match="line 1"):
            load_corpus(_write(tmp_path, [bad]))

    def test_unnormalized_gold_rejected(self, tmp_path):
        pairs = [{"name": "List<>", "fqn": "java.util.List<String>", "kind": "inst", "count": 1}]
        with pytest.raises(CorpusError, match="normalized"):
            load_corpus(_write(tmp_path, [_record(pairs=pairs)]))

    def test_round_trip(self, tmp_path, desk_corpus):
        path = tmp_path / "again.jsonl"
        dump_corpus(desk_corpus, path)
        again = load_corpus(path)
        assert again == desk_corpus
        assert compute_stats(again) == compute_stats(desk_corpus)

    def test_desk_corpus_shape(self, desk_corpus):
        assert len(desk_corpus) >= 20
        assert desk_corpus.n_pairs >= 100
        assert len(compute_stats(desk_corpus)) <= desk_corpus.n_pairs
        kinds = {p.kind for p in desk_corpus.all_pairs()}
        assert kinds == set(NameKind)
        assert all(normalize_fqn(p.fqn) == p.fqn for p in desk_corpus.all_pairs())


class TestTypes:
    @pytest.mark.parametrize("name", ["List<>", "List[]", "List()", "List"])
    def test_valid_forms(self, name):
        NamePair("s", name, "java.util.List", NameKind.DECL_TYPE, 1)

    @pytest.mark.parametrize("name", ["List <>", "List<>[]", "", "<>"])
    def test_invalid_names(self, name):
        with pytest.raises(CorpusError):
            NamePair("s", name, "java.util.List", NameKind.DECL_TYPE, 1)

    @pytest.mark.parametrize("fqn", ["File", "java io.File", ""])
    def test_invalid_fqns(self, fqn):
        with pytest.raises(CorpusError):
            NamePair("s", "File", fqn, NameKind.DECL_TYPE, 1)

    def test_count_positive(self):
        with pytest.raises(CorpusError):
            NamePair("s", "File", "java.io.File", NameKind.DECL_TYPE, 0)

    def test_empty_source_rejected(self):
        with pytest.raises(CorpusError):
            CodeSnippet("s", "jdk", "p", "", 0)

    @given(st.sampled_from(["", "<>", "[]", "()"]), st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,10}", fullmatch=True))
    def test_form_round_trip(self, suffix, base):
        name = base + suffix
        got_base, got_suffix = split_form(name)
        assert got_base + got_suffix == name
        assert got_base == base and got_suffix == suffix


class TestStats:
    def test_length_tokens(self):
        corpus = Corpus.from_records([(_snippet("a"), [NamePair("a", "File", "java.io.File", NameKind.DECL_TYPE, 1)])])
        assert compute_stats(corpus)["java.io.File"].length_tokens == 3

    def test_date_polysemy(self):
        fqns = ["java.util.Date", "java.sql.Date", "sun.util.calendar.Gregorian.Date"]
        corpus = Corpus.from_records(
            (_snippet(f"s{i}"), [NamePair(f"s{i}", "Date", fqn, NameKind.DECL_TYPE, 1)]) for i, fqn in enumerate(fqns)
        )
        stats = compute_stats(corpus)
        assert [stats[f].sn_fqn for f in fqns] == [3, 3, 3]

    def test_reader_synonymy(self):
        fqn = "java.io.BufferedReader"
        corpus = Corpus.from_records(
            (_snippet(f"s{i}"), [NamePair(f"s{i}", name, fqn, NameKind.RECEIVER, 1)])
            for i, name in enumerate(["reader", "br", "buffRead"])
        )
        assert compute_stats(corpus)[fqn].fqn_sn == 3

    def test_usage_counts_occurrences(self):
        corpus = Corpus.from_records([
            (_snippet("a"), [NamePair("a", "File", "java.io.File", NameKind.DECL_TYPE, 2)]),
            (_snippet("b"), [NamePair("b", "File", "java.io.File", NameKind.DECL_TYPE, 3)]),
        ])
        assert compute_stats(corpus)["java.io.File"].usage_count == 5

    def test_empty_corpus(self):
        assert compute_stats(Corpus()) == {}

    def test_buckets(self):
        b = bucketize(FqnStats("a.b.c", 3, 10_000, 5, 1))
        assert (b.length_bucket, b.usage_bucket, b.sn_fqn_bucket, b.fqn_sn_bucket) == ("2-4", ">=10k", "1:>=4", "1:1")

    @pytest.mark.parametrize(
        "usage,bucket", [(1, "[1,10)"), (9, "[1,10)"), (10, "[10,1k)"), (999, "[10,1k)"), (1000, "[1k,10k)"), (10_000, ">=10k")]
    )
    def test_usage_boundaries(self, usage, bucket):
        assert bucketize(FqnStats("a.b", 2, usage, 1, 1)).usage_bucket == bucket

    @given(st.integers(2, 40), st.integers(1, 10**6), st.integers(1, 9), st.integers(1, 9))
    def test_partition(self, length, usage, sn, fs):
        b = bucketize(FqnStats("a.b", length, usage, sn, fs))
        assert b.length_bucket in LENGTH_BUCKETS
        assert b.usage_bucket in USAGE_BUCKETS
        assert b.sn_fqn_bucket in CARDINALITY_BUCKETS and b.fqn_sn_bucket in CARDINALITY_BUCKETS

    def test_partition_sums_on_desk(self, desk_corpus):
        stats = compute_stats(desk_corpus)
        by_length: dict[str, int] = {}
        by_usage: dict[str, int] = {}
        for s in stats.values():
            b = bucketize(s)
            by_length[b.length_bucket] = by_length.get(b.length_bucket, 0) + 1
            by_usage[b.usage_bucket] = by_usage.get(b.usage_bucket, 0) + 1
        assert sum(by_length.values()) == sum(by_usage.values()) == len(stats)
