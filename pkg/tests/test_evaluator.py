from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from fqnprobe.corpus import FqnStats
from fqnprobe.evaluator import (
    ABSENT,
    DIMENSIONS,
    EvaluationError,
    PredictionRecord,
    StratifiedReport,
    accuracy_variants,
    emit_report,
    evaluate,
    format_delta,
    format_pct,
    markdown_deltas,
    read_csv,
    render_markdown,
)
from fqnprobe.normalizer import FAILURE_MARKER, is_correct

STATS = {
    "java.io.File": FqnStats("java.io.File", 3, 20_000, 1, 1),
    "com.a.b.c.d.Widget": FqnStats("com.a.b.c.d.Widget", 6, 40, 2, 3),
    "x.y": FqnStats("x.y", 2, 3, 5, 1),
}
GOLDS = list(STATS)


def rec(gold, pred, shot="zero", config="cfg", sid="s", name="N"):
    return PredictionRecord(sid, name, gold, pred, is_correct(pred, gold), shot, config)


def records_strategy():
    one = st.tuples(
        st.sampled_from(GOLDS),
        st.booleans(),
        st.sampled_from(["zero", "one", "few-loo"]),
        st.sampled_from(["c1", "c2"]),
        st.sampled_from(["s1", "s2", "s3"]),
    ).map(lambda t: rec(t[0], t[0] if t[1] else FAILURE_MARKER, t[2], t[3], t[4], f"n{GOLDS.index(t[0])}"))
    return st.lists(one, min_size=1, max_size=60)


class TestRecord:
    def test_flag_must_match(self):
        with pytest.raises(EvaluationError):
            PredictionRecord("s", "N", "java.io.File", "java.io.File", False, "zero", "c")


class TestEvaluate:
    def test_seven_of_ten(self):
        records = [rec("java.io.File", "java.io.File" if i < 7 else "java.io.Fil", name=f"n{i}") for i in range(10)]
        report = evaluate(records, STATS)
        assert report.accuracy("cfg", "zero") == pytest.approx(0.7)
        assert format_pct(report.accuracy("cfg", "zero")) == "70.00%"

    def test_unknown_gold(self):
        with pytest.raises(EvaluationError, match="s/N"):
            evaluate([rec("not.known", "not.known")], STATS)

    def test_empty_cells_absent(self):
        report = evaluate([rec("java.io.File", "java.io.File")], STATS)
        assert report.accuracy("cfg", "zero", "length", ">=11") is None
        assert report.accuracy("cfg", "one") is None

    def test_buckets(self):
        report = evaluate([rec("com.a.b.c.d.Widget", "x")], STATS)
        assert report.cell("cfg", "zero", "length", "5-7").total == 1
        assert report.cell("cfg", "zero", "usage", "[10,1k)").total == 1
        assert report.cell("cfg", "zero", "sn_fqn", "1:2").total == 1
        assert report.cell("cfg", "zero", "fqn_sn", "1:3").total == 1

    def test_sn_fqn_by_base_name(self):
        report = evaluate([rec("java.io.File", "x", name="File()")], STATS, name_cardinality={"File": 3})
        assert report.cell("cfg", "zero", "sn_fqn", "1:3").total == 1

    def test_library_dimension(self):
        report = evaluate([rec("x.y", "x.y", sid="a"), rec("x.y", "q", sid="b")], STATS, libraries={"a": "jdk", "b": "gwt"})
        assert report.accuracy("cfg", "zero", "library", "jdk") == 1.0
        assert report.accuracy("cfg", "zero", "library", "gwt") == 0.0

    @settings(max_examples=200, deadline=None)
    @given(records_strategy())
    def test_partition_sums(self, records):
        report = evaluate(records, STATS)
        for cid in report.config_ids:
            for shot in report.shots:
                overall = report.cell(cid, shot)
                if overall is None:
                    continue
                for dim in DIMENSIONS[1:5]:
                    cells = [report.cell(cid, shot, dim, b) for b in report.buckets(dim)]
                    cells = [c for c in cells if c is not None]
                    assert sum(c.total for c in cells) == overall.total
                    assert sum(c.correct for c in cells) == overall.correct
        for cell in report.cells.values():
            assert 0.0 <= cell.accuracy <= 1.0

    def test_deterministic_order_independent(self):
        records = [rec(g, g if i % 2 else "q", name=f"n{i}") for i, g in enumerate(GOLDS * 4)]
        shuffled = records[:]
        random.Random(3).shuffle(shuffled)
        assert evaluate(records, STATS).cells == evaluate(shuffled, STATS).cells


class TestVariants:
    def test_a_a_b(self):
        records = [rec("java.io.File", p, name="F") for p in ["java.io.File", "java.io.File", "a.B"]]
        v = accuracy_variants(records)
        assert v["majority_win"] == 1.0 and v["any_correct"] == 1.0
        assert v["individuals"] == pytest.approx(2 / 3)

    def test_identical_instances(self):
        records = [rec("java.io.File", "java.io.File", name="F")] * 3 + [rec("x.y", "q", name="G")] * 3
        v = accuracy_variants(records)
        assert v["individuals"] == v["majority_win"] == v["any_correct"] == 0.5

    def test_empty(self):
        with pytest.raises(ValueError):
            accuracy_variants([])

    def test_tie_break_seeded(self):
        records = [rec("java.io.File", "java.io.File", name=f"n{i}") for i in range(20)]
        records += [rec("java.io.File", "a.B", name=f"n{i}") for i in range(20)]
        picks = {accuracy_variants(records, seed=s)["majority_win"] for s in range(5)}
        assert all(accuracy_variants(records, seed=s) == accuracy_variants(records, seed=s) for s in range(5))
        assert len(picks) > 1

    @settings(max_examples=300, deadline=None)
    @given(records_strategy(), st.integers(0, 100))
    def test_any_at_least_majority(self, records, seed):
        v = accuracy_variants(records, seed)
        assert v["any_correct"] >= v["majority_win"]

    def test_individuals_order_invariant(self):
        records = [rec(g, g if i % 3 else "q", name=f"n{i % 4}") for i, g in enumerate(GOLDS * 5)]
        rev = list(reversed(records))
        assert accuracy_variants(records)["individuals"] == accuracy_variants(rev)["individuals"]


class TestEmit:
    def _report(self):
        records = [rec("java.io.File", "java.io.File", "one", "basic", name=f"n{i}") for i in range(3)]
        records += [rec("java.io.File", "q", "one", "basic", name="m")]
        records += [rec("java.io.File", "java.io.File", "one", "best", name=f"n{i}") for i in range(4)]
        return evaluate(records, STATS)

    def test_signed_delta(self):
        assert format_delta(0.5454, 0.5) == "+4.54%"
        assert format_delta(0.4, 0.5) == "-10.00%"
        assert format_delta(None, 0.5) == ABSENT

    def test_absent_marker(self):
        assert format_pct(None) == "—"

    def test_delta_table(self):
        table = markdown_deltas(self._report(), "basic", {"basic": "Basic", "best": "Best"})
        assert "| Basic | 75.00% |" in table
        assert "| Best | +25.00% |" in table

    def test_csv_round_trip(self, tmp_path):
        report = self._report()
        emit_report(report, ["csv"], tmp_path)
        assert read_csv(tmp_path / "report.csv").cells == report.cells

    def test_both_formats(self, tmp_path):
        paths = emit_report(self._report(), ["csv", "md"], tmp_path, baseline="basic")
        assert sorted(p.name for p in paths) == ["report.csv", "report.md"]
        md = (tmp_path / "report.md").read_text()
        assert "## Configurations against the baseline" in md and "| FQN Length | 2-4 |" in md

    def test_markdown_absent_cells(self):
        report = StratifiedReport()
        report.add(("c", "zero", "all", "all"), True)
        report.add(("c", "one", "all", "all"), True)
        report.add(("c", "zero", "length", "2-4"), True)
        assert "| FQN Length | 2-4 | 100.00% | — |" in render_markdown(report)

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            emit_report(self._report(), ["xml"], tmp_path)
