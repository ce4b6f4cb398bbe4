"""Accuracy reports over scored predictions, stratified by FQN data properties."""

from __future__ import annotations

import csv
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .composer import ALL_SHOTS
from .corpus import (
    CARDINALITY_BUCKETS,
    LENGTH_BUCKETS,
    USAGE_BUCKETS,
    FqnStats,
    base_name,
    bucketize,
    cardinality_bucket,
)
from .normalizer import is_correct

DIMENSIONS = ("all", "length", "usage", "sn_fqn", "fqn_sn", "library")
DIMENSION_TITLES = {
    "all": "All",
    "length": "FQN Length",
    "usage": "FQN Usage Time",
    "sn_fqn": "SN:FQN",
    "fqn_sn": "FQN:SN",
    "library": "Library",
}
BUCKET_ORDER = {
    "all": ("all",),
    "length": LENGTH_BUCKETS,
    "usage": tuple(reversed(USAGE_BUCKETS)),
    "sn_fqn": CARDINALITY_BUCKETS,
    "fqn_sn": CARDINALITY_BUCKETS,
}
ABSENT = "—"
CSV_COLUMNS = ("config_id", "shot", "dimension", "bucket", "correct", "total", "accuracy")


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class PredictionRecord:
    snippet_id: str
    simple_name: str
    gold_fqn: str
    predicted_fqn: str
    correct: bool
    shot: str
    config_id: str
    seed: int = 0

    def __post_init__(self) -> None:
        if self.correct != is_correct(self.predicted_fqn, self.gold_fqn):
            raise EvaluationError(
                f"record {self.snippet_id}/{self.simple_name}: correct flag disagrees with exact match"
            )


@dataclass
class Cell:
    correct: int = 0
    total: int = 0

    @property
    def accuracy(self) -> float:
        return self.correct / self.total


CellKey = tuple[str, str, str, str]  # config_id, shot, dimension, bucket


@dataclass
class StratifiedReport:
    cells: dict[CellKey, Cell] = field(default_factory=dict)

    def add(self, key: CellKey, correct: bool) -> None:
        cell = self.cells.setdefault(key, Cell())
        cell.total += 1
        cell.correct += int(correct)

    def cell(self, config_id: str, shot: str, dimension: str = "all", bucket: str = "all") -> Cell | None:
        return self.cells.get((config_id, shot, dimension, bucket))

    def accuracy(self, config_id: str, shot: str, dimension: str = "all", bucket: str = "all") -> float | None:
        cell = self.cell(config_id, shot, dimension, bucket)
        return None if cell is None else cell.accuracy

    @property
    def config_ids(self) -> list[str]:
        return sorted({k[0] for k in self.cells})

    @property
    def shots(self) -> list[str]:
        present = {k[1] for k in self.cells}
        known = [str(s) for s in ALL_SHOTS if str(s) in present]
        return known + sorted(present - set(known))

    def buckets(self, dimension: str) -> list[str]:
        present = {k[3] for k in self.cells if k[2] == dimension}
        ordered = [b for b in BUCKET_ORDER.get(dimension, ()) if b in present]
        return ordered + sorted(present - set(ordered))

    def rows(self) -> list[dict]:
        dim_rank = {d: i for i, d in enumerate(DIMENSIONS)}
        shot_rank = {s: i for i, s in enumerate(self.shots)}
        out = []
        for (cid, shot, dim, bucket), cell in sorted(
            self.cells.items(), key=lambda kv: (kv[0][0], shot_rank[kv[0][1]], dim_rank.get(kv[0][2], 99), kv[0][3])
        ):
            out.append({
                "config_id": cid,
                "shot": shot,
                "dimension": dim,
                "bucket": bucket,
                "correct": cell.correct,
                "total": cell.total,
                "accuracy": f"{100 * cell.accuracy:.2f}",
            })
        return out


def evaluate(
    records: Iterable[PredictionRecord],
    stats: Mapping[str, FqnStats],
    *,
    name_cardinality: Mapping[str, int] | None = None,
    libraries: Mapping[str, str] | None = None,
) -> StratifiedReport:
    """Aggregate records into per-cell counts.

    SN:FQN is stratified by the target's base simple name when
    ``name_cardinality`` is given, FQN:SN always by the gold FQN.
    """
    report = StratifiedReport()
    for rec in records:
        st = stats.get(rec.gold_fqn)
        if st is None:
            raise EvaluationError(f"unknown gold FQN {rec.gold_fqn!r} for {rec.snippet_id}/{rec.simple_name}")
        buckets = bucketize(st)
        sn_bucket = buckets.sn_fqn_bucket
        if name_cardinality is not None:
            sn_bucket = cardinality_bucket(name_cardinality.get(base_name(rec.simple_name), 1))
        prefix = (rec.config_id, rec.shot)
        report.add((*prefix, "all", "all"), rec.correct)
        report.add((*prefix, "length", buckets.length_bucket), rec.correct)
        report.add((*prefix, "usage", buckets.usage_bucket), rec.correct)
        report.add((*prefix, "sn_fqn", sn_bucket), rec.correct)
        report.add((*prefix, "fqn_sn", buckets.fqn_sn_bucket), rec.correct)
        if libraries is not None:
            report.add((*prefix, "library", libraries.get(rec.snippet_id, "") or "unknown"), rec.correct)
    return report


def accuracy_variants(records: Sequence[PredictionRecord], seed: int = 0) -> dict[str, float]:
    """Individual-instance, majority-win and any-correct accuracy.

    Records are instances; they are grouped by ``(snippet_id, simple_name)``.
    Ties for the modal prediction are broken by a seeded random pick.
    """
    if not records:
        raise ValueError("accuracy_variants needs at least one record")
    groups: dict[tuple[str, str], list[PredictionRecord]] = defaultdict(list)
    for rec in records:
        groups[(rec.snippet_id, rec.simple_name)].append(rec)
    rng = random.Random(seed)
    majority = 0
    any_ok = 0
    for key in sorted(groups):
        group = groups[key]
        votes = Counter(r.predicted_fqn for r in group)
        top = max(votes.values())
        tied = sorted(p for p, c in votes.items() if c == top)
        pick = tied[0] if len(tied) == 1 else rng.choice(tied)
        majority += is_correct(pick, group[0].gold_fqn)
        any_ok += any(r.correct for r in group)
    return {
        "individuals": sum(r.correct for r in records) / len(records),
        "majority_win": majority / len(groups),
        "any_correct": any_ok / len(groups),
    }


def format_pct(value: float | None) -> str:
    return ABSENT if value is None else f"{100 * value:.2f}%"


def format_delta(value: float | None, baseline: float | None) -> str:
    if value is None or baseline is None:
        return ABSENT
    return f"{100 * (value - baseline):+.2f}%"


def markdown_stratified(report: StratifiedReport, config_id: str, label: str | None = None) -> str:
    shots = report.shots
    lines = [
        f"### {label or config_id}",
        "",
        "| Property | Range | " + " | ".join(shots) + " |",
        "|---|---|" + "---|" * len(shots),
    ]
    for dim in DIMENSIONS:
        for bucket in report.buckets(dim):
            cells = [format_pct(report.accuracy(config_id, s, dim, bucket)) for s in shots]
            lines.append(f"| {DIMENSION_TITLES[dim]} | {bucket} | " + " | ".join(cells) + " |")
    return "\n".join(lines)


def markdown_deltas(report: StratifiedReport, baseline: str, labels: Mapping[str, str] | None = None) -> str:
    labels = labels or {}
    shots = report.shots
    lines = [
        "| Configuration | " + " | ".join(shots) + " |",
        "|---|" + "---|" * len(shots),
        f"| {labels.get(baseline, baseline)} | "
        + " | ".join(format_pct(report.accuracy(baseline, s)) for s in shots) + " |",
    ]
    for cid in sorted(report.config_ids, key=lambda c: labels.get(c, c)):
        if cid == baseline:
            continue
        cells = [format_delta(report.accuracy(cid, s), report.accuracy(baseline, s)) for s in shots]
        lines.append(f"| {labels.get(cid, cid)} | " + " | ".join(cells) + " |")
    return "\n".join(lines)


def render_markdown(report: StratifiedReport, baseline: str | None = None, labels: Mapping[str, str] | None = None) -> str:
    labels = labels or {}
    parts = ["# FQN inference accuracy", ""]
    if baseline is not None and len(report.config_ids) > 1:
        parts += ["## Configurations against the baseline", "", markdown_deltas(report, baseline, labels), ""]
    parts += ["## Accuracy by FQN property", ""]
    ordered = sorted(report.config_ids, key=lambda c: (c != baseline, labels.get(c, c)))
    for cid in ordered:
        parts += [markdown_stratified(report, cid, labels.get(cid)), ""]
    return "\n".join(parts)


def write_csv(report: StratifiedReport, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(report.rows())


def read_csv(path: str | Path) -> StratifiedReport:
    report = StratifiedReport()
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            key = (row["config_id"], row["shot"], row["dimension"], row["bucket"])
            report.cells[key] = Cell(int(row["correct"]), int(row["total"]))
    return report


def emit_report(
    report: StratifiedReport,
    formats: Iterable[str],
    out_dir: str | Path,
    *,
    baseline: str | None = None,
    labels: Mapping[str, str] | None = None,
    stem: str = "report",
) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in formats:
        if fmt == "csv":
            path = out / f"{stem}.csv"
            write_csv(report, path)
        elif fmt == "md":
            path = out / f"{stem}.md"
            path.write_text(render_markdown(report, baseline, labels), encoding="utf-8")
        else:
            raise ValueError(f"unknown report format {fmt!r}")
        written.append(path)
    return written
