"""Running composed task inputs through a backend and scoring the answers."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable

from .backends.base import Backend, CompletionRequest
from .composer import Manifest, ManifestRecord, TaskInput, relative_task_path
from .evaluator import PredictionRecord
from .normalizer import extract_prediction, is_correct, normalize_fqn


@dataclass(frozen=True)
class PredictionLine:
    """One line of a predictions file: the manifest coordinates plus the scored answer."""

    file: str
    snippet_id: str
    target: str
    gold_fqn: str
    shot: str
    config_id: str
    seed: int
    raw: str
    normalized: str
    correct: bool

    def to_record(self) -> PredictionRecord:
        return PredictionRecord(
            snippet_id=self.snippet_id,
            simple_name=self.target,
            gold_fqn=self.gold_fqn,
            predicted_fqn=self.normalized,
            correct=self.correct,
            shot=self.shot,
            config_id=self.config_id,
            seed=self.seed,
        )


def score(backend: Backend, request: CompletionRequest, gold_fqn: str) -> tuple[str, str, bool]:
    raw = extract_prediction(backend.complete(request))
    normalized = normalize_fqn(raw)
    return raw, normalized, is_correct(normalized, gold_fqn)


def run_manifest(
    manifest: Manifest, task_root: str | Path, backend: Backend, concurrency: int = 1
) -> list[PredictionLine]:
    """Complete every task file listed in the manifest; output order follows the manifest."""
    root = Path(task_root)

    def one(rec: ManifestRecord) -> PredictionLine:
        text = (root / rec.file).read_text(encoding="utf-8")
        request = CompletionRequest(text, snippet_id=rec.snippet_id, file_name=rec.file, shot=rec.shot)
        raw, normalized, ok = score(backend, request, rec.gold_fqn)
        return PredictionLine(**asdict(rec), raw=raw, normalized=normalized, correct=ok)

    if concurrency <= 1:
        return [one(rec) for rec in manifest.records]
    with ThreadPoolExecutor(max_workers=concurrency) as pool:
        return list(pool.map(one, manifest.records))


def run_tasks(tasks: Iterable[TaskInput], backend: Backend) -> list[PredictionRecord]:
    """In-memory variant of compose → run → score, without touching the filesystem."""
    records = []
    for task in tasks:
        rel = relative_task_path(task.config, task.shot, task.file_name)
        request = CompletionRequest(task.rendered_text, snippet_id=task.snippet_id, file_name=rel, shot=str(task.shot))
        _, normalized, ok = score(backend, request, task.target.fqn)
        records.append(PredictionRecord(
            snippet_id=task.snippet_id,
            simple_name=task.target.simple_name,
            gold_fqn=task.target.fqn,
            predicted_fqn=normalized,
            correct=ok,
            shot=str(task.shot),
            config_id=task.config.config_id,
            seed=task.config.seed,
        ))
    return records


def write_predictions(lines: Iterable[PredictionLine], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(json.dumps(asdict(line), ensure_ascii=False) + "\n")


def read_predictions(path: str | Path) -> list[PredictionLine]:
    with open(path, encoding="utf-8") as fh:
        return [PredictionLine(**json.loads(line)) for line in fh if line.strip()]


def to_records(predictions: Iterable[PredictionLine]) -> list[PredictionRecord]:
    return [p.to_record() for p in predictions]
