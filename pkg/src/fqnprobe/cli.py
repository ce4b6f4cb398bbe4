"""Command-line entry point: scan, sample, compose, run, eval and report.

Every subcommand reads its inputs from flags, from a JSON run configuration
(``--config``), or both; flags win. Paths inside the configuration file are
resolved against the directory that holds it.

Exit codes: 0 success, 1 evaluation-level failure (infeasible shots skipped
with warnings), 2 configuration or I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .backends import (
    AuthenticationError,
    BackendError,
    HttpBackend,
    HttpSettings,
    OracleBackend,
    RecallParams,
    StochasticBackend,
)
from .composer import (
    PRESETS,
    PromptConfig,
    ablation_configs,
    compose_batch,
    parse_shots,
    read_manifest,
)
from .corpus import CorpusError, compute_stats, dump_corpus, load_corpus, name_cardinality
from .evaluator import EvaluationError, emit_report, evaluate, read_csv
from .pipeline import read_predictions, run_manifest, to_records, write_predictions
from .sampler import SamplerConfig, sample_with_log
from .scanner import extract_simple_names

log = logging.getLogger("fqnprobe")

EXIT_OK = 0
EXIT_EVAL = 1
EXIT_CONFIG = 2


class ConfigError(Exception):
    """Bad configuration or unusable input/output path; maps to exit code 2."""


@dataclass
class RunConfig:
    corpus_path: Path | None = None
    out_dir: Path | None = None
    configs: list[Any] = field(default_factory=lambda: ["basic"])
    shots: list[str] = field(default_factory=lambda: ["all"])
    backend: dict = field(default_factory=lambda: {"kind": "oracle"})
    concurrency: int = 1
    seed: int = 0
    formats: list[str] = field(default_factory=lambda: ["md", "csv"])

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        unknown = set(data) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise ConfigError(f"unknown config keys in {path}: {sorted(unknown)}")
        base = path.parent
        cfg = cls(**data)
        for key in ("corpus_path", "out_dir"):
            value = getattr(cfg, key)
            if value is not None:
                setattr(cfg, key, base / value)
        if isinstance(cfg.shots, str):
            cfg.shots = [cfg.shots]
        if isinstance(cfg.formats, str):
            cfg.formats = cfg.formats.split(",")
        return cfg

    def prompt_configs(self) -> dict[str, PromptConfig]:
        """Resolve named presets and inline overrides; the run seed is applied to each."""
        out: dict[str, PromptConfig] = {}
        for entry in self.configs:
            if isinstance(entry, str):
                if entry == "ablation":
                    out.update(ablation_configs(self.seed))
                    continue
                if entry not in PRESETS:
                    raise ConfigError(f"unknown preset {entry!r}; expected one of {sorted(PRESETS)} or 'ablation'")
                out[entry] = dataclasses.replace(PRESETS[entry], seed=self.seed)
            elif isinstance(entry, dict):
                entry = dict(entry)
                preset = entry.pop("preset", "basic")
                name = entry.pop("name", None)
                if preset not in PRESETS:
                    raise ConfigError(f"unknown preset {preset!r}")
                try:
                    overrides = PromptConfig.from_dict(entry)
                except ValueError as exc:
                    raise ConfigError(str(exc)) from None
                changed = {k: getattr(overrides, k) for k in entry}
                config = dataclasses.replace(PRESETS[preset], **changed, seed=self.seed)
                out[name or config.config_id] = config
            else:
                raise ConfigError(f"prompt config entries must be names or objects, got {entry!r}")
        return out


def config_labels(seed: int) -> dict[str, str]:
    """config_id -> human name for the known presets and ablation variants."""
    return {cfg.config_id: name for name, cfg in ablation_configs(seed).items()}


def _require_file(path: Path | None, what: str) -> Path:
    if path is None:
        raise ConfigError(f"no {what} given")
    if not path.is_file():
        raise ConfigError(f"{what} not found: {path}")
    return path


def _guard_output(path: Path, force: bool) -> None:
    """Refuse to overwrite an existing file or non-empty directory unless forced."""
    if not path.exists() or force:
        return
    if path.is_dir() and not any(path.iterdir()):
        return
    raise ConfigError(f"output {path} exists; pass --force to overwrite")


def _load(path: Path | None):
    path = _require_file(path, "corpus file")
    try:
        return load_corpus(path)
    except CorpusError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _resolve(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    for key in ("corpus_path", "out_dir"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, Path(value))
    if getattr(args, "preset", None):
        cfg.configs = list(args.preset)
    if getattr(args, "shots", None):
        cfg.shots = [args.shots]
    if getattr(args, "format", None):
        cfg.formats = args.format.split(",")
    if getattr(args, "concurrency", None) is not None:
        cfg.concurrency = args.concurrency
    if getattr(args, "backend", None) and args.backend != cfg.backend.get("kind"):
        cfg.backend = {"kind": args.backend}
    if getattr(args, "base_url", None):
        cfg.backend = {**cfg.backend, "base_url": args.base_url}
    return cfg


def _write_jsonl(rows, out: Path | None) -> None:
    text = "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in rows)
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def cmd_scan(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    corpus = _load(cfg.corpus_path)
    out = Path(args.output) if args.output else None
    if out is not None:
        _guard_output(out, args.force)
    rows = []
    for snippet in corpus:
        hits = extract_simple_names(snippet.source_text)
        rows.append({
            "id": snippet.id,
            "hits": [
                {"name": h.simple_name, "kind": h.kind.value, "line": h.line, "count": h.occurrence_count}
                for h in hits
            ],
        })
    _write_jsonl(rows, out)
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    corpus = _load(cfg.corpus_path)
    out = Path(args.output)
    log_path = Path(args.log) if args.log else out.with_suffix(".log.jsonl")
    for path in (out, log_path):
        _guard_output(path, args.force)
    sconf = SamplerConfig(
        similarity_threshold=args.threshold, max_loc=args.max_loc, min_pairs=args.min_pairs, seed=cfg.seed
    )
    result = sample_with_log(corpus, sconf)
    dump_corpus(corpus.subset(result.ids), out)
    _write_jsonl((dataclasses.asdict(e) for e in result.log), log_path)
    log.info("sampled %d of %d snippets", len(result.snippets), len(corpus))
    return EXIT_OK


def cmd_compose(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    corpus = _load(cfg.corpus_path)
    if cfg.out_dir is None:
        raise ConfigError("no output directory given (--out or out_dir)")
    _guard_output(cfg.out_dir, args.force)
    try:
        shots = parse_shots(cfg.shots)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    configs = cfg.prompt_configs()
    manifest = compose_batch(corpus, configs.values(), shots, cfg.out_dir, compute_stats(corpus))
    log.info("composed %d task inputs under %s", len(manifest.records), cfg.out_dir)
    if manifest.warnings:
        log.warning("%d infeasible (snippet, target, shot) combinations skipped", len(manifest.warnings))
        return EXIT_EVAL
    return EXIT_OK


def build_backend(cfg: RunConfig, manifest_records):
    settings = dict(cfg.backend)
    kind = settings.pop("kind", "oracle")
    if kind == "oracle":
        if cfg.corpus_path is not None:
            return OracleBackend.from_corpus(_load(cfg.corpus_path))
        return OracleBackend.from_manifest(manifest_records)
    if kind == "stochastic":
        params = settings.get("params")
        try:
            recall = RecallParams.from_dict(params) if params else RecallParams.defaults()
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad stochastic params: {exc}") from None
        recall = dataclasses.replace(recall, seed=cfg.seed)
        return StochasticBackend(_load(cfg.corpus_path), recall)
    if kind == "http":
        if "base_url" not in settings:
            raise ConfigError("http backend needs base_url")
        settings.setdefault("concurrency", cfg.concurrency)
        return HttpBackend(HttpSettings.from_dict(settings))
    raise ConfigError(f"unknown backend {kind!r}; expected oracle, stochastic or http")


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    manifest_path = _require_file(Path(args.manifest), "manifest")
    out = Path(args.output) if args.output else manifest_path.parent / "predictions.jsonl"
    _guard_output(out, args.force)
    manifest = read_manifest(manifest_path)
    backend = build_backend(cfg, manifest.records)
    predictions = run_manifest(manifest, manifest_path.parent, backend, concurrency=cfg.concurrency)
    write_predictions(predictions, out)
    log.info("wrote %d predictions to %s", len(predictions), out)
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    predictions_path = _require_file(Path(args.predictions), "predictions file")
    corpus = _load(cfg.corpus_path)
    out_dir = cfg.out_dir or predictions_path.parent / "report"
    for fmt in cfg.formats:
        _guard_output(out_dir / f"report.{fmt}", args.force)
    records = to_records(read_predictions(predictions_path))
    report = evaluate(
        records, compute_stats(corpus), name_cardinality=name_cardinality(corpus), libraries=corpus.libraries()
    )
    labels = config_labels(cfg.seed)
    baseline = next((cid for cid, name in labels.items() if name == "basic"), None)
    if baseline not in report.config_ids:
        baseline = None
    for path in emit_report(report, cfg.formats, out_dir, baseline=baseline, labels=labels):
        log.info("wrote %s", path)
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    report = read_csv(_require_file(Path(args.csv), "report CSV"))
    out_dir = cfg.out_dir or Path(args.csv).parent
    formats = [f for f in cfg.formats if f != "csv"] or ["md"]
    for fmt in formats:
        _guard_output(out_dir / f"report.{fmt}", args.force)
    labels = config_labels(cfg.seed)
    baseline = next((cid for cid, name in labels.items() if name == "basic" and cid in report.config_ids), None)
    emit_report(report, formats, out_dir, baseline=baseline, labels=labels)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    def global_flags(suppress: bool) -> argparse.ArgumentParser:
        # the subcommand copy must not reset values given before the subcommand
        default = {"default": argparse.SUPPRESS} if suppress else {}
        flags = argparse.ArgumentParser(add_help=False)
        flags.add_argument("--config", help="JSON run configuration", **default)
        flags.add_argument("--seed", type=int, help="seed propagated to every module", **default)
        flags.add_argument("--force", action="store_true", help="overwrite existing outputs", **default)
        flags.add_argument("-v", "--verbose", action="store_true", **default)
        return flags

    common = global_flags(suppress=True)
    parser = argparse.ArgumentParser(
        prog="fqnprobe", description=__doc__.splitlines()[0], parents=[global_flags(suppress=False)]
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", parents=[common], help="extract simple names from every snippet")
    p.add_argument("corpus_path", nargs="?")
    p.add_argument("-o", "--output", help="hits JSONL (default: stdout)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("sample", parents=[common], help="diversity-sample a corpus")
    p.add_argument("corpus_path", nargs="?")
    p.add_argument("-o", "--output", required=True, help="reduced corpus JSONL")
    p.add_argument("--log", help="sampling log JSONL (default: <output>.log.jsonl)")
    p.add_argument("--threshold", type=float, default=SamplerConfig.similarity_threshold)
    p.add_argument("--max-loc", type=int, default=SamplerConfig.max_loc)
    p.add_argument("--min-pairs", type=int, default=SamplerConfig.min_pairs)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("compose", parents=[common], help="write task inputs and manifest")
    p.add_argument("corpus_path", nargs="?")
    p.add_argument("--out", dest="out_dir")
    p.add_argument("--preset", action="append", choices=[*PRESETS, "ablation"],
                   help="prompt configuration; repeatable")
    p.add_argument("--shots", help='comma list of shot settings or "all"')
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("run", parents=[common], help="complete every task input with a backend")
    p.add_argument("manifest")
    p.add_argument("--backend", choices=["oracle", "stochastic", "http"])
    p.add_argument("--corpus", dest="corpus_path", help="corpus (required for stochastic)")
    p.add_argument("--base-url", help="http backend endpoint")
    p.add_argument("--concurrency", type=int)
    p.add_argument("-o", "--output", help="predictions JSONL (default: next to the manifest)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("eval", parents=[common], help="score predictions into stratified reports")
    p.add_argument("predictions")
    p.add_argument("--corpus", dest="corpus_path")
    p.add_argument("--out", dest="out_dir")
    p.add_argument("--format", help="comma list of md, csv")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("report", parents=[common], help="re-render a report CSV")
    p.add_argument("csv")
    p.add_argument("--out", dest="out_dir")
    p.add_argument("--format", help="comma list; md is the only re-rendered format")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AuthenticationError as exc:
        print(f"authentication error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, EvaluationError, BackendError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
