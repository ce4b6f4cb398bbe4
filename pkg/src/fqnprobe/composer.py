"""Task-input composition for in-context FQN inference.

A task input is, line by line: the code context (optional), an optional blank
line, an optional ``// <task description>`` line, the example prompts, and the
to-be-complete prompt, e.g.::

    BufferedReader br = new BufferedReader(new FileReader(file));
    // type inference
    // the fully qualified name of "File" is "java.io.File"
    // the fully qualified name of "br" is
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import random
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import CodeSnippet, Corpus, FqnStats, NameKind, NamePair


class TaskDescription(Enum):
    NONE = "none"
    CONCISE = "concise"
    VERBOSE = "verbose"


TASK_DESCRIPTION_TEXT = {
    TaskDescription.CONCISE: "type inference",
    TaskDescription.VERBOSE: "parse simple name to fully qualified name",
}


class Template(Enum):
    DESCRIPTION = "description"
    SYMBOL = "symbol"


class ExampleOrder(Enum):
    RANDOM = "random"
    FREQUENT_FIRST = "frequent-first"
    INFREQUENT_FIRST = "infrequent-first"


class OneShotSelection(Enum):
    RANDOM = "random"
    MOST_USED = "most-used"


ARROW = "→"


@dataclass(frozen=True)
class PromptConfig:
    code_context: bool = True
    task_description: TaskDescription = TaskDescription.VERBOSE
    template: Template = Template.DESCRIPTION
    example_order: ExampleOrder = ExampleOrder.RANDOM
    identifier_quotes: bool = True
    blank_line_after_context: bool = False
    one_shot_selection: OneShotSelection = OneShotSelection.RANDOM
    seed: int = 0

    def to_dict(self) -> dict:
        out = {}
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            out[f.name] = value.value if isinstance(value, Enum) else value
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "PromptConfig":
        kwargs = {}
        for f in dataclasses.fields(cls):
            if f.name not in data:
                continue
            value = data[f.name]
            enum_type = {
                "task_description": TaskDescription,
                "template": Template,
                "example_order": ExampleOrder,
                "one_shot_selection": OneShotSelection,
            }.get(f.name)
            kwargs[f.name] = enum_type(value) if enum_type else value
        unknown = set(data) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise ValueError(f"unknown prompt config keys: {sorted(unknown)}")
        return cls(**kwargs)

    @property
    def config_id(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


BASIC = PromptConfig()
BEST = dataclasses.replace(
    BASIC, task_description=TaskDescription.CONCISE, example_order=ExampleOrder.INFREQUENT_FIRST
)
PRESETS = {"basic": BASIC, "best": BEST}


def ablation_configs(seed: int = 0) -> dict[str, PromptConfig]:
    """The nine configurations of the sensitivity study: basic, best and seven one-factor variants."""
    basic = dataclasses.replace(BASIC, seed=seed)
    return {
        "basic": basic,
        "best": dataclasses.replace(BEST, seed=seed),
        "no-context": dataclasses.replace(basic, code_context=False),
        "concise": dataclasses.replace(basic, task_description=TaskDescription.CONCISE),
        "no-description": dataclasses.replace(basic, task_description=TaskDescription.NONE),
        "symbol": dataclasses.replace(basic, template=Template.SYMBOL),
        "frequent-first": dataclasses.replace(basic, example_order=ExampleOrder.FREQUENT_FIRST),
        "infrequent-first": dataclasses.replace(basic, example_order=ExampleOrder.INFREQUENT_FIRST),
        "no-quotes": dataclasses.replace(basic, identifier_quotes=False),
    }


class ShotKind(Enum):
    ZERO = "zero"
    ONE_ENIC = "one-enic"
    ONE = "one"
    FEW_REP = "few-rep"
    FEW_LOO = "few-loo"


@dataclass(frozen=True)
class ShotSetting:
    kind: ShotKind
    k: int | None = None

    def __post_init__(self) -> None:
        if self.k is not None and self.kind is not ShotKind.FEW_REP:
            raise ValueError("k only applies to few-rep")
        if self.k is not None and self.k < 1:
            raise ValueError("few-rep k must be positive")

    def __str__(self) -> str:
        if self.k is not None:
            return f"{self.kind.value}-{self.k}"
        return self.kind.value

    @classmethod
    def parse(cls, text: str) -> "ShotSetting":
        m = re.fullmatch(r"few-rep-(\d+)", text)
        if m:
            return cls(ShotKind.FEW_REP, int(m.group(1)))
        return cls(ShotKind(text))


ZERO = ShotSetting(ShotKind.ZERO)
ONE_ENIC = ShotSetting(ShotKind.ONE_ENIC)
ONE = ShotSetting(ShotKind.ONE)
FEW_REP = ShotSetting(ShotKind.FEW_REP)
FEW_LOO = ShotSetting(ShotKind.FEW_LOO)
ALL_SHOTS = (ZERO, ONE_ENIC, ONE, FEW_REP, FEW_LOO)


def parse_shots(text: str | Iterable[str]) -> list[ShotSetting]:
    items = text.split(",") if isinstance(text, str) else list(text)
    shots: list[ShotSetting] = []
    for item in (s.strip() for s in items):
        for shot in ALL_SHOTS if item == "all" else (ShotSetting.parse(item),):
            if shot not in shots:
                shots.append(shot)
    return shots


ENIC_FALLBACKS = (
    ("Object", "java.lang.Object"),
    ("String", "java.lang.String"),
    ("Integer", "java.lang.Integer"),
)


class ShotInfeasible(ValueError):
    def __init__(self, snippet_id: str, shot: ShotSetting, reason: str):
        super().__init__(f"shot infeasible: {shot} for snippet {snippet_id} ({reason})")
        self.snippet_id = snippet_id
        self.shot = shot


@dataclass(frozen=True)
class TaskInput:
    snippet_id: str
    target: NamePair
    shot: ShotSetting
    config: PromptConfig
    examples: tuple[NamePair, ...]
    rendered_text: str
    file_name: str = field(default="")


def _quote(text: str, config: PromptConfig) -> str:
    return f'"{text}"' if config.identifier_quotes else text


def render_example(pair: NamePair, config: PromptConfig) -> str:
    sn = _quote(pair.simple_name, config)
    fqn = _quote(pair.fqn, config)
    if config.template is Template.SYMBOL:
        return f"// {sn} {ARROW} {fqn}"
    return f"// the fully qualified name of {sn} is {fqn}"


def render_query(simple_name: str, config: PromptConfig) -> str:
    sn = _quote(simple_name, config)
    if config.template is Template.SYMBOL:
        return f"// {sn} {ARROW}"
    return f"// the fully qualified name of {sn} is"


def name_slug(simple_name: str) -> str:
    """Filesystem-safe, form-preserving key for a simple name."""
    slug = simple_name.replace("<>", "-generic").replace("[]", "-array").replace("()", "-call")
    return re.sub(r"[^\w.$-]", "_", slug)


def task_file_name(snippet_id: str, simple_name: str) -> str:
    safe_id = re.sub(r"[^\w.$-]", "_", snippet_id)
    return f"{safe_id}__{name_slug(simple_name)}.java"


def _rng(*parts: object) -> random.Random:
    return random.Random("|".join(str(p) for p in parts))


def check_feasible(snippet_id: str, n_pairs: int, shot: ShotSetting) -> None:
    kind = shot.kind
    if kind in (ShotKind.ONE, ShotKind.FEW_REP, ShotKind.FEW_LOO) and n_pairs < 2:
        raise ShotInfeasible(snippet_id, shot, f"needs at least 2 unique names, has {n_pairs}")
    if kind is ShotKind.FEW_REP:
        if shot.k is None and n_pairs < 4:
            raise ShotInfeasible(snippet_id, shot, f"needs at least 4 unique names, has {n_pairs}")
        if shot.k is not None and shot.k > n_pairs - 1:
            raise ShotInfeasible(snippet_id, shot, f"k={shot.k} exceeds {n_pairs - 1} available examples")


def _usage(pair: NamePair, stats: Mapping[str, FqnStats]) -> int:
    s = stats.get(pair.fqn)
    return s.usage_count if s is not None else 0


def select_examples(
    pairs: Sequence[NamePair],
    target: NamePair,
    shot: ShotSetting,
    stats: Mapping[str, FqnStats],
    config: PromptConfig,
) -> list[NamePair]:
    """Pick and order the example prompts for one target.

    Which examples are drawn depends only on the seed, snippet, target and shot,
    so configurations that differ in ordering see the same example set.
    """
    snippet_id = target.snippet_id
    check_feasible(snippet_id, len(pairs), shot)
    others = [p for p in pairs if p.simple_name != target.simple_name]
    draw = _rng(config.seed, "select", snippet_id, target.simple_name, shot)
    kind = shot.kind

    if kind is ShotKind.ZERO:
        return []
    if kind is ShotKind.ONE_ENIC:
        present = {p.simple_name for p in pairs}
        for name, fqn in ENIC_FALLBACKS:
            if name not in present:
                return [NamePair(snippet_id, name, fqn, NameKind.DECL_TYPE)]
        raise ShotInfeasible(snippet_id, shot, "every out-of-context fallback name occurs in the snippet")
    if kind is ShotKind.ONE:
        if config.one_shot_selection is OneShotSelection.MOST_USED:
            return [min(others, key=lambda p: (-_usage(p, stats), p.fqn, p.simple_name))]
        return [draw.choice(others)]
    if kind is ShotKind.FEW_REP:
        k = shot.k if shot.k is not None else draw.randint(2, len(pairs) - 2)
        chosen = draw.sample(others, k)
    else:
        chosen = list(others)

    if config.example_order is ExampleOrder.RANDOM:
        _rng(config.seed, "order", snippet_id, target.simple_name, shot).shuffle(chosen)
    elif config.example_order is ExampleOrder.FREQUENT_FIRST:
        chosen.sort(key=lambda p: (-_usage(p, stats), p.fqn, p.simple_name))
    else:
        chosen.sort(key=lambda p: (_usage(p, stats), p.fqn, p.simple_name))
    return chosen


def compose(
    snippet: CodeSnippet,
    pairs: Sequence[NamePair],
    target: NamePair,
    shot: ShotSetting,
    config: PromptConfig,
    stats: Mapping[str, FqnStats],
) -> TaskInput:
    if target not in pairs:
        raise ValueError(f"target {target.simple_name} not among the pairs of {snippet.id}")
    examples = select_examples(pairs, target, shot, stats, config)
    lines: list[str] = []
    if config.code_context:
        lines.append(snippet.source_text.rstrip("\n"))
        if config.blank_line_after_context:
            lines.append("")
    if config.task_description is not TaskDescription.NONE:
        lines.append("// " + TASK_DESCRIPTION_TEXT[config.task_description])
    lines.extend(render_example(p, config) for p in examples)
    lines.append(render_query(target.simple_name, config))
    return TaskInput(
        snippet_id=snippet.id,
        target=target,
        shot=shot,
        config=config,
        examples=tuple(examples),
        rendered_text="\n".join(lines),
        file_name=task_file_name(snippet.id, target.simple_name),
    )


@dataclass(frozen=True)
class ManifestRecord:
    file: str
    snippet_id: str
    target: str
    gold_fqn: str
    shot: str
    config_id: str
    seed: int

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), ensure_ascii=False)


@dataclass
class Manifest:
    records: list[ManifestRecord] = field(default_factory=list)
    warnings: list[dict] = field(default_factory=list)
    configs: dict[str, dict] = field(default_factory=dict)


def relative_task_path(config: PromptConfig, shot: ShotSetting, file_name: str) -> str:
    return f"{config.config_id}/{shot}/{file_name}"


def iter_task_inputs(
    corpus: Corpus,
    configs: Iterable[PromptConfig],
    shots: Iterable[ShotSetting],
    stats: Mapping[str, FqnStats],
    warnings: list[dict] | None = None,
):
    """Yield every composable task input; infeasible shots are reported in ``warnings``."""
    shots = list(shots)
    for config in configs:
        for shot in shots:
            for snippet in corpus:
                pairs = corpus.pairs[snippet.id]
                for target in pairs:
                    try:
                        yield compose(snippet, pairs, target, shot, config, stats)
                    except ShotInfeasible as exc:
                        if warnings is not None:
                            warnings.append({
                                "warning": "shot infeasible",
                                "snippet_id": snippet.id,
                                "target": target.simple_name,
                                "shot": str(shot),
                                "config_id": config.config_id,
                                "reason": str(exc),
                            })


def compose_batch(
    corpus: Corpus,
    configs: Iterable[PromptConfig],
    shots: Iterable[ShotSetting],
    out_dir: str | Path,
    stats: Mapping[str, FqnStats],
) -> Manifest:
    """Write ``<config-id>/<shot>/<snippet-id>__<target>.java`` files and ``manifest.jsonl``."""
    out = Path(out_dir)
    configs = list(configs)
    manifest = Manifest(configs={c.config_id: c.to_dict() for c in configs})
    for task in iter_task_inputs(corpus, configs, shots, stats, manifest.warnings):
        rel = relative_task_path(task.config, task.shot, task.file_name)
        path = out / rel
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(task.rendered_text, encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write task input {path}: {exc}") from exc
        manifest.records.append(ManifestRecord(
            file=rel,
            snippet_id=task.snippet_id,
            target=task.target.simple_name,
            gold_fqn=task.target.fqn,
            shot=str(task.shot),
            config_id=task.config.config_id,
            seed=task.config.seed,
        ))
    write_manifest(manifest, out / "manifest.jsonl")
    return manifest


def write_manifest(manifest: Manifest, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for config_id, cfg in manifest.configs.items():
            fh.write(json.dumps({"config": config_id, **cfg}) + "\n")
        for rec in manifest.records:
            fh.write(rec.to_json() + "\n")
        for warning in manifest.warnings:
            fh.write(json.dumps(warning, ensure_ascii=False) + "\n")


def read_manifest(path: str | Path) -> Manifest:
    manifest = Manifest()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            if "warning" in obj:
                manifest.warnings.append(obj)
            elif "config" in obj:
                cid = obj.pop("config")
                manifest.configs[cid] = obj
            else:
                manifest.records.append(ManifestRecord(**obj))
    return manifest
