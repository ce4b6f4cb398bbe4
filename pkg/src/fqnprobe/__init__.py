"""Probe API fully-qualified-name knowledge in code completion models.

Pipeline: scan partial Java for simple names, compose in-context task
inputs, run them through a backend, normalize the answers and report
accuracy stratified by FQN length, usage and name cardinality.
"""

from __future__ import annotations

from .composer import BASIC, BEST, PromptConfig, ShotSetting, ablation_configs, compose, compose_batch
from .corpus import CodeSnippet, Corpus, NameKind, NamePair, compute_stats, load_corpus
from .evaluator import PredictionRecord, StratifiedReport, accuracy_variants, evaluate
from .normalizer import FAILURE_MARKER, is_correct, normalize_fqn
from .sampler import SamplerConfig, sample
from .scanner import ScanHit, extract_simple_names

__version__ = "0.1.0"

__all__ = [
    "BASIC",
    "BEST",
    "CodeSnippet",
    "Corpus",
    "FAILURE_MARKER",
    "NameKind",
    "NamePair",
    "PredictionRecord",
    "PromptConfig",
    "SamplerConfig",
    "ScanHit",
    "ShotSetting",
    "StratifiedReport",
    "ablation_configs",
    "accuracy_variants",
    "compose",
    "compose_batch",
    "compute_stats",
    "evaluate",
    "extract_simple_names",
    "is_correct",
    "load_corpus",
    "normalize_fqn",
    "sample",
]
