"""Show how a simulated model's accuracy moves with usage, length and shots.

The stochastic backend recalls frequent, short FQNs more often and benefits
from in-context examples. Averaging a few seeds makes the trends visible.
Run: python demos/stochastic_trends.py
"""

from __future__ import annotations

from collections import defaultdict

from fqnprobe import BASIC, compute_stats
from fqnprobe.backends import RecallParams, StochasticBackend
from fqnprobe.composer import ALL_SHOTS, iter_task_inputs
from fqnprobe.corpus import LENGTH_BUCKETS, USAGE_BUCKETS, bucketize
from fqnprobe.pipeline import run_tasks
from fqnprobe.synth import SynthConfig, zipfian_corpus

SEEDS = 3


def main() -> None:
    corpus = zipfian_corpus(SynthConfig(n_snippets=300, seed=1, pairs_per_snippet=(4, 8)))
    stats = compute_stats(corpus)
    tasks = list(iter_task_inputs(corpus, [BASIC], ALL_SHOTS, stats, []))
    print(f"{len(corpus)} snippets, {corpus.n_pairs} pairs, {len(tasks)} task inputs, {SEEDS} seeds\n")

    cells: dict[tuple[str, str], list[int]] = defaultdict(lambda: [0, 0])
    for seed in range(SEEDS):
        backend = StochasticBackend(corpus, RecallParams.defaults(seed=seed), stats)
        for rec in run_tasks(tasks, backend):
            b = bucketize(stats[rec.gold_fqn])
            for key in ((rec.shot, "all"), (rec.shot, b.usage_bucket), (rec.shot, b.length_bucket)):
                cells[key][0] += rec.correct
                cells[key][1] += 1

    shots = [str(s) for s in ALL_SHOTS]
    columns = ["all", *USAGE_BUCKETS, *LENGTH_BUCKETS]
    print(f"{'shot':<10}" + "".join(f"{c:>9}" for c in columns))
    for shot in shots:
        row = []
        for col in columns:
            correct, total = cells.get((shot, col), (0, 0))
            row.append(f"{100 * correct / total:8.1f}%" if total else f"{'-':>9}")
        print(f"{shot:<10}" + "".join(row))


if __name__ == "__main__":
    main()
