"""Walk one Java snippet through the whole probe.

Scan it for simple names, compose a task input per shot setting, ask the
oracle backend, normalize the answer and print the stratified report.
Run: python demos/oracle_walkthrough.py
"""

from __future__ import annotations

from pathlib import Path

from fqnprobe import BASIC, compute_stats, evaluate, extract_simple_names, load_corpus
from fqnprobe.backends import OracleBackend
from fqnprobe.composer import ALL_SHOTS, iter_task_inputs
from fqnprobe.evaluator import render_markdown
from fqnprobe.pipeline import run_tasks

CORPUS = Path(__file__).resolve().parent.parent / "tests" / "data" / "desk_corpus.jsonl"


def main() -> None:
    corpus = load_corpus(CORPUS)
    snippet = next(iter(corpus))
    print(f"snippet {snippet.id}, {snippet.loc} lines\n")
    print(snippet.source_text)

    print("simple names found by the scanner:")
    for hit in extract_simple_names(snippet.source_text):
        print(f"  {hit.simple_name:<24} {hit.kind.value:<7} line {hit.line}")

    stats = compute_stats(corpus)
    target = corpus.pairs[snippet.id][0]
    few = [t for t in iter_task_inputs(corpus, [BASIC], ALL_SHOTS, stats, [])
           if t.snippet_id == snippet.id and t.target == target]
    print(f"\ntask inputs for target {target.simple_name!r} (tail only):")
    for task in few:
        tail = task.rendered_text.splitlines()[-len(task.examples) - 1:]
        print(f"--- {task.shot}")
        print("\n".join(tail))

    tasks = list(iter_task_inputs(corpus, [BASIC], ALL_SHOTS, stats, []))
    records = run_tasks(tasks, OracleBackend.from_corpus(corpus))
    report = evaluate(records, stats, libraries=corpus.libraries())
    print(f"\n{len(records)} oracle predictions over {corpus.n_pairs} pairs\n")
    print(render_markdown(report, labels={BASIC.config_id: "basic"}))


if __name__ == "__main__":
    main()
