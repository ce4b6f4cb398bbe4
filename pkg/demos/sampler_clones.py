"""Plant near-duplicate methods in a corpus and watch the sampler drop them.

Run: python demos/sampler_clones.py
"""

from __future__ import annotations

from fqnprobe import SamplerConfig
from fqnprobe.sampler import sample_with_log, similarity
from fqnprobe.synth import SynthConfig, zipfian_corpus


def main() -> None:
    corpus = zipfian_corpus(SynthConfig(n_snippets=200, clone_rate=0.2, long_rate=0.1, seed=4))
    clones = [s for s in corpus if "c" in s.id[3:]]
    print(f"{len(corpus)} methods, {len(clones)} planted clones")
    for clone in clones[:3]:
        original = corpus.snippets[clone.id[: clone.id.rindex("c")]]
        print(f"  {clone.id} vs {original.id}: similarity {similarity(clone, original):.2f}")

    result = sample_with_log(corpus, SamplerConfig(seed=0))
    chosen = set(result.ids)
    print(f"\nsampled {len(chosen)} methods from {len(result.log)} packages")
    print(f"clones kept: {sum(c.id in chosen for c in clones)}")

    reasons: dict[str, int] = {}
    for entry in result.log:
        reasons[entry.reason or "accepted"] = reasons.get(entry.reason or "accepted", 0) + 1
    for reason, n in sorted(reasons.items()):
        print(f"  {reason:<20} {n}")


if __name__ == "__main__":
    main()
