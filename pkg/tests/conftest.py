from __future__ import annotations

from pathlib import Path

import pytest

from fqnprobe.corpus import load_corpus

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

CRITERIA = {
    1: "oracle end-to-end at 100% under basic and best, < 10 s",
    2: "composer golden files and task-input counts",
    3: "normalizer fixture table and idempotence",
    4: "scanner agreement with the 30-snippet annotation suite",
    5: "evaluator partition sums, any >= majority, seeded tie-break",
    6: "stochastic backend reproduces the stratified accuracy trends",
    7: "sampler similarity, size and pair constraints",
    8: "HTTP backend contract against a local stub server",
}

_outcomes_key = pytest.StashKey[dict]()


@pytest.fixture(scope="session")
def desk_corpus():
    return load_corpus(DATA / "desk_corpus.jsonl")


def pytest_configure(config):
    config.stash[_outcomes_key] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        results = item.config.stash[_outcomes_key].setdefault(marker.args[0], [])
        results.append(report.passed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = config.stash.get(_outcomes_key, {})
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number, title in CRITERIA.items():
        results = outcomes.get(number)
        if results is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status} - {title}")
