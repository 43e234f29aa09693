from __future__ import annotations

import json
from pathlib import Path

import pytest

from affekt.taxonomy import default_taxonomy

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def taxonomy():
    return default_taxonomy()


@pytest.fixture(scope="session")
def reference_distribution():
    """Committed 300k dominant-emotion counts with published percentages."""
    with open(FIXTURES / "dominant_distribution_300k.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def raw_fixture_path():
    return FIXTURES / "raw_headlines_1000.jsonl"


@pytest.fixture(scope="session")
def raw_fixture_truth():
    with open(FIXTURES / "raw_headlines_1000.truth.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def fixture_store(tmp_path_factory):
    """A complete store root (corpus + run + artifacts) shared per session."""
    from affekt.sampledata import build_fixture_store

    root = tmp_path_factory.mktemp("store")
    return build_fixture_store(root, n=1000, seed=7)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" in nodeid and report.when == "call":
                name = nodeid.split("::")[-1]
                status = "PASS" if outcome == "passed" else "FAIL"
                lines.append((name, status))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in sorted(lines):
        terminalreporter.write_line(f"[{status}] {name}")
