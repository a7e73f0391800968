"""Shared fixtures: tiny corpus builders and acceptance-line reporting."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from crossmedia.timeutil import format_rfc3339

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

START_2020 = 1577836800  # 2020-01-01T00:00:00Z


def event(
    doc_id: str,
    ts: int,
    candidate: str = "alpha",
    kind: str = "twitter",
    outlet: str = "",
    bias: str = "unknown",
    text: str = "hello world",
) -> dict:
    return {
        "id": doc_id,
        "ts": format_rfc3339(ts),
        "source_kind": kind,
        "outlet": outlet,
        "bias": bias,
        "candidate": candidate,
        "text": text,
    }


def write_corpus_dir(
    root: Path,
    events: list[dict],
    candidates=("alpha", "bravo"),
    start: int = START_2020,
    end: int = START_2020 + 7 * 86400,
    series: dict[str, str] | None = None,
    sampling_rates: dict | None = None,
    raw_lines: list[str] | None = None,
) -> Path:
    """Materialize a corpus directory; `raw_lines` lets tests plant bad rows."""
    root.mkdir(parents=True, exist_ok=True)
    (root / "events").mkdir(exist_ok=True)
    manifest = {
        "candidates": list(candidates),
        "start": format_rfc3339(start),
        "end": format_rfc3339(end),
    }
    if sampling_rates:
        manifest["sampling_rates"] = sampling_rates
    (root / "manifest.json").write_text(json.dumps(manifest), encoding="utf-8")
    lines = [json.dumps(e) for e in events]
    if raw_lines:
        lines += raw_lines
    (root / "events" / "events.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")
    if series:
        (root / "series").mkdir(exist_ok=True)
        for name, content in series.items():
            (root / "series" / name).write_text(content, encoding="utf-8")
    return root


@pytest.fixture
def bundled_corpus() -> Path:
    return FIXTURES / "corpus"


@pytest.fixture
def bundled_config() -> Path:
    return FIXTURES / "config.json"


# --- acceptance criterion reporting ---------------------------------------

_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.fspath.basename == "test_acceptance.py":
        label = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _ACCEPTANCE_RESULTS.append((label, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for label, status in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{status}] {label}")
