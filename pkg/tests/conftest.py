from __future__ import annotations

from pathlib import Path

import pytest

from chvg.corpus import Document, load_corpus

DATA = Path(__file__).parent / "data"
MOBY_DICK = DATA / "moby_dick.txt"

_criteria: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record the outcome of an acceptance criterion for the end-of-run summary."""

    def record(name: str, ok: bool, detail: str = "") -> bool:
        _criteria.append((name, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _criteria:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f" -- {detail}" if detail else ""))


@pytest.fixture(scope="session")
def moby_dick() -> Document:
    return load_corpus([MOBY_DICK])


def doc(words: str) -> Document:
    return Document.from_words(words.split())
