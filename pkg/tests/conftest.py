from __future__ import annotations

import pytest

_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line and assert it."""

    def record(label: str, ok: bool, detail: str = "") -> None:
        _LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else ""))
        assert ok, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
