import contextlib
import time

import pytest

_CRITERIA: dict = {}


@contextlib.contextmanager
def _record(number: int, title: str):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        _CRITERIA[number] = (title, False, time.perf_counter() - start, f"{type(exc).__name__}: {exc}")
        raise
    _CRITERIA[number] = (title, True, time.perf_counter() - start, "")


@pytest.fixture
def criterion():
    """Context manager that records the outcome of one acceptance criterion."""
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok, elapsed, why = _CRITERIA[number]
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({elapsed:.2f}s)"
        if why:
            line += f" -- {why.splitlines()[0][:200]}"
        terminalreporter.write_line(line)
