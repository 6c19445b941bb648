from contextlib import contextmanager

import pytest

_LINES = {}


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion.

    The block may set ``info["note"]`` to add detail to the line.
    """

    @contextmanager
    def check(number, label):
        info = {}
        tail = lambda: f" ({info['note']})" if info.get("note") else ""
        try:
            yield info
        except pytest.xfail.Exception as exc:
            _LINES[number] = f"criterion {number:>2}: FAIL (non-blocking) {label}: {exc}"
            raise
        except BaseException as exc:
            msg = f"{type(exc).__name__}: {exc}".splitlines()[0]
            _LINES[number] = f"criterion {number:>2}: FAIL {label}{tail()}: {msg}"
            raise
        else:
            _LINES[number] = f"criterion {number:>2}: PASS {label}{tail()}"

    return check


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_LINES):
        terminalreporter.write_line(_LINES[k])
