from contextlib import contextmanager

import numpy as np
import pytest

_CRITERIA = []


@pytest.fixture
def rng():
    return np.random.default_rng(20201016)


@pytest.fixture
def criterion():
    """Context manager recording a pass/fail line for the acceptance summary."""

    @contextmanager
    def record(cid, label):
        detail = {}
        try:
            yield detail
        except BaseException:
            _CRITERIA.append((cid, label, False, detail.get("msg", "")))
            raise
        _CRITERIA.append((cid, label, True, detail.get("msg", "")))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid, label, ok, msg in sorted(_CRITERIA, key=lambda r: (r[0], r[1])):
        status = "PASS" if ok else "FAIL"
        extra = f" -- {msg}" if msg else ""
        terminalreporter.write_line(f"criterion {cid} [{label}]: {status}{extra}")
