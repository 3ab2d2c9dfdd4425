import re

import numpy as np
import pytest

from lmestates.tensor import StateTensor

_CRITERIA: dict[int, list[str]] = {}


def random_state(dims, rng) -> StateTensor:
    n = int(np.prod(dims))
    return StateTensor(tuple(dims), rng.standard_normal(n) + 1j * rng.standard_normal(n))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    outcomes = _CRITERIA.setdefault(int(m.group(1)), [])
    if report.when == "call" or report.outcome != "passed":
        outcomes.append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        ok = all(o == "passed" for o in _CRITERIA[k])
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}")
