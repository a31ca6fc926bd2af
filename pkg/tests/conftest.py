import itertools
import math

import numpy as np
import pytest

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, label): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _criteria.append((mark.args[0], mark.args[1], rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num, label, ok in sorted(_criteria):
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {label}")


def brute_force_value(u, k):
    """Independent oracle: every k-subset and every sign vector, plain Python loops."""
    u = np.asarray(u, dtype=float)
    best = 0.0
    for subset in itertools.combinations(range(len(u)), k):
        for signs in itertools.product((1.0, -1.0), repeat=k):
            s = sum(e * u[i] for e, i in zip(signs, subset))
            best = max(best, math.sqrt(float(s @ s)))
    return best


@pytest.fixture
def oracle():
    return brute_force_value
