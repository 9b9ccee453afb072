import numpy as np
import pytest

from ivfs.dataset import IntervalFeatureMatrix, load_fixture

_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(number, title, passed, detail)``."""

    def record(number, title, passed, detail=""):
        _CRITERIA.append((number, title, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_CRITERIA, key=lambda c: c[0]):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {title}" + (f" -- {detail}" if detail else ""))


@pytest.fixture(scope="session")
def iris():
    return load_fixture("iris")


def make_matrix(rows, labels):
    """Matrix from nested ``[[(lo, hi), ...], ...]`` rows."""
    return IntervalFeatureMatrix(np.asarray(rows, dtype=float), tuple(labels))


@pytest.fixture
def tiny():
    """Four samples, two classes, three features."""
    rows = [
        [(0, 1), (5, 6), (0, 2)],
        [(0.5, 1.5), (5, 7), (1, 2)],
        [(10, 11), (5, 6), (3, 4)],
        [(10, 12), (4, 6), (3, 5)],
    ]
    return make_matrix(rows, ["a", "a", "b", "b"])
