import numpy as np
import pytest

from qhi.qmatrix import Form, QMatrix
from qhi.quaternion import Quaternion

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion; printed in the
    terminal summary."""

    def record(number: int, passed: bool, detail: str) -> None:
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append(f"{status}  criterion {number}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)


def random_qmatrix(rng, rows, cols=None, form=None) -> QMatrix:
    cols = rows if cols is None else cols
    arr = rng.normal(size=(rows, cols, 4))
    return QMatrix.from_real(arr, form)


def random_quaternion(rng) -> Quaternion:
    return Quaternion(*rng.normal(size=4))


def conjugate_by(g: QMatrix, x: QMatrix) -> QMatrix:
    return (x @ g @ x.inv()).with_form(g.form)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


__all__ = ["random_qmatrix", "random_quaternion", "conjugate_by", "Form"]
