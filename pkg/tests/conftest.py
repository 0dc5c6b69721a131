import mpmath
import pytest

from wavecoh import PrecisionContext


@pytest.fixture(autouse=True)
def _mp_precision():
    saved = mpmath.mp.prec
    mpmath.mp.prec = 256
    yield
    mpmath.mp.prec = saved


@pytest.fixture
def ctx():
    return PrecisionContext()


def close(x, y, tol=1e-30):
    return abs(mpmath.mpmathify(x) - mpmath.mpmathify(y)) <= tol * (1 + abs(mpmath.mpmathify(y)))


_ACCEPTANCE_LINES: list = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Collects one line per acceptance criterion; echoed in the terminal summary."""

    def record(criterion: int, passed: bool, summary: str):
        line = f"criterion {criterion}: {'PASS' if passed else 'FAIL'}  {summary}"
        print(line)
        _ACCEPTANCE_LINES.append(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
