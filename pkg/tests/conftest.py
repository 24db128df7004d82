from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from desingular.parsing import load_system
from desingular.poly import Polynomial, RationalFunction

DATA = Path(__file__).parent / "data"

settings.register_profile(
    "default", deadline=None, max_examples=50, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# criterion number -> (passed, detail), filled in by test_acceptance.py
ACCEPTANCE = {}


def record(n, passed, detail=""):
    ACCEPTANCE[n] = (bool(passed), detail)


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def z():
    return Polynomial.gen()


@pytest.fixture
def R():
    """Shorthand constructor: ``R(num, den=1)``."""
    return RationalFunction


@pytest.fixture
def example1():
    return load_system(DATA / "example1.json")[0]


@pytest.fixture
def rank_example():
    return load_system(DATA / "rank_example.json")[0]


@pytest.fixture
def blocked():
    return load_system(DATA / "blocked.json")[0]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[n]
        line = f"criterion {n}: {'PASS' if passed else 'FAIL'}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
