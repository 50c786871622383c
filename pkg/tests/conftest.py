import pytest
from hypothesis import HealthCheck, settings

from unlinkbound import braid, diagram

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def hopf():
    return braid.closure(braid.parse("s1^2 @2"))


@pytest.fixture
def kink():
    return diagram.decode("diagram crossings=1 loops=0\nX 1 1 2 2 h=R\n")


@pytest.fixture
def d1():
    return braid.closure(braid.dn_word(1))


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
