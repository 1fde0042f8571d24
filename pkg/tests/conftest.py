import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from amalgam.instances import load  # noqa: E402


@pytest.fixture(scope="session")
def z4z6():
    return load("z4_z2_z6").instance


@pytest.fixture(scope="session")
def zz():
    return load("z_2z_z").instance


@pytest.fixture(scope="session")
def zfree():
    return load("z_free_z").instance


@pytest.fixture(scope="session")
def z2z3():
    return load("z2_free_z3").instance


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
