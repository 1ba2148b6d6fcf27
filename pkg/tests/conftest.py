import pytest

from freeprod.fixtures import add, rz2
from freeprod.free_product import build_free_product
from freeprod.homomorphism import constant_hom

from ._report import ACCEPTANCE_LINES


@pytest.fixture(scope="session")
def RZ2():
    return rz2()


@pytest.fixture(scope="session")
def ADD():
    return add()


@pytest.fixture(scope="session")
def rr(RZ2):
    """RZ2 * RZ2 with every left state sent to x."""
    return build_free_product(RZ2, RZ2, constant_hom(RZ2, RZ2, "x"), rename=True)


@pytest.fixture(scope="session")
def ar(ADD, RZ2):
    """ADD * RZ2 with every left state sent to x."""
    return build_free_product(ADD, RZ2, constant_hom(ADD, RZ2, "x"), rename=True)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
