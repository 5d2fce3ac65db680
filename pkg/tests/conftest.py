import pytest

from saddledisk import RibbonSpec, build_ribbon, scale


@pytest.fixture(scope="session")
def ribbon():
    return build_ribbon(RibbonSpec())


@pytest.fixture(scope="session")
def ribbon_half(ribbon):
    return scale(ribbon, 0.5)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
