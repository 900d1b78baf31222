from pathlib import Path

import pytest

from essentree import load_fta, parse_term

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

T_PRIME = "g1(g2(g1(f1(0),x2),x2),g1(x1,g2(x1,f1(0))))"
T_DOUBLE_PRIME = "g1(x2,x1)"


@pytest.fixture(scope="session")
def a1():
    return load_fta(FIXTURES / "a1.fta")


@pytest.fixture(scope="session")
def a2():
    return load_fta(FIXTURES / "a2.fta")


@pytest.fixture(scope="session")
def c1():
    return load_fta(FIXTURES / "c1.fta")


@pytest.fixture(scope="session")
def t1(a1):
    return parse_term((FIXTURES / "t1.term").read_text(), a1.signature)


@pytest.fixture(scope="session")
def t2(a2):
    return parse_term((FIXTURES / "t2.term").read_text(), a2.signature)


@pytest.fixture
def p1(a1):
    """Parse a term over the a1 signature."""
    return lambda text: parse_term(text, a1.signature)


# -- acceptance reporting ----------------------------------------------------

_CRITERIA: list[tuple[int, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = report.user_properties and dict(report.user_properties).get("criterion")
    if marker:
        number, title = marker
        _CRITERIA.append((number, title, "PASS" if report.passed else "FAIL"))


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_makereport(item, call):
    m = item.get_closest_marker("criterion")
    if m is not None and not any(k == "criterion" for k, _ in item.user_properties):
        item.user_properties.append(("criterion", tuple(m.args)))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_CRITERIA):
        terminalreporter.write_line(f"[{outcome}] criterion {number}: {title}")
