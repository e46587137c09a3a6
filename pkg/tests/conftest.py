import pytest

from bandkit.catalog import build_catalog


@pytest.fixture(scope="session")
def catalog():
    """All bands of order <= 6, with homogeneity cached up to order 5."""
    return build_catalog(6, homogeneity_max_order=5)


@pytest.fixture(scope="session")
def small_bands(catalog):
    return list(catalog.all_bands(5))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
