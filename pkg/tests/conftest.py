import dataclasses

import pytest

from lifted_spectrum import ProblemConfig


def pytest_addoption(parser):
    parser.addoption(
        "--run-fullsvd", action="store_true", default=False,
        help="run the full-resolution SVD cross-check (about 4 minutes, 2 GB)",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-fullsvd"):
        return
    skip = pytest.mark.skip(reason="needs --run-fullsvd")
    for item in items:
        if "fullsvd" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def reference_config():
    """The strip of half-width 10 wavelengths with default grids."""
    return ProblemConfig()


@pytest.fixture(scope="session")
def small_config():
    """Same geometry on coarse grids, for identities that hold at any resolution."""
    return dataclasses.replace(ProblemConfig(), n_x=21, n_u=24, n_s=6)


ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_report():
    """Collects one line per acceptance criterion; printed in the terminal summary."""

    def record(number, name, passed, detail):
        ACCEPTANCE_LINES.append(f"[{number}] {'PASS' if passed else 'FAIL'} {name}: {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
