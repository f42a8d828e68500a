import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from onci.bounds import builtin_functionals  # noqa: E402
from onci.graphs import YO13_CLIQUES, builtin_graph  # noqa: E402
from onci.polytope import build_polytope, enumerate_vertices  # noqa: E402


@pytest.fixture(scope="session")
def yo13_polytope():
    return build_polytope(builtin_graph("yo13"), YO13_CLIQUES, 3)


@pytest.fixture(scope="session")
def yo13_vertices(yo13_polytope):
    return enumerate_vertices(yo13_polytope)


@pytest.fixture(scope="session")
def kcbs_polytope():
    return build_polytope(builtin_graph("kcbs5-extended"), builtin_functionals("kcbs").contexts, 3)


@pytest.fixture(scope="session")
def kcbs_vertices(kcbs_polytope):
    return enumerate_vertices(kcbs_polytope)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
