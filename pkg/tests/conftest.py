from functools import lru_cache
from itertools import combinations

import pytest
from hypothesis import settings, strategies as st

from rigidbound.graph import Graph
from rigidbound.rigidity import enumerate_laman

settings.register_profile("default", deadline=None, derandomize=True)
settings.load_profile("default")


@lru_cache(maxsize=None)
def catalog(n):
    return enumerate_laman(n)


@pytest.fixture(scope="session")
def laman_catalog():
    return catalog


@st.composite
def graphs(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    mask = draw(st.integers(0, (1 << len(pairs)) - 1))
    return Graph.from_edges(n, [p for k, p in enumerate(pairs) if mask >> k & 1])


@st.composite
def graph_and_perm(draw, min_n=1, max_n=8):
    g = draw(graphs(min_n, max_n))
    return g, draw(st.permutations(range(g.n)))


@st.composite
def laman_graphs(draw, min_n=3, max_n=7):
    n = draw(st.integers(min_n, max_n))
    cat = list(catalog(n).values())
    g, _ = draw(st.sampled_from(cat))
    return g


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number): acceptance criterion checked by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, f"rep_{rep.when}", rep)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import VERDICTS
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(VERDICTS):
        terminalreporter.write_line(f"criterion {number}: {VERDICTS[number]}")
