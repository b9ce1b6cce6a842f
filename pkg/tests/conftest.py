import os
import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from threshold_lab.graphs import Graph, RootedGraph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def graphs(draw, min_n=0, max_n=6, max_edges=None):
    n = draw(st.integers(min_n, max_n))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    if not pairs:
        return Graph(n)
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=max_edges or len(pairs)))
    return Graph(n, chosen)


@st.composite
def rooted(draw, max_z=6, max_edges=None, min_nonroots=0):
    g = draw(graphs(min_n=max(1, min_nonroots), max_n=max_z, max_edges=max_edges))
    s = draw(st.integers(0, g.n - min_nonroots))
    roots = draw(st.permutations(range(g.n)))[:s]
    return RootedGraph(g, tuple(roots))


@st.composite
def permutations_of(draw, n):
    return draw(st.permutations(range(n)))


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
