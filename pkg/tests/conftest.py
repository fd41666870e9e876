import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from heatsse import as_reversible, decompose, from_graph
from heatsse.generators import random_graph

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=15, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def random_chain(seed, n, directed=False, density=0.4, self_loops=False):
    """Reversible chain from a random strongly connected graph (reversibilized if directed)."""
    rng = np.random.default_rng(seed)
    return as_reversible(from_graph(random_graph(n, rng, directed, density, self_loops)))


def random_function(seed, n):
    return np.random.default_rng(seed).normal(size=n)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def chain8():
    return random_chain(8, 8, self_loops=True)


@pytest.fixture(scope="session")
def basis8(chain8):
    return decompose(chain8)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[num])
