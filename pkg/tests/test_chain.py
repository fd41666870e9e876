import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from heatsse import (DirectedChain, ReversibleChain, WeightedGraph, from_graph, reversibilize,
                     stationary_distribution)
from heatsse.errors import IsolatedState, NotIrreducible, InputError
from heatsse.generators import directed_cycle, random_chain_kernel, random_graph

from conftest import random_chain


def path3():
    return WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0)])


def test_path_stationary_is_degree_proportional():
    c = from_graph(path3())
    assert isinstance(c, ReversibleChain)
    assert_allclose(c.pi, [0.25, 0.5, 0.25], atol=1e-15)


def test_triangle_uniform():
    c = from_graph(WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]))
    assert_allclose(c.pi, np.full(3, 1 / 3), atol=1e-15)


def test_directed_cycle_gives_directed_chain():
    c = from_graph(directed_cycle(3))
    assert isinstance(c, DirectedChain)
    assert_allclose(c.pi, np.full(3, 1 / 3), atol=1e-14)


def test_two_state_balance_equations():
    # pi K = pi with K = [[0, 1], [1/2, 1/2]]: pi_0 = pi_1 / 2
    pi = stationary_distribution(np.array([[0.0, 1.0], [0.5, 0.5]]))
    assert_allclose(pi, [1 / 3, 2 / 3], atol=1e-14)


def test_doubly_stochastic_uniform(rng):
    perms = [np.eye(5)[rng.permutation(5)] for _ in range(4)]
    K = sum(w * P for w, P in zip([0.1, 0.2, 0.3, 0.4], perms)) * 0.5 + 0.5 * np.roll(np.eye(5), 1, axis=1)
    assert_allclose(stationary_distribution(K), np.full(5, 0.2), atol=1e-13)


def test_undirected_path_kernel():
    K = np.array([[0, 1, 0], [0.5, 0, 0.5], [0, 1, 0]], dtype=float)
    assert_allclose(stationary_distribution(K), [0.25, 0.5, 0.25], atol=1e-14)


def test_large_chain_uses_fallback(rng):
    K = random_chain_kernel(2100, rng, density=0.002)
    pi = stationary_distribution(K)
    assert_allclose(pi @ K, pi, atol=1e-12)
    assert pi.sum() == pytest.approx(1.0)


@given(st.integers(0, 10**6), st.integers(2, 30))
def test_stationary_is_invariant(seed, n):
    K = random_chain_kernel(n, np.random.default_rng(seed))
    pi = stationary_distribution(K)
    assert_allclose(pi @ K, pi, atol=1e-12)
    assert np.all(pi > 0)


def test_reversible_input_unchanged():
    c = from_graph(path3())
    r = reversibilize(c.as_directed())
    assert_allclose(r.kernel, c.kernel, atol=1e-15)
    assert_allclose(r.pi, c.pi, atol=1e-15)


def test_directed_cycle_symmetrizes_to_half_steps():
    r = reversibilize(from_graph(directed_cycle(3)))
    expected = np.array([[0, 0.5, 0.5], [0.5, 0, 0.5], [0.5, 0.5, 0]])
    assert_allclose(r.kernel, expected, atol=1e-14)


@given(st.integers(0, 10**6))
def test_reversibilization_preserves_quadratic_form(seed):
    rng = np.random.default_rng(seed)
    d = from_graph(random_graph(6, rng, directed=True, density=0.5))
    r = reversibilize(d)
    assert_allclose(r.pi, d.pi, atol=1e-12)
    for _ in range(100):
        f = rng.normal(size=6)
        assert r.dirichlet_form(f) == pytest.approx(d.quadratic_form(f), abs=1e-10)


@given(st.integers(0, 10**6), st.booleans())
def test_reversible_chain_invariants(seed, directed):
    c = random_chain(seed, 7, directed=directed, self_loops=True)
    assert_allclose(c.kernel.sum(axis=1), 1.0, atol=1e-12)
    assert_allclose(c.flow, c.flow.T, atol=0)
    assert_allclose(c.pi[:, None] * c.kernel, c.flow, atol=1e-14)
    # <f, Lf> two ways
    f = np.random.default_rng(seed).normal(size=7)
    assert c.inner(f, c.laplacian @ f) == pytest.approx(c.dirichlet_form(f), abs=1e-12)


def test_constant_in_kernel_of_laplacian(chain8):
    assert_allclose(chain8.laplacian @ np.ones(8), 0, atol=1e-14)


def test_not_irreducible():
    with pytest.raises(NotIrreducible):
        from_graph(WeightedGraph(4, [(0, 1, 1.0), (2, 3, 1.0)]))
    with pytest.raises(NotIrreducible):
        from_graph(WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 1, 1.0)], directed=True))


def test_isolated_state():
    with pytest.raises(IsolatedState):
        from_graph(WeightedGraph(3, [(0, 1, 1.0)]))


@pytest.mark.parametrize("edges", [[(0, 5, 1.0)], [(0, 1, -1.0)], [(0, 1, float("nan"))]])
def test_graph_validation(edges):
    with pytest.raises(InputError):
        WeightedGraph(3, edges)


def test_chain_rejects_bad_kernel():
    with pytest.raises(InputError):
        DirectedChain(np.array([0.5, 0.5]), np.array([[0.5, 0.6], [0.5, 0.5]]))
    with pytest.raises(InputError):
        ReversibleChain(np.array([0.5, 0.5]), np.array([[0.0, 1.0], [0.5, 0.5]]))


def test_self_loop_counted_once():
    g = WeightedGraph(2, [(0, 0, 2.0), (0, 1, 1.0)])
    assert_allclose(g.weight_matrix(), [[2.0, 1.0], [1.0, 0.0]])
    c = from_graph(g)
    assert_allclose(c.kernel[0], [2 / 3, 1 / 3])
