"""Graph families used in tests, benchmarks and examples."""
import numpy as np

from .chain import WeightedGraph


def cycle(n, weight=1.0):
    return WeightedGraph(n, [(i, (i + 1) % n, weight) for i in range(n)])


def complete(n, weight=1.0):
    return WeightedGraph(n, [(i, j, weight) for i in range(n) for j in range(i + 1, n)])


def directed_cycle(n):
    return WeightedGraph(n, [(i, (i + 1) % n, 1.0) for i in range(n)], directed=True)


def two_triangles(bridge=1.0):
    """Triangles {0,1,2} and {3,4,5} joined by the edge 2-3."""
    edges = [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0), (2, 3, bridge)]
    return WeightedGraph(6, edges)


def random_graph(n, rng, directed=False, density=0.4, self_loops=False):
    """Random weighted graph that is strongly connected.

    A random Hamiltonian cycle (both directions when undirected) guarantees
    irreducibility; extra edges appear with probability `density` and
    weights are uniform in [0.1, 2).
    """
    perm = rng.permutation(n)
    edges = [(int(perm[i]), int(perm[(i + 1) % n]), float(rng.uniform(0.1, 2.0))) for i in range(n)]
    for u in range(n):
        for v in range(n) if directed else range(u + 1, n):
            if u != v and rng.random() < density:
                edges.append((u, v, float(rng.uniform(0.1, 2.0))))
        if self_loops and rng.random() < 0.3:
            edges.append((u, u, float(rng.uniform(0.1, 1.0))))
    return WeightedGraph(n, edges, directed)


def k_blobs(k, size, bridge=1e-3, rng=None):
    """k disjoint cliques of `size` states chained in a ring by bridges of weight `bridge`.

    Gives k eigenvalues of order `bridge` below a gap of order one.
    """
    edges = []
    for b in range(k):
        base = b * size
        for i in range(size):
            for j in range(i + 1, size):
                w = 1.0 if rng is None else float(rng.uniform(0.5, 1.5))
                edges.append((base + i, base + j, w))
    for b in range(k):
        u = b * size + size - 1
        v = ((b + 1) % k) * size
        if k > 1 and (k > 2 or b == 0):
            edges.append((u, v, bridge))
    return WeightedGraph(k * size, edges)


def planted_blob(blob, rest, bridge, blobs=1, rng=None):
    """`blobs` cliques of `blob` states each attached to a clique of `rest` states.

    Each clique is joined to the large clique by one edge of weight `bridge`;
    the first clique is the planted sparse set. Returns the graph and the
    planted set's indices.
    """
    edges = []
    n = blobs * blob + rest
    core = blobs * blob
    for i in range(core, n):
        for j in range(i + 1, n):
            w = 1.0 if rng is None else float(rng.uniform(0.5, 1.5))
            edges.append((i, j, w))
    for b in range(blobs):
        base = b * blob
        for i in range(blob):
            for j in range(i + 1, blob):
                w = 1.0 if rng is None else float(rng.uniform(0.5, 1.5))
                edges.append((base + i, base + j, w))
        edges.append((base, core + (b % rest), bridge))
    return WeightedGraph(n, edges), tuple(range(blob))


def random_chain_kernel(n, rng, density=0.5):
    """Dense random row-stochastic matrix with a positive cycle (irreducible)."""
    W = rng.uniform(0.0, 1.0, (n, n)) * (rng.random((n, n)) < density)
    perm = rng.permutation(n)
    W[perm, np.roll(perm, -1)] += rng.uniform(0.1, 1.0, n)
    return W / W.sum(axis=1, keepdims=True)
