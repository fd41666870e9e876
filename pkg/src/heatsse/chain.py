"""Markov chains built from weighted graphs.

Functions on states are plain float arrays of length ``n``. All inner
products and norms are weighted by the stationary distribution ``pi``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .errors import InputError, IsolatedState, NoConvergence, NotIrreducible

STATIONARITY_TOL = 1e-9
BALANCE_TOL = 1e-9
ROW_TOL = 1e-12

_DIRECT_SOLVE_MAX_N = 2000


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class WeightedGraph:
    """Edge list over states ``0..n-1``; duplicate edges are summed on ingestion."""

    n: int
    edges: list
    directed: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise InputError("graph must have at least one state")
        for u, v, w in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge ({u}, {v}) has an index outside [0, {self.n})")
            if not (w > 0 and np.isfinite(w)):
                raise InputError(f"edge ({u}, {v}) has non-positive weight {w}")

    def weight_matrix(self) -> np.ndarray:
        W = np.zeros((self.n, self.n))
        for u, v, w in self.edges:
            W[u, v] += w
            if not self.directed and u != v:
                W[v, u] += w
        return W

    @property
    def edge_count(self) -> int:
        return len(self.edges)


@dataclass(frozen=True, eq=False)
class DirectedChain:
    """Row-stochastic kernel with its stationary distribution (not necessarily reversible)."""

    pi: np.ndarray
    kernel: np.ndarray

    def __post_init__(self):
        pi = _frozen(self.pi)
        K = _frozen(self.kernel)
        if K.shape != (pi.shape[0],) * 2:
            raise InputError(f"kernel shape {K.shape} does not match pi of length {pi.shape[0]}")
        if np.max(np.abs(K.sum(axis=1) - 1.0)) > ROW_TOL or np.any(K < 0):
            raise InputError("kernel must be row-stochastic")
        if np.any(pi <= 0) or np.max(np.abs(pi @ K - pi)) > STATIONARITY_TOL:
            raise InputError("pi is not a positive stationary distribution of the kernel")
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "kernel", K)

    @property
    def n(self) -> int:
        return self.pi.shape[0]

    def quadratic_form(self, f) -> float:
        """<f, (I - K')f> under pi."""
        f = np.asarray(f, dtype=np.float64)
        return float(self.pi @ (f * f) - self.pi @ (f * (self.kernel @ f)))


@dataclass(frozen=True, eq=False)
class ReversibleChain:
    """A reversible Markov chain.

    Parameters
    ----------
    pi : array_like
        Stationary distribution, strictly positive and summing to one.
    kernel : array_like
        Row-stochastic transition matrix satisfying detailed balance with `pi`.
    flow : array_like, optional
        The edge-flow matrix ``pi(x) K(x, y)``. When omitted it is formed from
        `pi` and `kernel` and symmetrized.

    Raises
    ------
    InputError
        If any of the invariants (stochastic rows, stationarity, detailed
        balance) is violated beyond tolerance.
    """

    pi: np.ndarray
    kernel: np.ndarray
    flow: np.ndarray = field(default=None)

    def __post_init__(self):
        pi = np.asarray(self.pi, dtype=np.float64)
        K = np.asarray(self.kernel, dtype=np.float64)
        n = pi.shape[0]
        if K.shape != (n, n):
            raise InputError(f"kernel shape {K.shape} does not match pi of length {n}")
        if np.any(pi <= 0) or abs(pi.sum() - 1.0) > 1e-12:
            raise InputError("pi must be strictly positive and sum to one")
        if np.any(K < 0) or np.any(K > 1 + ROW_TOL):
            raise InputError("kernel entries must lie in [0, 1]")
        if np.max(np.abs(K.sum(axis=1) - 1.0)) > ROW_TOL:
            raise InputError("kernel rows must sum to one")
        if np.max(np.abs(pi @ K - pi)) > STATIONARITY_TOL:
            raise InputError("pi is not stationary for the kernel")
        F = pi[:, None] * K if self.flow is None else np.asarray(self.flow, dtype=np.float64)
        if np.max(np.abs(F - F.T)) > BALANCE_TOL:
            raise InputError("kernel violates detailed balance")
        object.__setattr__(self, "pi", _frozen(pi))
        object.__setattr__(self, "kernel", _frozen(K))
        object.__setattr__(self, "flow", _frozen(0.5 * (F + F.T)))

    @property
    def n(self) -> int:
        return self.pi.shape[0]

    @cached_property
    def laplacian(self) -> np.ndarray:
        return np.eye(self.n) - self.kernel

    def inner(self, f, g) -> float:
        return float(self.pi @ (np.asarray(f) * np.asarray(g)))

    def dirichlet_form(self, f) -> float:
        """<f, Lf> as the nonnegative edge sum 1/2 sum pi(x)K(x,y)(f(x)-f(y))^2."""
        f = np.asarray(f, dtype=np.float64)
        d = f[:, None] - f[None, :]
        return float(0.5 * np.sum(self.flow * d * d))

    def as_directed(self) -> DirectedChain:
        return DirectedChain(self.pi, self.kernel)


def _reachable(adj, start=0):
    n = adj.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[start] = True
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in np.flatnonzero(adj[x] & ~seen):
            seen[y] = True
            queue.append(y)
    return seen


def _check_strongly_connected(W):
    adj = W > 0
    if not (_reachable(adj).all() and _reachable(adj.T).all()):
        raise NotIrreducible("chain is not irreducible: the graph is not strongly connected")


def stationary_distribution(K, tol=1e-12, max_iter=10**6) -> np.ndarray:
    """Invariant distribution of an irreducible row-stochastic matrix.

    Uses Grassmann-Taksar-Heyman elimination (subtraction free, so accurate
    even for nearly decomposable chains) up to ``n = 2000`` and power
    iteration on the lazy kernel ``(I + K) / 2`` otherwise or as a fallback.
    """
    K = np.asarray(K, dtype=np.float64)
    n = K.shape[0]
    if n == 1:
        return np.ones(1)
    if n <= _DIRECT_SOLVE_MAX_N:
        pi = kernels.gth_stationary(K)
        if np.all(np.isfinite(pi)) and np.all(pi > 0):
            if np.max(np.abs(pi @ K - pi)) <= 1e-10:
                return pi
            start = pi
        else:
            start = np.full(n, 1.0 / n)
    else:
        start = np.full(n, 1.0 / n)
    lazy = 0.5 * (np.eye(n) + K)
    pi = start
    for _ in range(max_iter):
        nxt = pi @ lazy
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - pi)) <= tol:
            pi = nxt
            break
        pi = nxt
    else:
        raise NoConvergence(f"power iteration did not converge in {max_iter} iterations")
    if np.any(pi <= 0) or np.max(np.abs(pi @ K - pi)) > 1e-10:
        raise NoConvergence("stationary distribution residual exceeds 1e-10")
    return pi


def from_graph(g: WeightedGraph):
    """Random-walk chain of a weighted graph.

    Undirected graphs give a :class:`ReversibleChain` with ``pi`` proportional
    to weighted degree; directed graphs give a :class:`DirectedChain`.
    """
    W = g.weight_matrix()
    out = W.sum(axis=1)
    isolated = np.flatnonzero(out <= 0)
    if isolated.size:
        raise IsolatedState(f"state {int(isolated[0])} has no outgoing edge")
    _check_strongly_connected(W)
    K = W / out[:, None]
    if not g.directed:
        total = out.sum()
        return ReversibleChain(out / total, K, flow=W / total)
    return DirectedChain(stationary_distribution(K), K)


def reversibilize(c: DirectedChain) -> ReversibleChain:
    """Additive reversibilization ``K = (K' + K'*) / 2``.

    The pi-adjoint is ``K'*(x, y) = pi(y) K'(y, x) / pi(x)``, so the flow
    matrix of the result is the symmetric part of ``pi(x) K'(x, y)``.
    """
    F = c.pi[:, None] * c.kernel
    F = 0.5 * (F + F.T)
    mass = F.sum(axis=1)
    pi = mass / mass.sum()
    K = F / mass[:, None]
    return ReversibleChain(pi, K, flow=F / mass.sum())


def as_reversible(c) -> ReversibleChain:
    return c if isinstance(c, ReversibleChain) else reversibilize(c)
