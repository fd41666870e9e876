"""Analytic conductance and sparsity, set conductance, and exact profile oracles."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import kernels
from .chain import ReversibleChain
from .errors import EmptySet, InputError, TooLarge, ZeroFunction

MEASURE_SLACK = 1e-12
TIE_TOL = 1e-13
CONDUCTANCE_ORACLE_MAX_N = 20
SPECTRAL_ORACLE_MAX_N = 16


def as_mask(S, n) -> np.ndarray:
    """Boolean membership mask from a mask or an iterable of state indices."""
    arr = np.asarray(S)
    if arr.dtype == bool:
        if arr.shape != (n,):
            raise InputError(f"mask has shape {arr.shape}, expected ({n},)")
        return arr.copy()
    idx = np.asarray(list(S) if not isinstance(S, np.ndarray) else S, dtype=np.int64).ravel()
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise InputError(f"state indices must lie in [0, {n})")
    mask = np.zeros(n, dtype=bool)
    mask[idx] = True
    return mask


def indices(mask) -> tuple:
    return tuple(int(i) for i in np.flatnonzero(mask))


def _norms(c, f):
    f = np.asarray(f, dtype=np.float64)
    l1 = float(c.pi @ np.abs(f))
    l2sq = float(c.pi @ (f * f))
    if l2sq == 0.0:
        raise ZeroFunction("function is zero in the pi-weighted norm")
    return f, l1, l2sq


def phi(c: ReversibleChain, f) -> float:
    """Analytic conductance ``<f, Lf> / <f, f>``.

    The numerator is evaluated as the edge sum, which is nonnegative by
    construction and free of the cancellation in ``<f,f> - <f,Kf>``.
    """
    f, _, l2sq = _norms(c, f)
    return c.dirichlet_form(f) / l2sq


def mu(c: ReversibleChain, f) -> float:
    """Analytic sparsity ``||f||_1^2 / ||f||_2^2``."""
    _, l1, l2sq = _norms(c, f)
    return l1 * l1 / l2sq


def measure(c: ReversibleChain, S) -> float:
    return float(c.pi[as_mask(S, c.n)].sum())


def phi_set(c: ReversibleChain, S) -> float:
    """Probability that one stationary step from S leaves S."""
    mask = as_mask(S, c.n)
    if not mask.any():
        raise EmptySet("set is empty")
    escaping = c.flow[np.ix_(mask, ~mask)].sum()
    return float(escaping / c.pi[mask].sum())


@dataclass(frozen=True)
class ProfilePoint:
    """Profile value at budget ``r`` with the set or function achieving it."""

    r: float
    value: float
    witness: object
    upper_bound_only: bool = False


def _check_r(r):
    if not 0 < r <= 1:
        raise InputError(f"measure budget r must lie in (0, 1], got {r}")


def _lex_smallest(masks, n):
    return min((indices((m >> np.arange(n)) & 1) for m in masks))


def subset_conductance_table(c: ReversibleChain, r: float = 1.0) -> np.ndarray:
    """Conductance of every subset, indexed by bitmask; ``inf`` where empty or over budget."""
    if c.n > CONDUCTANCE_ORACLE_MAX_N:
        raise TooLarge(f"subset enumeration limited to n <= {CONDUCTANCE_ORACLE_MAX_N}, got {c.n}")
    return kernels.subset_conductances(c.pi, c.flow, r + MEASURE_SLACK)


def conductance_profile_oracle(c: ReversibleChain, r: float) -> ProfilePoint:
    """Exact ``min { phi_set(S) : S nonempty, pi(S) <= r }`` by enumeration.

    Near-ties (within 1e-13) go to the lexicographically smallest index tuple.
    Returns value ``inf`` with an empty witness when no set fits the budget.
    """
    _check_r(r)
    table = subset_conductance_table(c, r)
    best = table.min()
    if not np.isfinite(best):
        return ProfilePoint(r, float("inf"), ())
    ties = np.flatnonzero(table <= best + TIE_TOL)
    S = _lex_smallest(ties, c.n)
    return ProfilePoint(r, phi_set(c, S), S)


def _dirichlet_min_eigs(M, sets):
    """Smallest eigenvalue and eigenvector of M restricted to each index set (all same size)."""
    idx = np.asarray(sets)
    blocks = M[idx[:, :, None], idx[:, None, :]]
    vals, vecs = np.linalg.eigh(blocks)
    return vals[:, 0], vecs[:, :, 0]


def spectral_profile_oracle(c: ReversibleChain, r: float, variant: str = "supp", basis=None) -> ProfilePoint:
    """Spectral profile at budget ``r``.

    ``variant="supp"`` computes the exact
    ``min { <f,Lf>/<f,f> : f >= 0, pi(supp f) <= r }``: for a fixed support S
    the minimizer is the Perron eigenvector of the Dirichlet block of L on S.

    ``variant="mu"`` has no exact oracle. It returns the best heat-propagated
    point mass ``H_s phi_x`` with ``mu <= r`` over all states and a geometric
    time grid, flagged ``upper_bound_only``.
    """
    _check_r(r)
    if variant == "supp":
        if c.n > SPECTRAL_ORACLE_MAX_N:
            raise TooLarge(f"support oracle limited to n <= {SPECTRAL_ORACLE_MAX_N}, got {c.n}")
        s = np.sqrt(c.pi)
        M = np.eye(c.n) - c.flow / np.outer(s, s)
        M = 0.5 * (M + M.T)
        best_val, best_set, best_vec = np.inf, None, None
        for size in range(1, c.n + 1):
            sets = [S for S in combinations(range(c.n), size)
                    if c.pi[list(S)].sum() <= r + MEASURE_SLACK]
            if not sets:
                # measures only grow with size
                break
            vals, vecs = _dirichlet_min_eigs(M, sets)
            # combinations() yields lexicographic order, so the first near-tie is the lex-smallest
            i = int(np.flatnonzero(vals <= vals.min() + TIE_TOL)[0])
            if vals[i] < best_val - TIE_TOL:
                best_val, best_set, best_vec = float(vals[i]), sets[i], vecs[i]
        if best_set is None:
            return ProfilePoint(r, float("inf"), None)
        f = np.zeros(c.n)
        f[list(best_set)] = np.abs(best_vec) / s[list(best_set)]
        return ProfilePoint(r, max(best_val, 0.0), f)
    if variant == "mu":
        from .heat import heat_family_upper_bound
        return heat_family_upper_bound(c, r, basis)
    raise InputError(f"unknown variant {variant!r}; expected 'supp' or 'mu'")
