"""Probability that a continuous-time walk started in S never leaves S.

The walk run for time t is a Poisson(t)-step walk of the jump chain. With
the killed kernel ``K_S f(x) = 1_S(x) E_{y~x}[1_S(y) f(y)]``, its generator
``L_S = I - K_S``, and ``phi'_S = 1_S / sqrt(pi(S)) = sum_i c_i v_i`` in
the eigenbasis of ``L_S``:

    phi[S]  = sum_i c_i^2 lambda_i
    C(t, S) = sum_i c_i^2 exp(-t lambda_i) >= exp(-t phi[S])    (Jensen)
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import kernels
from .chain import ReversibleChain
from .errors import EmptySet, InputError, TooLarge
from .functionals import as_mask, indices, phi_set

RECONSTRUCTION_TOL = 1e-8
EXHAUSTIVE_CAP = 10
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True, eq=False)
class DirichletSpectrum:
    S: tuple
    lambdas: np.ndarray
    vectors: np.ndarray
    coeffs: np.ndarray


@dataclass(frozen=True)
class EscapeReport:
    t: float
    S: tuple
    exact: float
    bound: float
    mc_estimate: float | None = None
    mc_walks: int = 0
    mc_stderr: float = 0.0


def _killed_symmetric(c: ReversibleChain, mask):
    """``D^{1/2} K_S D^{-1/2}``: the pi-self-adjoint killed kernel as a symmetric matrix."""
    s = np.sqrt(c.pi)
    A = c.flow / np.outer(s, s)
    keep = mask.astype(np.float64)
    A = A * np.outer(keep, keep)
    return 0.5 * (A + A.T)


def dirichlet_spectrum(c: ReversibleChain, S) -> DirichletSpectrum:
    """Eigendecomposition of ``L_S`` on all n states and the coefficients of ``phi'_S``.

    States outside S contribute eigenvalue 1 (their rows of ``K_S`` vanish).
    """
    mask = as_mask(S, c.n)
    if not mask.any():
        raise EmptySet("set is empty")
    s = np.sqrt(c.pi)
    A = _killed_symmetric(c, mask)
    lam, U = np.linalg.eigh(np.eye(c.n) - A)
    phi_prime = mask / np.sqrt(c.pi[mask].sum())
    coeffs = U.T @ (s * phi_prime)
    vectors = U / s[:, None]
    recon = vectors @ coeffs - phi_prime
    err = np.sqrt(c.pi @ (recon * recon))
    if err > RECONSTRUCTION_TOL:
        raise AssertionError(f"phi'_S reconstruction residual {err:.3g}")
    return DirichletSpectrum(indices(mask), lam, vectors, coeffs)


def phi_from_spectrum(d: DirichletSpectrum) -> float:
    return float(np.sum(d.coeffs ** 2 * d.lambdas))


def exact_stay_probability(d: DirichletSpectrum, t: float) -> float:
    if t < 0:
        raise InputError(f"t must be nonnegative, got {t}")
    value = float(np.sum(d.coeffs ** 2 * np.exp(-t * d.lambdas)))
    return min(1.0, max(0.0, value))


def poisson_stay_probability(c: ReversibleChain, S, t: float, tail=1e-12) -> float:
    """``E_{tau ~ Poisson(t)} <phi'_S, K_S^tau phi'_S>`` by truncated series (independent of eigensolvers)."""
    mask = as_mask(S, c.n)
    if not mask.any():
        raise EmptySet("set is empty")
    KS = c.kernel * np.outer(mask, mask)
    v = mask / np.sqrt(c.pi[mask].sum())
    w = v.copy()
    top = int(stats.poisson.isf(tail, t)) + 1 if t > 0 else 0
    pmf = stats.poisson.pmf(np.arange(top + 1), t) if t > 0 else np.ones(1)
    total = 0.0
    for tau in range(top + 1):
        total += pmf[tau] * float(c.pi @ (v * w))
        w = KS @ w
    return total


def _seed_key(seed: int) -> np.uint64:
    return np.uint64(seed & _MASK64)


def mc_stay_probability(c: ReversibleChain, S, t: float, walks: int, seed: int = 0, backend=None):
    """Monte-Carlo estimate of the stay probability.

    Each walk starts at ``x ~ pi`` conditioned on S, draws ``tau ~ Poisson(t)``
    and takes tau kernel steps; it counts as staying if every visited state
    lies in S. Walk ``w`` draws only from the substream keyed by
    ``(seed, w)``, so results do not depend on scheduling or thread count.

    Returns
    -------
    (estimate, stderr)
        Sample mean and binomial standard error.
    """
    if walks < 1:
        raise InputError("walks must be at least 1")
    if t < 0:
        raise InputError(f"t must be nonnegative, got {t}")
    mask = as_mask(S, c.n)
    if not mask.any():
        raise EmptySet("set is empty")
    impl = kernels if backend is None else kernels.get_backend(backend)
    members = np.flatnonzero(mask).astype(np.int64)
    start_cum = np.cumsum(c.pi[members])
    start_cum /= start_cum[-1]
    start_cum[-1] = 1.0
    cum = np.cumsum(c.kernel, axis=1)
    cum /= cum[:, -1:]
    cum[:, -1] = 1.0
    stays = impl.stay_walks(_seed_key(seed), int(walks), float(t), members,
                            start_cum, np.ascontiguousarray(cum), mask)
    p = stays / walks
    return p, float(np.sqrt(p * (1 - p) / walks))


def escape_report(c: ReversibleChain, S, t: float, walks: int = 0, seed: int = 0) -> EscapeReport:
    d = dirichlet_spectrum(c, S)
    exact = exact_stay_probability(d, t)
    bound = float(np.exp(-t * phi_set(c, S)))
    if walks:
        est, err = mc_stay_probability(c, S, t, walks, seed)
        return EscapeReport(t, d.S, exact, bound, est, walks, err)
    return EscapeReport(t, d.S, exact, bound)


@dataclass(frozen=True)
class BoundVerification:
    n: int
    t_grid: tuple
    checked: int
    violations: int
    min_slack: float
    min_slack_set: tuple
    min_slack_t: float
    max_identity_error: float
    singleton_equality_error: float

    @property
    def holds(self) -> bool:
        return self.violations == 0


def verify_bound(c: ReversibleChain, t_grid, exhaustive_cap: int = EXHAUSTIVE_CAP, tol=1e-9) -> BoundVerification:
    """Check ``C(t, S) >= exp(-t phi[S])`` for every nonempty S and every t in the grid.

    Also records the largest gap between ``sum c_i^2 lambda_i`` and the
    directly counted ``phi_set(S)``, and the largest deviation from equality
    over singletons without a self-loop (where the bound is tight).
    """
    n = c.n
    if n > exhaustive_cap:
        raise TooLarge(f"exhaustive verification limited to n <= {exhaustive_cap}, got {n}")
    ts = np.asarray(list(t_grid), dtype=np.float64)
    s = np.sqrt(c.pi)
    A = c.flow / np.outer(s, s)
    A = 0.5 * (A + A.T)
    masks = ((np.arange(1, 1 << n)[:, None] >> np.arange(n)) & 1).astype(bool)
    keep = masks.astype(np.float64)
    blocks = np.eye(n) - A[None] * keep[:, :, None] * keep[:, None, :]
    lam, U = np.linalg.eigh(blocks)
    phi_prime = keep * s / np.sqrt(keep @ c.pi)[:, None]
    coeffs2 = np.einsum("bij,bi->bj", U, phi_prime) ** 2
    phi_spec = np.einsum("bj,bj->b", coeffs2, lam)
    flow_out = np.einsum("bi,ij,bj->b", keep, c.flow, 1 - keep)
    phi_direct = flow_out / (keep @ c.pi)
    exact = np.clip(np.einsum("bj,btj->bt", coeffs2, np.exp(-ts[None, :, None] * lam[:, None, :])), 0, 1)
    bound = np.exp(-ts[None, :] * phi_direct[:, None])
    slack = exact - bound
    i, j = np.unravel_index(np.argmin(slack), slack.shape)
    single = (masks.sum(axis=1) == 1)
    no_loop = single & (np.diag(c.kernel)[np.argmax(masks, axis=1)] == 0)
    sing_err = float(np.abs(slack[no_loop]).max()) if no_loop.any() else 0.0
    return BoundVerification(
        n=n, t_grid=tuple(float(t) for t in ts), checked=int(slack.size),
        violations=int(np.count_nonzero(slack < -tol)),
        min_slack=float(slack[i, j]), min_slack_set=indices(masks[i]), min_slack_t=float(ts[j]),
        max_identity_error=float(np.abs(phi_spec - phi_direct).max()),
        singleton_equality_error=sing_err,
    )
