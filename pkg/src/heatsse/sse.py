"""Analytic small-set expansion, sweep rounding, and the set-valued pipeline."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .chain import ReversibleChain
from .enumeration import DEFAULT_BUDGET, enumerate_sparse
from .errors import InputError, NegativeInput, NoFeasibleThreshold, ZeroFunction
from .functionals import MEASURE_SLACK, TIE_TOL, mu, phi, phi_set
from .heat import SparseWitness, nullity_witness, profile_bound
from .spectral import SpectralBasis, analytic_nullity, decompose

GUARANTEE_SLACK = 1e-9


@dataclass(frozen=True)
class SseConfig:
    """Parameters of the combined algorithm; ``B`` defaults to ``64 C^2``."""

    alpha: float
    C: float
    delta: float
    eps: float
    B: float | None = None

    def __post_init__(self):
        if not 0 < self.alpha <= 1 / 3:
            raise InputError(f"alpha must lie in (0, 1/3], got {self.alpha}")
        if not self.C >= 1:
            raise InputError(f"C must be at least 1, got {self.C}")
        if not 0 < self.delta <= 0.5:
            raise InputError(f"delta must lie in (0, 1/2], got {self.delta}")
        if not 0 < self.eps <= 0.25:
            raise InputError(f"eps must lie in (0, 1/4], got {self.eps}")
        if self.B is None:
            object.__setattr__(self, "B", 64.0 * self.C ** 2)
        elif not self.B > 0:
            raise InputError(f"B must be positive, got {self.B}")


@dataclass(frozen=True)
class CutResult:
    S: tuple
    measure: float
    conductance: float
    threshold: float
    candidates: int = 0


@dataclass(frozen=True, eq=False)
class SseResult:
    witness: SparseWitness
    branch: str
    gamma: float
    eta: float
    nullity: int
    nullity_needed: float
    certified: bool
    flags: tuple = field(default=())
    net_size: int = 0
    exhaustive: bool = True


def analytic_sse(b: SpectralBasis, cfg: SseConfig, budget=DEFAULT_BUDGET, seed=0) -> SseResult:
    """Two-branch search for a function with small ``mu`` and small ``phi``.

    ``gamma = B eps / (alpha delta)``, clamped to 1 (flag ``gamma_clamped``).
    High nullity ``nullity_{alpha gamma}(L) >= (4/delta) n^alpha``: the heat
    witness, with ``mu <= delta`` and ``phi <= gamma`` unconditionally.
    Otherwise: eigenspace enumeration at ``eta = alpha gamma``, which meets
    ``mu <= delta (1 + 1/C)`` whenever a planted f with ``mu <= delta`` and
    ``phi <= eps`` exists. The low branch is marked certified only when the
    net was exhaustive and that bound is observed.
    """
    n = b.n
    flags = []
    gamma = cfg.B * cfg.eps / (cfg.alpha * cfg.delta)
    if gamma > 1:
        gamma = 1.0
        flags.append("gamma_clamped")
    eta = cfg.alpha * gamma
    k = analytic_nullity(b, eta)
    need = 4.0 / cfg.delta * n ** cfg.alpha
    if k >= need:
        w, _ = nullity_witness(b, gamma, cfg.alpha)
        return SseResult(w, "high-nullity", gamma, eta, k, need, True, tuple(flags + list(w.flags)))
    if eta < 2 * cfg.eps:
        # only reachable with a clamped gamma; enumeration needs eta >= 2 eps
        eta = min(1.0, 2 * cfg.eps)
        flags.append("eta_raised")
    res = enumerate_sparse(b, eta, cfg.eps, cfg.delta, budget=budget, seed=seed)
    w = SparseWitness(res.g, res.mu_g, res.phi_g, "enumeration")
    certified = res.exhaustive and res.mu_g <= cfg.delta * (1 + 1 / cfg.C) + 1e-9
    if not res.exhaustive:
        flags.append("net_not_exhaustive")
    return SseResult(w, "low-nullity", gamma, eta, k, need, certified, tuple(flags),
                     res.net_size, res.exhaustive)


def sweep_cut(c: ReversibleChain, g, r: float) -> CutResult:
    """Best level set ``{g > theta}`` of measure at most ``4 r``.

    Thresholds range over 0 and the distinct values of g, so at most n sets
    are examined. Among equal conductances (within 1e-13) the smallest
    measure wins. The whole space (conductance 0) is returned only when it
    is the sole feasible set or no proper level set meets the guarantee.
    For ``r >= mu[g]`` the result satisfies ``phi <= 2 sqrt(phi[g])``.

    Raises
    ------
    NegativeInput
        If g has entries below -1e-9.
    NoFeasibleThreshold
        If every nonempty level set is heavier than ``4 r``.
    """
    g = np.asarray(g, dtype=np.float64)
    if g.min() < -1e-9:
        raise NegativeInput(f"sweep needs a nonnegative function; min entry {g.min():.3g}")
    g = np.where(g < 0, 0.0, g)
    if not g.any():
        raise ZeroFunction("sweep needs a nonzero function")
    order = np.argsort(-g, kind="stable")
    vals = g[order]
    cuts = kernels.prefix_cuts(order, c.flow)
    measures = np.cumsum(c.pi[order])
    nxt = np.append(vals[1:], 0.0)
    boundary = np.flatnonzero((vals > nxt) & (vals > 0))
    feasible = boundary[measures[boundary] <= 4 * r + MEASURE_SLACK]
    if feasible.size == 0:
        raise NoFeasibleThreshold(f"no nonempty level set has measure <= 4r = {4 * r:.6g}")
    cond = np.maximum(cuts[feasible], 0.0) / measures[feasible]
    proper = feasible < c.n - 1
    if proper.any() and feasible[-1] == c.n - 1:
        # V itself has conductance 0; use it only if no proper set meets the guarantee
        if cond[proper].min() <= 2 * np.sqrt(phi(c, g)) + GUARANTEE_SLACK:
            feasible, cond = feasible[proper], cond[proper]
    near = feasible[cond <= cond.min() + TIE_TOL]
    # nested family: smaller measure == shorter prefix == higher threshold
    k = int(near[0])
    mask = np.zeros(c.n, dtype=bool)
    mask[order[:k + 1]] = True
    S = tuple(int(i) for i in np.flatnonzero(mask))
    return CutResult(S, float(c.pi[mask].sum()), phi_set(c, mask), float(nxt[k]), int(boundary.size))


def sweep_abs(c: ReversibleChain, g, r: float | None = None) -> CutResult:
    """Sweep ``|g|`` (same mu, no larger phi), budget ``r`` defaulting to ``mu[g]``."""
    g = np.abs(np.asarray(g, dtype=np.float64))
    return sweep_cut(c, g, mu(c, g) if r is None else r)


def sse_sets(c: ReversibleChain, cfg: SseConfig, basis: SpectralBasis | None = None,
             budget=DEFAULT_BUDGET, seed=0):
    """Set-valued pipeline: analytic SSE followed by sweep rounding of ``|g|`` at ``r = mu[g]``.

    Returns ``(CutResult, SseResult)``. The cut has ``pi(T) <= 4 mu[g]`` and
    ``phi[T] <= 2 sqrt(phi[g])``.
    """
    b = basis if basis is not None else decompose(c)
    res = analytic_sse(b, cfg, budget=budget, seed=seed)
    return sweep_abs(c, res.witness.g), res


@dataclass(frozen=True, eq=False)
class CutProfileReport:
    k: int
    A: float
    witness: SparseWitness
    cut: CutResult
    measure_cap: float
    rhs: float
    holds: bool
    oracle_value: float | None = None


def cut_profile_check(b: SpectralBasis, k: int, A: float, oracle: bool = False) -> CutProfileReport:
    """Compose the profile witness with sweep rounding.

    Checks ``pi(T) <= 16 k^(-1+1/A)`` and
    ``phi[T] <= 2 sqrt(A) sqrt(lambda_k log_k n)`` on the produced cut. With
    ``oracle=True`` (n <= 20) also records the exact conductance profile at
    the measure cap, which must not exceed the right-hand side.
    """
    from .functionals import conductance_profile_oracle

    n = b.n
    w = profile_bound(b, k, A)
    cut = sweep_cut(b.chain, w.g, w.mu_g)
    lam_k = max(float(b.lambdas[k - 1]), 0.0)
    rhs = 2 * math.sqrt(A) * math.sqrt(lam_k * math.log(n) / math.log(k))
    cap = min(1.0, 16 * k ** (-1 + 1 / A))
    holds = cut.conductance <= rhs + 1e-9 and cut.measure <= cap + MEASURE_SLACK
    ov = conductance_profile_oracle(b.chain, cap).value if oracle else None
    if ov is not None:
        holds = holds and ov <= rhs + 1e-9
    return CutProfileReport(k, A, w, cut, cap, rhs, holds, ov)

