"""Heat-kernel trace criterion and the sparse witnesses it certifies.

If ``tr(H_t) - tr(L H_t) / gamma >= Delta`` for some ``t > 0``, then some
state ``x0`` has ``<g, g> - <g, Lg> / gamma >= Delta`` for
``g = H_{t/2} phi_x0``. That ``g`` is nonnegative with ``||g||_1 = 1``, so
``mu[g] <= 1 / Delta`` and ``phi[g] <= gamma``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import CertificateFails, GammaOutOfRange, InputError, PreconditionFails
from .functionals import ProfilePoint, mu, phi
from .spectral import SpectralBasis, analytic_nullity, decompose, heat_apply, point_mass

HOLD_SLACK = 1e-12


@dataclass(frozen=True)
class TraceCertificate:
    t: float
    gamma: float
    delta_cap: float
    trace_value: float
    holds: bool


@dataclass(frozen=True, eq=False)
class SparseWitness:
    g: np.ndarray
    mu_g: float
    phi_g: float
    origin: str
    x0: int | None = None
    certificate: TraceCertificate | None = None
    flags: tuple = field(default=())


def _check_params(t, gamma):
    if not t > 0:
        raise InputError(f"t must be positive, got {t}")
    if not 0 < gamma <= 1:
        raise InputError(f"gamma must lie in (0, 1], got {gamma}")


def trace_condition(b: SpectralBasis, t: float, gamma: float) -> float:
    """``tr(H_t) - tr(L H_t) / gamma = sum_i (1 - lambda_i / gamma) exp(-t lambda_i)``."""
    if t < 0:
        raise InputError(f"t must be nonnegative, got {t}")
    if not 0 < gamma <= 1:
        raise InputError(f"gamma must lie in (0, 1], got {gamma}")
    lam = b.lambdas
    return float(np.sum((1.0 - lam / gamma) * np.exp(-t * lam)))


def certificate(b: SpectralBasis, t: float, gamma: float, delta_cap: float) -> TraceCertificate:
    value = trace_condition(b, t, gamma)
    return TraceCertificate(t, gamma, delta_cap, value, value >= delta_cap - HOLD_SLACK)


def per_state_diagnostic(b: SpectralBasis, t: float, gamma: float) -> np.ndarray:
    """``d(x) = pi(x) sum_i (1 - lambda_i/gamma) exp(-t lambda_i) psi_i(x)^2``; sums to the trace value."""
    weights = (1.0 - b.lambdas / gamma) * np.exp(-t * b.lambdas)
    return b.pi * ((b.psis * b.psis) @ weights)


def heat_witness(b: SpectralBasis, t: float, gamma: float, delta_cap: float) -> SparseWitness:
    """Heat-propagated point mass certified by the trace criterion.

    The start state maximizes ``d(x) / pi(x) = <g_x, g_x> - <g_x, L g_x> / gamma``
    (ties to the lowest index). Since the pi-average of that quantity is the
    trace value, the maximizer reaches at least ``delta_cap``.

    Raises
    ------
    CertificateFails
        If the trace value is below `delta_cap`.
    """
    _check_params(t, gamma)
    if not delta_cap > 0:
        raise InputError(f"Delta must be positive, got {delta_cap}")
    cert = certificate(b, t, gamma, delta_cap)
    if not cert.holds:
        raise CertificateFails(
            f"trace value {cert.trace_value:.6g} < Delta = {delta_cap:.6g} at t={t:.6g}, gamma={gamma:.6g}")
    flags = ()
    if delta_cap < 1:
        flags = ("delta_below_one",)
        warnings.warn("Delta < 1: the witness bound mu <= 1/Delta is vacuous", stacklevel=2)
    score = per_state_diagnostic(b, t, gamma) / b.pi
    x0 = int(np.argmax(score))
    g = heat_apply(b, t / 2, point_mass(b.pi, x0))
    # exact heat flow is positivity preserving; clear eigenbasis round-off only
    noise = 1e-9 * max(1.0, np.abs(g).max())
    if g.min() < -noise:
        raise AssertionError(f"heat flow produced a negative entry {g.min():.3g}")
    g = np.where(g < 0, 0.0, g)
    c = b.chain
    return SparseWitness(g, mu(c, g), phi(c, g), "heat", x0, cert, flags)


def t_grid(n: int, gamma: float) -> list:
    """Candidate horizons ``2^j / gamma`` for ``j = -3 .. ceil(log2 ln n) + 1`` plus ``ln(n) / gamma``."""
    top = math.ceil(math.log2(math.log(n))) + 1 if n > 2 else 1
    grid = {2.0 ** j / gamma for j in range(-3, top + 1)}
    if n > 1:
        grid.add(math.log(n) / gamma)
    return sorted(grid)


def best_certificate(b: SpectralBasis, gamma: float, delta_cap: float) -> TraceCertificate:
    """Largest trace value over :func:`t_grid`; ties go to the smaller t."""
    best = None
    for t in t_grid(b.n, gamma):
        cert = certificate(b, t, gamma, delta_cap)
        if best is None or cert.trace_value > best.trace_value:
            best = cert
    return best


def nullity_bound(n: int, k: int, alpha: float) -> float:
    """Lower bound ``k(1 - alpha) n^-alpha - 1/(e ln n)`` on the trace value at ``t = ln(n)/gamma``."""
    return k * (1 - alpha) * n ** (-alpha) - 1.0 / (math.e * math.log(n))


def nullity_witness(b: SpectralBasis, gamma: float, alpha: float):
    """Witness from large analytic nullity.

    With ``k = nullity_{alpha gamma}(L) >= n^alpha / ln n``, runs the heat
    witness at ``t = ln(n) / gamma`` and ``Delta = k / (4 n^alpha)``, giving
    ``mu[g] <= 4 n^alpha / k`` and ``phi[g] <= gamma``.

    Returns
    -------
    (SparseWitness, TraceCertificate)
    """
    n = b.n
    if n < 2:
        raise InputError("need at least two states")
    if not 0 < gamma <= 1:
        raise InputError(f"gamma must lie in (0, 1], got {gamma}")
    if not 0 < alpha <= 1 / 3:
        raise InputError(f"alpha must lie in (0, 1/3], got {alpha}")
    k = analytic_nullity(b, alpha * gamma)
    need = n ** alpha / math.log(n)
    if k < need:
        raise PreconditionFails(f"nullity {k} < n^alpha / ln n = {need:.4g}")
    t = math.log(n) / gamma
    delta_cap = k / (4 * n ** alpha)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        w = heat_witness(b, t, gamma, delta_cap)
    return w, w.certificate


def alt_nullity_witness(b: SpectralBasis, gamma: float, alpha: float, delta: float):
    """If ``nullity_{alpha gamma}(L) >= (4/delta) n^alpha``, a witness with ``mu <= delta``, ``phi <= gamma``."""
    if not 0 < delta <= 1:
        raise InputError(f"delta must lie in (0, 1], got {delta}")
    k = analytic_nullity(b, alpha * gamma)
    need = 4 / delta * b.n ** alpha
    if k < need:
        raise PreconditionFails(f"nullity {k} < (4/delta) n^alpha = {need:.4g}")
    return nullity_witness(b, gamma, alpha)


def profile_parameters(b: SpectralBasis, k: int, A: float):
    """``alpha = 1/(A log_k n)`` and ``gamma = A lambda_k log_k n``."""
    n = b.n
    if A < 3:
        raise InputError(f"A must be at least 3, got {A}")
    if not 2 <= k <= n:
        raise InputError(f"k must lie in [2, n={n}], got {k}")
    log_k_n = math.log(n) / math.log(k)
    lam_k = max(float(b.lambdas[k - 1]), 0.0)
    return 1.0 / (A * log_k_n), A * lam_k * log_k_n


def profile_bound(b: SpectralBasis, k: int, A: float) -> SparseWitness:
    """Constructive witness for the spectral profile bound at measure ``4 k^(-1+1/A)``.

    Raises
    ------
    GammaOutOfRange
        If ``A lambda_k log_k n > 1``: the trace criterion needs gamma <= 1.
    """
    alpha, gamma = profile_parameters(b, k, A)
    if gamma > 1:
        raise GammaOutOfRange(
            f"A*lambda_k*log_k(n) = {gamma:.4g} exceeds 1; the heat criterion needs gamma <= 1 "
            f"(lambda_{k} = {b.lambdas[k - 1]:.4g} is too large for this k and A)")
    # lambda_k == 0 only up to round-off for irreducible chains; keep gamma positive
    gamma = max(gamma, np.finfo(float).tiny)
    w, _ = nullity_witness(b, gamma, alpha)
    return w


def heat_family_upper_bound(c, r: float, basis: SpectralBasis | None = None, times=None) -> ProfilePoint:
    """Upper bound on ``min { phi[f] : mu[f] <= r }`` from heat-propagated point masses."""
    b = basis if basis is not None else decompose(c)
    if times is None:
        times = [0.0] + list(np.geomspace(1e-3, 1e3, 61))
    best_val, best_f = float("inf"), None
    for s in times:
        for x in range(c.n):
            f = heat_apply(b, s, point_mass(c.pi, x))
            f = np.where(f < 0, 0.0, f)
            if mu(c, f) <= r + 1e-12:
                val = phi(c, f)
                if val < best_val:
                    best_val, best_f = val, f
    return ProfilePoint(r, best_val, best_f, upper_bound_only=True)
