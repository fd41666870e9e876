"""Brute-force search over a net of the unit sphere in a low eigenspace.

The net is the set of lattice points of spacing ``s / sqrt(m)`` lying in
the shell ``1 - s/2 <= |p| <= 1 + s/2``, pushed radially onto the sphere.
Rounding any unit vector to the lattice moves it by at most ``s / 2`` and
lands in the shell; normalizing at most doubles that, so the result is an
``s``-net.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BadRange, InputError
from .functionals import mu, phi
from .spectral import SpectralBasis, analytic_nullity

DEFAULT_BUDGET = 10**7
TIE_TOL = 1e-13
_CHUNK = 1 << 16


@dataclass(frozen=True)
class NetSpec:
    m: int
    radius: float
    budget: int = DEFAULT_BUDGET
    mode: str = "lattice"
    seed: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise InputError(f"dimension must be positive, got {self.m}")
        if not 0 < self.radius <= 1:
            raise InputError(f"net radius must lie in (0, 1], got {self.radius}")
        if self.budget < 1:
            raise InputError("budget must be at least 1")
        if self.mode not in ("lattice", "random-fallback"):
            raise InputError(f"unknown net mode {self.mode!r}")

    @property
    def spacing(self) -> float:
        return self.radius / math.sqrt(self.m)

    def estimated_size(self) -> float:
        """Lattice points in the shell, approximated by shell volume over cell volume."""
        m, s = self.m, self.radius
        ball = math.pi ** (m / 2) / math.gamma(m / 2 + 1)
        return ball * ((1 + s / 2) ** m - max(0.0, 1 - s / 2) ** m) / self.spacing ** m


@dataclass(frozen=True, eq=False)
class EnumResult:
    g: np.ndarray
    mu_g: float
    phi_g: float
    net_size: int
    exhaustive: bool
    coeffs: np.ndarray
    m: int
    radius: float


def _shell_chunks(spec: NetSpec, chunk=_CHUNK):
    """Yield normalized lattice-shell points in blocks (duplicates along rays are possible)."""
    m, s = spec.m, spec.radius
    h = spec.spacing
    lo2 = (max(0.0, 1 - s / 2) / h) ** 2 - 1e-9
    hi2 = ((1 + s / 2) / h) ** 2 + 1e-9
    J = int(math.floor(math.sqrt(hi2)))
    steps = np.arange(-J, J + 1, dtype=np.int64)
    prefix = np.zeros((1, 0), dtype=np.int64)
    q = np.zeros(1, dtype=np.int64)
    for _ in range(m - 1):
        qq = q[:, None] + steps[None, :] ** 2
        keep = qq <= hi2
        rows, cols = np.nonzero(keep)
        prefix = np.column_stack([prefix[rows], steps[cols]])
        q = qq[rows, cols]
    for lo in range(0, prefix.shape[0], max(1, chunk // (2 * J + 1))):
        P = prefix[lo:lo + max(1, chunk // (2 * J + 1))]
        Pq = q[lo:lo + P.shape[0]]
        tot = Pq[:, None] + steps[None, :] ** 2
        ok = (tot >= lo2) & (tot <= hi2)
        rows, cols = np.nonzero(ok)
        if rows.size == 0:
            continue
        pts = np.column_stack([P[rows], steps[cols]]).astype(np.float64)
        pts /= np.linalg.norm(pts, axis=1)[:, None]
        yield pts


def _random_chunks(spec: NetSpec, chunk=_CHUNK):
    rng = np.random.default_rng(spec.seed)
    left = spec.budget
    while left > 0:
        size = min(chunk, left)
        X = rng.standard_normal((size, spec.m))
        X /= np.linalg.norm(X, axis=1)[:, None]
        left -= size
        yield X


def _lattice_fits(spec: NetSpec) -> bool:
    return spec.mode == "lattice" and spec.estimated_size() <= 2 * spec.budget


def build_net(spec: NetSpec):
    """Materialize the net.

    Returns
    -------
    points : ndarray, shape (N, m)
        Unit vectors; an ``s``-net of the sphere when `exhaustive`.
    exhaustive : bool
        False when the lattice would exceed the budget and ``budget``
        uniformly random unit vectors were returned instead.
    """
    if _lattice_fits(spec):
        blocks, total = [], 0
        for pts in _shell_chunks(spec):
            total += pts.shape[0]
            if total > spec.budget:
                break
            blocks.append(pts)
        else:
            pts = np.concatenate(blocks) if blocks else np.zeros((0, spec.m))
            pts = np.unique(np.round(pts, 12), axis=0)
            return pts, True
    return np.concatenate(list(_random_chunks(spec))), False


def _lex_first(points):
    order = np.lexsort(points.T[::-1])
    return order[0]


def _lex_less(a, b):
    d = np.flatnonzero(a != b)
    return d.size > 0 and a[d[0]] < b[d[0]]


def search_eigenspace(b: SpectralBasis, m: int, radius: float, budget=DEFAULT_BUDGET, seed=0):
    """Minimize ``mu`` of ``sum_i c_i psi_i`` over a net of unit ``c`` in R^m.

    Returns ``(coeffs, net_size, exhaustive)``; near-ties (1e-13) go to the
    lexicographically smaller coefficient vector.
    """
    spec = NetSpec(m, radius, budget)
    basis = np.ascontiguousarray(b.psis[:, :m])
    pi = b.pi
    exhaustive = _lattice_fits(spec)
    while True:
        chunks = _shell_chunks(spec) if exhaustive else _random_chunks(NetSpec(m, radius, budget, "random-fallback", seed))
        best_val, best_c, size = np.inf, None, 0
        for pts in chunks:
            size += pts.shape[0]
            if exhaustive and size > budget:
                break
            l1 = kernels.l1_norms(pts, basis, pi)
            vals = l1 * l1 / np.einsum("ij,ij->i", pts, pts)
            cmin = vals.min()
            near = np.flatnonzero(vals <= cmin + TIE_TOL)
            cand = pts[near[_lex_first(pts[near])]]
            if cmin < best_val - TIE_TOL or (abs(cmin - best_val) <= TIE_TOL and _lex_less(cand, best_c)):
                best_val, best_c = min(cmin, best_val), cand
        else:
            return best_c, size, exhaustive
        exhaustive = False


def enumerate_sparse(b: SpectralBasis, eta: float, eps: float, delta: float,
                     budget=DEFAULT_BUDGET, seed=0) -> EnumResult:
    """Analytically sparse function in the span of eigenfunctions with eigenvalue <= eta.

    Searches a ``0.5 sqrt(eps/eta)``-net of the unit sphere of
    ``U = span(psi_1..psi_m)``, ``m = nullity_eta(L)``, and returns the
    point of smallest analytic sparsity. Every candidate has
    ``phi <= eta``. If some f has ``mu[f] <= delta`` and ``phi[f] <= eps``,
    the result has ``mu <= (sqrt(delta) + 2 sqrt(eps/eta))^2`` (when the
    net is exhaustive).

    Raises
    ------
    BadRange
        Unless ``2 eps <= eta <= 1``, ``0 < eps <= 1/4`` and ``0 < delta <= 1/2``.
    """
    if not (0 < eps <= 0.25 and 0 < delta <= 0.5 and 2 * eps <= eta <= 1):
        raise BadRange(
            f"need 2*eps <= eta <= 1, 0 < eps <= 1/4, 0 < delta <= 1/2; got eta={eta}, eps={eps}, delta={delta}")
    m = analytic_nullity(b, eta)
    radius = 0.5 * math.sqrt(eps / eta)
    coeffs, size, exhaustive = search_eigenspace(b, m, radius, budget, seed)
    coeffs = coeffs / np.linalg.norm(coeffs)
    g = b.psis[:, :m] @ coeffs
    c = b.chain
    return EnumResult(g, mu(c, g), phi(c, g), size, exhaustive, coeffs, m, radius)
