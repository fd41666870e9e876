"""Vectorized NumPy versions of the loop kernels (no compiler required)."""
import math

import numpy as np

_U53 = 1.0 / 9007199254740992.0
_lgamma = np.frompyfunc(math.lgamma, 1, 1)


def _mix64(z):
    z = z + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _uniform(keys, counters):
    bits = _mix64(keys + counters.astype(np.uint64))
    return (bits >> np.uint64(11)).astype(np.float64) * _U53


def _poisson(keys, counters, lam):
    """Vectorized twin of the compiled sampler; mutates ``counters``."""
    size = keys.shape[0]
    out = np.zeros(size, dtype=np.int64)
    if lam <= 0.0:
        return out
    if lam <= 30.0:
        u = _uniform(keys, counters)
        counters += 1
        p = np.full(size, math.exp(-lam))
        cdf = p.copy()
        k = 0
        active = u > cdf
        while active.any():
            k += 1
            p[active] *= lam / k
            dead = active & (p == 0.0)
            out[active] = k
            active &= ~dead
            cdf[active] += p[active]
            active &= u > cdf
        return out
    slam = math.sqrt(lam)
    loglam = math.log(lam)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    invalpha = 1.1239 + 1.1328 / (b - 3.4)
    vr = 0.9277 - 3.6224 / (b - 2.0)
    pending = np.arange(size)
    with np.errstate(divide="ignore"):
        while pending.size:
            c = counters[pending]
            u = _uniform(keys[pending], c) - 0.5
            v = _uniform(keys[pending], c + 1)
            counters[pending] += 2
            us = 0.5 - np.abs(u)
            k = np.floor((2.0 * a / us + b) * u + lam + 0.43).astype(np.int64)
            accept = (us >= 0.07) & (v <= vr)
            retry = ~accept & ((k < 0) | ((us < 0.013) & (v > us)))
            test = ~accept & ~retry
            if test.any():
                kt = k[test]
                lhs = np.log(v[test]) + math.log(invalpha) - np.log(a / (us[test] ** 2) + b)
                rhs = -lam + kt * loglam - _lgamma(kt + 1.0).astype(np.float64)
                accept[test] = lhs <= rhs
            out[pending[accept]] = k[accept]
            pending = pending[~accept]
    return out


def stay_walks(seed_key, walks, t, start_states, start_cum, cum_kernel, in_set):
    ids = np.arange(walks, dtype=np.uint64)
    keys = _mix64(np.uint64(seed_key) ^ _mix64(ids))
    counters = np.zeros(walks, dtype=np.int64)
    u = _uniform(keys, counters)
    x = start_states[np.searchsorted(start_cum, u, side="right")]
    counters[:] = 1
    tau = _poisson(keys, counters, t)
    ok = np.ones(walks, dtype=bool)
    step = 0
    active = np.flatnonzero(tau > 0)
    while active.size:
        u = _uniform(keys[active], counters[active])
        counters[active] += 1
        nxt = (cum_kernel[x[active]] <= u[:, None]).sum(axis=1)
        x[active] = nxt
        left = ~in_set[nxt]
        ok[active[left]] = False
        step += 1
        active = active[~left & (tau[active] > step)]
    return int(ok.sum())


def gth_stationary(P):
    n = P.shape[0]
    A = np.array(P, dtype=np.float64)
    for k in range(n - 1, 0, -1):
        s = A[k, :k].sum()
        if s <= 0.0:
            return np.full(n, np.nan)
        A[:k, k] /= s
        A[:k, :k] += np.outer(A[:k, k], A[k, :k])
    x = np.zeros(n)
    x[0] = 1.0
    for k in range(1, n):
        x[k] = x[:k] @ A[:k, k]
    return x / x.sum()


def subset_conductances(pi, Q, r_cap, chunk=1 << 14):
    n = pi.shape[0]
    count = 1 << n
    out = np.full(count, np.inf)
    bits = np.arange(n, dtype=np.int64)
    for lo in range(1, count, chunk):
        masks = np.arange(lo, min(lo + chunk, count), dtype=np.int64)
        M = ((masks[:, None] >> bits) & 1).astype(np.float64)
        ps = M @ pi
        cut = ((M @ Q) * (1.0 - M)).sum(axis=1)
        ok = ps <= r_cap
        out[masks[ok]] = cut[ok] / ps[ok]
    return out


def prefix_cuts(order, Q):
    Qo = Q[np.ix_(order, order)]
    inner = np.cumsum(np.cumsum(Qo, axis=0), axis=1).diagonal()
    rows = np.cumsum(Qo.sum(axis=1))
    return rows - inner


def l1_norms(coeffs, basis, pi, chunk=1 << 16):
    out = np.empty(coeffs.shape[0])
    for lo in range(0, coeffs.shape[0], chunk):
        block = coeffs[lo:lo + chunk]
        out[lo:lo + chunk] = np.abs(block @ basis.T) @ pi
    return out
