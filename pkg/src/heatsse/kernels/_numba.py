"""Compiled loop kernels.

Every function here has a vectorized twin in ``_numpy`` with the same
signature and (up to floating-point summation order) the same output.
The random-walk kernel is bit-identical across backends because both
draw from the same counter-based stream.
"""
import math
import os

import numpy as np
from numba import config, njit, prange

if "NUMBA_THREADING_LAYER" not in os.environ:
    # the bundled TBB is often too old; avoid the warning and use omp/workqueue
    config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

_U53 = 1.0 / 9007199254740992.0  # 2**-53


@njit(cache=True)
def _mix64(z):
    z = z + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _uniform(key, counter):
    bits = _mix64(key + np.uint64(counter))
    return float(bits >> np.uint64(11)) * _U53


@njit(cache=True)
def _walk_key(seed_key, walk):
    return _mix64(seed_key ^ _mix64(np.uint64(walk)))


@njit(cache=True)
def _poisson(key, counter, lam):
    """Return (sample, next_counter)."""
    if lam <= 0.0:
        return 0, counter
    if lam <= 30.0:
        u = _uniform(key, counter)
        counter += 1
        k = 0
        p = math.exp(-lam)
        cdf = p
        while u > cdf:
            k += 1
            p *= lam / k
            if p == 0.0:
                break
            cdf += p
        return k, counter
    # transformed rejection (PTRS)
    slam = math.sqrt(lam)
    loglam = math.log(lam)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    invalpha = 1.1239 + 1.1328 / (b - 3.4)
    vr = 0.9277 - 3.6224 / (b - 2.0)
    while True:
        u = _uniform(key, counter) - 0.5
        v = _uniform(key, counter + 1)
        counter += 2
        us = 0.5 - abs(u)
        k = int(math.floor((2.0 * a / us + b) * u + lam + 0.43))
        if us >= 0.07 and v <= vr:
            return k, counter
        if k < 0 or (us < 0.013 and v > us):
            continue
        if (math.log(v) + math.log(invalpha) - math.log(a / (us * us) + b)
                <= -lam + k * loglam - math.lgamma(k + 1.0)):
            return k, counter


@njit(cache=True, parallel=True)
def stay_walks(seed_key, walks, t, start_states, start_cum, cum_kernel, in_set):
    """Count walks that never leave the set during a Poisson(t)-step walk."""
    total = 0
    for w in prange(walks):
        key = _walk_key(seed_key, w)
        u = _uniform(key, 0)
        x = start_states[np.searchsorted(start_cum, u, side="right")]
        tau, counter = _poisson(key, 1, t)
        ok = 1
        for _ in range(tau):
            u = _uniform(key, counter)
            counter += 1
            x = np.searchsorted(cum_kernel[x], u, side="right")
            if not in_set[x]:
                ok = 0
                break
        total += ok
    return total


@njit(cache=True)
def gth_stationary(P):
    n = P.shape[0]
    A = P.copy()
    for k in range(n - 1, 0, -1):
        s = 0.0
        for j in range(k):
            s += A[k, j]
        if s <= 0.0:
            return np.full(n, np.nan)
        for i in range(k):
            A[i, k] /= s
        for i in range(k):
            aik = A[i, k]
            if aik != 0.0:
                for j in range(k):
                    A[i, j] += aik * A[k, j]
    x = np.zeros(n)
    x[0] = 1.0
    for k in range(1, n):
        acc = 0.0
        for i in range(k):
            acc += x[i] * A[i, k]
        x[k] = acc
    return x / x.sum()


@njit(cache=True)
def subset_conductances(pi, Q, r_cap):
    n = pi.shape[0]
    count = 1 << n
    out = np.full(count, np.inf)
    members = np.empty(n, dtype=np.int64)
    others = np.empty(n, dtype=np.int64)
    for mask in range(1, count):
        ps = 0.0
        for x in range(n):
            if (mask >> x) & 1:
                ps += pi[x]
        if ps > r_cap:
            continue
        a = 0
        b = 0
        for x in range(n):
            if (mask >> x) & 1:
                members[a] = x
                a += 1
            else:
                others[b] = x
                b += 1
        cut = 0.0
        for i in range(a):
            row = members[i]
            for j in range(b):
                cut += Q[row, others[j]]
        out[mask] = cut / ps
    return out


@njit(cache=True)
def prefix_cuts(order, Q):
    n = order.shape[0]
    inside = np.zeros(n)
    cuts = np.empty(n)
    cut = 0.0
    for k in range(n):
        x = order[k]
        rowsum = 0.0
        for y in range(n):
            rowsum += Q[x, y]
        cut += rowsum - Q[x, x] - 2.0 * inside[x]
        cuts[k] = cut
        for y in range(n):
            inside[y] += Q[y, x]
    return cuts


@njit(cache=True)
def l1_norms(coeffs, basis, pi):
    N, m = coeffs.shape
    n = basis.shape[0]
    out = np.empty(N)
    for p in range(N):
        acc = 0.0
        for x in range(n):
            v = 0.0
            for i in range(m):
                v += basis[x, i] * coeffs[p, i]
            acc += pi[x] * abs(v)
        out[p] = acc
    return out
