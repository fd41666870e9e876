#!/usr/bin/env python3
"""Time the compiled and vectorized kernels on the same inputs.

Each row checks that both backends agree before reporting the speedup.
Compilation happens in a warm-up call that is not timed.

    python3 benchmarks/bench_backends.py [--repeat 3] [--quick]
"""
import argparse
import time

import numpy as np

from heatsse import as_reversible, from_graph
from heatsse.generators import random_chain_kernel, random_graph
from heatsse.kernels import get_backend

NB = get_backend("numba")
NP = get_backend("numpy")


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def walk_inputs(n, t, rng):
    c = as_reversible(from_graph(random_graph(n, rng, density=0.3)))
    members = np.arange(n // 2, dtype=np.int64)
    start_cum = np.cumsum(c.pi[members])
    start_cum /= start_cum[-1]
    cum = np.cumsum(c.kernel, axis=1)
    cum /= cum[:, -1:]
    mask = np.zeros(n, dtype=bool)
    mask[members] = True
    return np.uint64(7), 200_000, float(t), members, start_cum, np.ascontiguousarray(cum), mask


def cases(quick):
    rng = np.random.default_rng(0)
    for n in ([200] if quick else [200, 800]):
        K = random_chain_kernel(n, rng)
        yield f"gth_stationary n={n}", "gth_stationary", (K,), "close"
    for n in ([14] if quick else [14, 18]):
        c = as_reversible(from_graph(random_graph(n, rng)))
        yield f"subset_conductances n={n}", "subset_conductances", (c.pi, c.flow, 0.5), "close"
    c = as_reversible(from_graph(random_graph(600, rng)))
    yield "prefix_cuts n=600", "prefix_cuts", (rng.permutation(600).astype(np.int64), c.flow), "close"
    coeffs = rng.normal(size=(200_000 if quick else 1_000_000, 5))
    basis = rng.normal(size=(40, 5))
    pi = rng.dirichlet(np.ones(40))
    yield f"l1_norms N={coeffs.shape[0]}", "l1_norms", (coeffs, basis, pi), "close"
    for t in ([2.0] if quick else [2.0, 50.0]):
        yield f"stay_walks 2e5 walks t={t:g}", "stay_walks", walk_inputs(60, t, rng), "equal"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args()

    print(f"{'kernel':<34} {'numpy (s)':>10} {'numba (s)':>10} {'speedup':>8}  agree")
    print("-" * 72)
    for label, name, inputs, mode in cases(args.quick):
        f_nb, f_np = getattr(NB, name), getattr(NP, name)
        f_nb(*inputs)  # compile
        t_np, out_np = best_of(lambda: f_np(*inputs), args.repeat)
        t_nb, out_nb = best_of(lambda: f_nb(*inputs), args.repeat)
        if mode == "equal":
            agree = out_np == out_nb
        else:
            a, b = np.asarray(out_np), np.asarray(out_nb)
            fin = np.isfinite(a)
            agree = np.array_equal(fin, np.isfinite(b)) and np.allclose(a[fin], b[fin], rtol=1e-10, atol=1e-13)
        print(f"{label:<34} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x  {'ok' if agree else 'MISMATCH'}")


if __name__ == "__main__":
    main()
