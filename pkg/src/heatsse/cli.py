"""Command-line interface.

Each command prints one JSON report on stdout and a short human summary on
stderr. Exit status: 0 success, 2 bad input or failed precondition, 3 when
a proven inequality fails beyond tolerance.
"""
from __future__ import annotations

import argparse
import math
import sys
import time

import numpy as np

from . import kernels
from .chain import DirectedChain, from_graph, reversibilize
from .errors import GuaranteeViolation, HeatSSEError, InputError, NoFeasibleThreshold
from .escape import EXHAUSTIVE_CAP, escape_report, verify_bound
from .functionals import conductance_profile_oracle, indices, spectral_profile_oracle
from .graphio import load_graph
from .heat import profile_bound, profile_parameters
from .report import dumps
from .spectral import analytic_nullity, decompose, heat_trace, laplacian_heat_trace
from .sse import SseConfig, analytic_sse, sweep_abs, cut_profile_check

SPECTRUM_SHOWN = 32
GUARANTEE_TOL = 1e-9


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _indices(text):
    try:
        return sorted({int(v) for v in text.split(",") if v.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated state indices, got {text!r}") from None


def _load(path):
    g = load_graph(path)
    c = from_graph(g)
    reversibilized = isinstance(c, DirectedChain)
    if reversibilized:
        c = reversibilize(c)
    summary = {
        "path": str(path),
        "n": g.n,
        "edges": g.edge_count,
        "directed": g.directed,
        "reversibilized": reversibilized,
    }
    return c, decompose(c), summary


def _spectrum(b):
    return {"n": b.n, "eigenvalues": b.lambdas[:SPECTRUM_SHOWN]}


def _witness(w):
    return {"origin": w.origin, "x0": w.x0, "mu": w.mu_g, "phi": w.phi_g, "values": w.g}


def _cut(cut):
    return {"S": list(cut.S), "measure": cut.measure, "conductance": cut.conductance,
            "threshold": cut.threshold, "candidates": cut.candidates}


def cmd_analyze(args):
    c, b, summary = _load(args.path)
    payload = {
        "nullity": [{"eta": eta, "nullity": analytic_nullity(b, eta)} for eta in args.eta],
        "heat_traces": [{"t": t, "trace": heat_trace(b, t), "laplacian_trace": laplacian_heat_trace(b, t)}
                        for t in args.t],
        "spectral_gap": float(b.lambdas[1]) if b.n > 1 else 0.0,
    }
    lines = [f"n={b.n}  lambda_2={payload['spectral_gap']:.6g}"]
    lines += [f"nullity_{row['eta']:g} = {row['nullity']}" for row in payload["nullity"]]
    return summary, b, payload, {}, lines


def cmd_sse(args):
    c, b, summary = _load(args.path)
    cfg = SseConfig(args.alpha, args.cparam, args.delta, args.eps)
    res = analytic_sse(b, cfg, seed=args.seed)
    w = res.witness
    payload = {
        "config": {"alpha": cfg.alpha, "C": cfg.C, "delta": cfg.delta, "eps": cfg.eps, "B": cfg.B},
        "branch": res.branch,
        "gamma": res.gamma,
        "eta": res.eta,
        "nullity": res.nullity,
        "nullity_needed": res.nullity_needed,
        "witness": _witness(w),
        # the constant hidden in phi[g] = O(C^2 / (alpha delta)) eps, as measured
        "phi_over_eps": w.phi_g / cfg.eps,
        "net_size": res.net_size,
    }
    cert = {"certified": res.certified, "exhaustive": res.exhaustive,
            "gamma_clamped": "gamma_clamped" in res.flags, "flags": list(res.flags)}
    violations = []
    if res.branch == "high-nullity":
        if w.mu_g > cfg.delta + GUARANTEE_TOL or w.phi_g > res.gamma + GUARANTEE_TOL:
            violations.append("high-nullity witness exceeds (delta, gamma)")
    elif w.phi_g > res.eta + GUARANTEE_TOL:
        violations.append("enumeration witness has phi > eta")
    lines = [f"branch={res.branch} gamma={res.gamma:.6g} mu[g]={w.mu_g:.6g} phi[g]={w.phi_g:.6g}"
             f" certified={res.certified}"]
    if args.round:
        try:
            cut = sweep_abs(c, w.g)
        except NoFeasibleThreshold as exc:
            raise GuaranteeViolation(str(exc)) from None
        payload["cut"] = _cut(cut)
        bound = 2 * math.sqrt(w.phi_g)
        payload["cut"]["conductance_bound"] = bound
        payload["cut"]["measure_bound"] = 4 * w.mu_g
        if cut.conductance > bound + GUARANTEE_TOL or cut.measure > 4 * w.mu_g + 1e-12:
            violations.append("sweep cut exceeds 2 sqrt(phi[g]) or 4 mu[g]")
        lines.append(f"cut |T|={len(cut.S)} pi(T)={cut.measure:.6g} phi(T)={cut.conductance:.6g}")
    return summary, b, payload, cert, lines, violations


def cmd_escape(args):
    c, b, summary = _load(args.path)
    ts = args.t
    if args.exhaustive:
        v = verify_bound(c, ts, exhaustive_cap=EXHAUSTIVE_CAP)
        payload = {"mode": "exhaustive", "verification": {
            "t_grid": list(v.t_grid), "checked": v.checked, "violations": v.violations,
            "min_slack": v.min_slack, "min_slack_set": list(v.min_slack_set), "min_slack_t": v.min_slack_t,
            "max_identity_error": v.max_identity_error,
            "singleton_equality_error": v.singleton_equality_error}}
        violations = [] if v.holds else [f"{v.violations} (S, t) pairs violate the escape bound"]
        lines = [f"checked {v.checked} (S, t) pairs, min slack {v.min_slack:.3g}"]
        return summary, b, payload, {"bound_holds": v.holds}, lines, violations
    if args.set is None:
        raise InputError("--set is required unless --exhaustive is given")
    if not args.set or max(args.set) >= c.n:
        raise InputError(f"--set indices must lie in [0, {c.n})")
    reports, violations, lines = [], [], []
    for t in ts:
        r = escape_report(c, args.set, t, walks=args.walks, seed=args.seed)
        reports.append({"t": r.t, "S": list(r.S), "exact": r.exact, "bound": r.bound,
                        "mc_estimate": r.mc_estimate, "mc_walks": r.mc_walks, "mc_stderr": r.mc_stderr})
        if r.exact < r.bound - GUARANTEE_TOL:
            violations.append(f"exact stay probability below exp(-t phi[S]) at t={t}")
        mc = "" if r.mc_estimate is None else f" mc={r.mc_estimate:.6g}+-{r.mc_stderr:.2g}"
        lines.append(f"t={t:g} exact={r.exact:.6g} bound={r.bound:.6g}{mc}")
    return summary, b, {"mode": "set", "reports": reports}, {"bound_holds": not violations}, lines, violations


def cmd_profile(args):
    c, b, summary = _load(args.path)
    k, A = args.k, args.A
    alpha, gamma = profile_parameters(b, k, A)
    w = profile_bound(b, k, A)
    rep = cut_profile_check(b, k, A, oracle=args.oracle)
    mu_cap = 4 * k ** (-1 + 1 / A)
    payload = {
        "k": k, "A": A, "alpha": alpha, "gamma": gamma, "lambda_k": float(b.lambdas[k - 1]),
        "profile_witness": _witness(w),
        "profile_bound": {"mu_cap": mu_cap, "phi_cap": gamma},
        "cut_profile": {"cut": _cut(rep.cut), "measure_cap": rep.measure_cap, "rhs": rep.rhs,
                      "holds": rep.holds, "oracle_value": rep.oracle_value},
    }
    violations = []
    if w.mu_g > mu_cap + GUARANTEE_TOL or w.phi_g > gamma + GUARANTEE_TOL:
        violations.append("profile witness exceeds its bound")
    if not rep.holds:
        violations.append("composed conductance bound failed")
    if args.oracle:
        r = min(1.0, mu_cap)
        oracle = {"conductance_profile": conductance_profile_oracle(c, r)}
        if c.n <= 16:
            supp = float(c.pi[w.g > 0].sum())
            oracle["spectral_profile_supp"] = spectral_profile_oracle(c, r, "supp")
            oracle["spectral_profile_at_witness_support"] = spectral_profile_oracle(c, min(1.0, supp), "supp")
        payload["oracle"] = {
            name: {"r": p.r, "value": p.value,
                   "witness": list(p.witness) if isinstance(p.witness, tuple) else p.witness}
            for name, p in oracle.items()}
        at_supp = oracle.get("spectral_profile_at_witness_support")
        if at_supp is not None and at_supp.value > w.phi_g + GUARANTEE_TOL:
            violations.append("support-profile oracle exceeds the witness's conductance")
    lines = [f"k={k} A={A:g}: mu[g]={w.mu_g:.6g} <= {mu_cap:.6g}, phi[g]={w.phi_g:.6g} <= {gamma:.6g}",
             f"cut pi(T)={rep.cut.measure:.6g} phi(T)={rep.cut.conductance:.6g} rhs={rep.rhs:.6g}"]
    return summary, b, payload, {"cut_profile_holds": rep.holds}, lines, violations


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("path", help="graph file: edge list or JSON")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads for compiled kernels (default: all cores)")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")

    p = argparse.ArgumentParser(prog="heatsse", description="Heat-kernel spectral tools for small-set expansion.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="spectrum, analytic nullity, heat traces")
    a.add_argument("--eta", type=_floats, default=[0.0, 0.01, 0.1, 0.5, 1.0])
    a.add_argument("--t", type=_floats, default=[0.5, 1.0, 2.0, 5.0])
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("sse", parents=[common], help="analytic small-set expansion")
    s.add_argument("--alpha", type=float, default=1 / 3)
    s.add_argument("--cparam", type=float, default=1.0)
    s.add_argument("--delta", type=float, required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--round", action="store_true", help="sweep-round the witness to a set")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_sse)

    e = sub.add_parser("escape", parents=[common], help="continuous-time walk escape bound")
    e.add_argument("--set", type=_indices, default=None, help="comma-separated state indices")
    e.add_argument("--t", type=_floats, default=[0.1, 0.5, 1.0, 3.0, 10.0])
    e.add_argument("--walks", type=int, default=10000)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--exhaustive", action="store_true", help=f"check every subset (n <= {EXHAUSTIVE_CAP})")
    e.set_defaults(func=cmd_escape)

    f = sub.add_parser("profile", parents=[common], help="spectral profile bound and conductance check")
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--A", type=float, default=3.0)
    f.add_argument("--oracle", action="store_true", help="exact profile oracles (small n)")
    f.set_defaults(func=cmd_profile)
    return p


def _echo(args):
    skip = {"func", "timing", "threads"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def _set_threads(threads):
    if threads is None or kernels.BACKEND != "numba":
        return
    import numba
    numba.set_num_threads(max(1, min(threads, numba.config.NUMBA_NUM_THREADS)))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        _set_threads(args.threads)
        out = args.func(args)
    except GuaranteeViolation as exc:
        print(f"heatsse: guarantee violated: {exc}", file=sys.stderr)
        return 3
    except NoFeasibleThreshold as exc:
        print(f"heatsse: internal error: {exc}", file=sys.stderr)
        return 3
    except (InputError, HeatSSEError) as exc:
        print(f"heatsse: error: {exc}", file=sys.stderr)
        return 2
    if len(out) == 5:
        summary, b, payload, cert, lines = out
        violations = []
    else:
        summary, b, payload, cert, lines, violations = out
    report = {
        "command": args.command,
        "args": _echo(args),
        "input": summary,
        "spectrum": _spectrum(b),
        "payload": payload,
        "certification": dict(cert, violations=violations),
        "seed": getattr(args, "seed", None),
        "backend": kernels.BACKEND,
    }
    if args.timing:
        report["timing"] = {"seconds": time.perf_counter() - start}
    print(dumps(report, indent=2))
    for line in lines:
        print(line, file=sys.stderr)
    if violations:
        for v in violations:
            print(f"heatsse: guarantee violated: {v}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
