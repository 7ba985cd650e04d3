"""Command-line interface.

Subcommands: construct, repfn, errors, bounds, analytic, search, experiment.
Exit codes: 0 success, 2 parameter error, 3 format error, 4 capacity error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .analytic import (
    coefficient_identity_check,
    condition4_trajectory,
    radial_eval,
)
from .bounds import chernoff_tail, error_series, hoeffding_tail, violation_scan
from .construct import BlockSamplerParams, sample_bernoulli_set, sample_block_set
from .exceptions import CapacityError, FormatError, ParameterError
from .experiment import ExperimentConfig, run_experiment
from .repfn import cumulative_rep, repfn_fast
from .search import SearchProblem, exhaustive_min_error, greedy_min_error
from .setio import read_set, write_error_csv, write_profile_csv, write_set
from .weights import convolution_target, parse_weights


def _parse_target(spec: str, n_max: int) -> np.ndarray:
    kind, _, rest = spec.partition(":")
    if kind == "zero":
        return np.zeros(n_max + 1)
    if kind == "constant-linear":
        key, _, val = rest.partition("=")
        if key.strip() != "c":
            raise ParameterError("constant-linear target takes c=<value>")
        try:
            c = float(val)
        except ValueError:
            raise ParameterError(f"bad target coefficient {val!r}") from None
        return c * np.arange(n_max + 1, dtype=np.float64)
    if kind == "weights":
        return convolution_target(parse_weights(rest), n_max)
    raise ParameterError(f"unknown target spec {spec!r}")


def _parse_norm(spec: str, n_max: int) -> np.ndarray:
    if spec == "one":
        return np.ones(n_max + 1)
    if spec == "sqrt":
        return np.sqrt(np.maximum(np.arange(n_max + 1, dtype=np.float64), 1.0))
    raise ParameterError(f"unknown norm spec {spec!r} (expected sqrt or one)")


def _cmd_construct(args) -> int:
    if args.flavor == "block":
        A = sample_block_set(BlockSamplerParams(args.p, args.q, args.blocks, args.seed))
    else:
        A = sample_bernoulli_set(parse_weights(args.weights), args.n_max, args.seed)
    write_set(A, args.out, args.format)
    print(f"wrote {A!r} to {args.out}")
    return 0


def _cmd_repfn(args) -> int:
    A = read_set(args.set)
    profile = repfn_fast(A, args.engine)
    write_profile_csv(profile, cumulative_rep(profile), args.out)
    print(f"wrote profile CSV (n_max={A.n_max}) to {args.out}")
    return 0


def _cmd_errors(args) -> int:
    A = read_set(args.set)
    series = error_series(repfn_fast(A), parse_weights(args.weights))
    write_error_csv(series, args.out)
    print(f"wrote error CSV (n_max={A.n_max}) to {args.out}")
    if args.figure:
        from .figures import error_series_figure

        print(f"wrote figure to {error_series_figure(series, args.figure)}")
    return 0


def _cmd_bounds(args) -> int:
    if args.calc == "hoeffding":
        print(repr(hoeffding_tail(args.y)))
    elif args.calc == "chernoff":
        print(repr(chernoff_tail(args.eps, args.ex)))
    else:
        A = read_set(args.set)
        series = error_series(repfn_fast(A), parse_weights(args.weights))
        report = violation_scan(series, args.threshold, args.which, args.n_start)
        print(
            f"{report.count} violation(s) of threshold {args.threshold:g} "
            f"({args.which}, n >= {args.n_start}); max index "
            f"{report.max_index if report.count else '-'}"
        )
        if args.out:
            with open(args.out, "w") as fh:
                fh.write("n\n")
                for n in report.indices:
                    fh.write(f"{n}\n")
    return 0


def _cmd_analytic(args) -> int:
    A = read_set(args.set)
    w = parse_weights(args.weights)
    if args.diag == "radial":
        rows = []
        for r in (float(x) for x in args.r.split(",")):
            d = radial_eval(A, w, r, args.tol)
            rows.append(d)
            print(
                f"r={d.r:g}: A(r)={d.a_r:.9g} f(r)={d.f_r:.9g} ratio={d.ratio:.9g} "
                f"tail={d.tail_bound:.3g}{'' if d.reliable else ' (UNRELIABLE)'}"
            )
        if args.out:
            with open(args.out, "w") as fh:
                fh.write("r,A_r,f_r,b_lin,b_sq,tail_bound,ratio,reliable\n")
                for d in rows:
                    fh.write(
                        f"{d.r!r},{d.a_r!r},{d.f_r!r},{d.b_lin!r},{d.b_sq!r},"
                        f"{d.tail_bound!r},{d.ratio!r},{int(d.reliable)}\n"
                    )
    elif args.diag == "eq7":
        check = coefficient_identity_check(A, w, args.n_max)
        print(
            f"max residual {check.residual:.3g} over n <= {check.n_max} "
            f"(allowed {1e-9 * check.scale:.3g}): {'OK' if check.passed else 'FAIL'}"
        )
        if not check.passed:
            return 1
    else:
        horizons = [int(x) for x in args.horizons.split(",")]
        series = error_series(repfn_fast(A), w)
        traj = [float(v) for v in condition4_trajectory(w, series, horizons)]
        for N, val in zip(horizons, traj):
            print(f"N={N}: {val!r}")
        if args.out:
            with open(args.out, "w") as fh:
                fh.write("N,ratio\n")
                for N, val in zip(horizons, traj):
                    fh.write(f"{N},{val!r}\n")
    return 0


def _cmd_search(args) -> int:
    target = _parse_target(args.target, args.n_max)
    norm = _parse_norm(args.norm, args.n_max)
    prob = SearchProblem(target, norm, n_start=args.n_start, objective=args.objective)
    result = exhaustive_min_error(prob) if args.mode == "exhaustive" else greedy_min_error(prob)
    print(json.dumps({
        "value": result.value,
        "witness": list(result.witness),
        "nodes_visited": result.nodes_visited,
    }))
    return 0


def _cmd_experiment(args) -> int:
    raw: dict = {}
    if args.config:
        with open(args.config) as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{args.config}: {exc}") from exc
    overrides = {
        "kind": args.kind,
        "n_max": args.n_max,
        "trials": args.trials,
        "base_seed": args.base_seed,
        "p": args.p,
        "q": args.q,
        "weights": args.weights,
        "n_start": args.n_start,
        "quad_coeff": args.quad_coeff,
        "workers": args.workers,
        "out_dir": args.out_dir,
        "prefix": args.prefix,
        "mem_budget_gib": args.mem_budget_gib,
    }
    if args.checkpoints is not None:
        overrides["checkpoints"] = [int(x) for x in args.checkpoints.split(",")]
    if args.thresholds is not None:
        overrides["thresholds"] = [float(x) for x in args.thresholds.split(",")]
    if args.no_figures:
        overrides["figures"] = False
    raw.update({k: v for k, v in overrides.items() if v is not None})
    report = run_experiment(ExperimentConfig.from_dict(raw))
    print(f"wrote {report.csv_path}")
    print(f"wrote {report.json_path}")
    for path in report.figure_paths:
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="addrep", description=__doc__)
    top.add_argument("--version", action="version", version=f"addrep {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("construct", help="sample a random set and write it to a file")
    pcs = pc.add_subparsers(dest="flavor", required=True)
    pcb = pcs.add_parser("block", help="exactly p uniform elements per length-q block")
    pcb.add_argument("--p", type=int, required=True)
    pcb.add_argument("--q", type=int, required=True)
    pcb.add_argument("--blocks", type=int, required=True)
    pcb.add_argument("--seed", type=int, required=True)
    pcb.add_argument("--out", required=True)
    pcb.add_argument("--format", choices=("binary", "text"), default="binary")
    pcn = pcs.add_parser("bernoulli", help="independent inclusion with probability b_n")
    pcn.add_argument("--weights", required=True, help="e.g. constant:c=0.5")
    pcn.add_argument("--n-max", type=int, required=True, dest="n_max")
    pcn.add_argument("--seed", type=int, required=True)
    pcn.add_argument("--out", required=True)
    pcn.add_argument("--format", choices=("binary", "text"), default="binary")
    pc.set_defaults(func=_cmd_construct)

    pr = sub.add_parser("repfn", help="profile CSV (n,R,S) for a stored set")
    pr.add_argument("--set", required=True)
    pr.add_argument("--engine", choices=("auto", "bitset", "fft"), default="auto")
    pr.add_argument("--out", required=True)
    pr.set_defaults(func=_cmd_repfn)

    pe = sub.add_parser("errors", help="error-series CSV (n,e,E,norm_pt,norm_cum)")
    pe.add_argument("--set", required=True)
    pe.add_argument("--weights", required=True)
    pe.add_argument("--out", required=True)
    pe.add_argument("--figure", help="also render a PNG of the normalized series")
    pe.set_defaults(func=_cmd_errors)

    pb = sub.add_parser("bounds", help="tail calculators and violation scans")
    pbs = pb.add_subparsers(dest="calc", required=True)
    pbh = pbs.add_parser("hoeffding")
    pbh.add_argument("--y", type=float, required=True)
    pbc = pbs.add_parser("chernoff")
    pbc.add_argument("--eps", type=float, required=True)
    pbc.add_argument("--ex", type=float, required=True)
    pbv = pbs.add_parser("scan")
    pbv.add_argument("--set", required=True)
    pbv.add_argument("--weights", required=True)
    pbv.add_argument("--threshold", type=float, required=True)
    pbv.add_argument("--which", choices=("pointwise", "cumulative"), default="pointwise")
    pbv.add_argument("--n-start", type=int, default=2, dest="n_start")
    pbv.add_argument("--out", help="write violating indices to this CSV")
    pb.set_defaults(func=_cmd_bounds)

    pa = sub.add_parser("analytic", help="radial diagnostics and the coefficient identity")
    pas = pa.add_subparsers(dest="diag", required=True)
    par = pas.add_parser("radial")
    par.add_argument("--set", required=True)
    par.add_argument("--weights", required=True)
    par.add_argument("--r", required=True, help="comma list, e.g. 0.9,0.99,0.999")
    par.add_argument("--tol", type=float, default=1e-12)
    par.add_argument("--out", help="CSV output path")
    pai = pas.add_parser("eq7", help="coefficientwise identity residual up to n_max")
    pai.add_argument("--set", required=True)
    pai.add_argument("--weights", required=True)
    pai.add_argument("--n-max", type=int, required=True, dest="n_max")
    pa4 = pas.add_parser("cond4", help="ratio (sum b^2)(sum e^2)/(sum b)^3 at horizons")
    pa4.add_argument("--set", required=True)
    pa4.add_argument("--weights", required=True)
    pa4.add_argument("--horizons", required=True, help="comma list of N values")
    pa4.add_argument("--out", help="CSV output path")
    pa.set_defaults(func=_cmd_analytic)

    ps = sub.add_parser("search", help="minimize the worst normalized error over subsets")
    ps.add_argument("mode", choices=("exhaustive", "greedy"))
    ps.add_argument("--n-max", type=int, required=True, dest="n_max")
    ps.add_argument("--target", required=True,
                    help="zero | constant-linear:c=X | weights:<spec>")
    ps.add_argument("--norm", default="one", help="sqrt | one")
    ps.add_argument("--n-start", type=int, default=1, dest="n_start")
    ps.add_argument("--objective", choices=("pointwise", "cumulative"), default="pointwise")
    ps.set_defaults(func=_cmd_search)

    px = sub.add_parser("experiment", help="multi-seed trials with aggregation and figures")
    px.add_argument("--config", help="JSON config; flags override individual fields")
    px.add_argument("--kind", choices=("block", "bernoulli", "thm3", "thm6"))
    px.add_argument("--n-max", type=int, dest="n_max")
    px.add_argument("--trials", type=int)
    px.add_argument("--base-seed", type=int, dest="base_seed")
    px.add_argument("--checkpoints", help="comma list of N values")
    px.add_argument("--thresholds", help="comma list of normalized thresholds")
    px.add_argument("--p", type=int)
    px.add_argument("--q", type=int)
    px.add_argument("--weights")
    px.add_argument("--n-start", type=int, dest="n_start")
    px.add_argument("--quad-coeff", type=float, dest="quad_coeff")
    px.add_argument("--workers", type=int)
    px.add_argument("--out-dir", dest="out_dir")
    px.add_argument("--prefix")
    px.add_argument("--mem-budget-gib", type=float, dest="mem_budget_gib")
    px.add_argument("--no-figures", action="store_true")
    px.set_defaults(func=_cmd_experiment)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return 3
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
