"""Command-line front end; every subcommand emits CSV or JSON on stdout.

Conventions shared by all subcommands:

* ``--format csv`` (default) writes a single header row then data rows;
  ``--format json`` writes one object ``{"meta": ..., "columns": ...,
  "rows": ...}``.  Floats are rendered with ``repr`` (shortest
  round-trip) in both formats, so the numeric strings are identical.
* The JSON meta block carries the full walk parameters plus everything
  needed to reproduce the run (seed included); re-running with the same
  parameters and package version reproduces the bytes.  Wall-clock
  timestamps and worker counts are deliberately absent: neither may
  change the output.
* Exit codes: 0 success, 1 resource limits, 2 bad arguments.
  Diagnostics go to stderr.
* ``LMAX_MAX_TABLE`` caps every tabulation size globally.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys

import numpy as np

from . import __version__
from .asymptotics import ShapeTarget, estimate_constant, log_shape, resolve_shape
from .classify import classify, series_diagnostic
from .errors import ConfigError, DomainError, RangeError, ResourceError
from .excursion import max_pmf_table
from .first_passage import HittingQuery, TruncationOptions, hit_before, return_prob
from .montecarlo import SimConfig, compare, run
from .series import build
from .walk import ConstantWalk, PerturbedWalk, WalkSpec, spec_params

__all__ = ["main", "build_parser"]


def _add_walk_args(sp: argparse.ArgumentParser) -> None:
    g = sp.add_argument_group("walk selection")
    g.add_argument("--p", type=float, help="constant step-up probability in (0, 1)")
    g.add_argument("--family", choices=("constant", "perturbed"))
    g.add_argument("--sign", choices=("plus", "minus"), help="perturbed drift direction")
    g.add_argument("--K", type=int, dest="k_depth", help="perturbation depth (>= 1)")
    g.add_argument("--B", type=float, dest="b_coef", help="leading perturbation coefficient")


def _add_format_arg(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--format", choices=("csv", "json"), default="csv")


def _walk_from_args(args) -> WalkSpec:
    family = args.family
    if family is None:
        if args.p is not None:
            family = "constant"
        elif args.sign is not None or args.k_depth is not None or args.b_coef is not None:
            family = "perturbed"
    if family == "constant":
        if args.p is None:
            raise ConfigError("--p is required for the constant family")
        return ConstantWalk(args.p)
    if family == "perturbed":
        if args.sign is None or args.k_depth is None or args.b_coef is None:
            raise ConfigError("--sign, --K and --B are all required for the perturbed family")
        return PerturbedWalk(k=args.k_depth, b=args.b_coef, sign=args.sign)
    raise ConfigError("no walk given: use --p or --family perturbed --sign ... --K ... --B ...")


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _emit(fmt: str, meta: dict, columns: list[str], rows: list[list]) -> int:
    if fmt == "json":
        doc = {"meta": meta, "columns": columns, "rows": rows}
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        lines = [",".join(columns)]
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _meta(spec: WalkSpec, command: str, **extra) -> dict:
    meta = dict(spec_params(spec))
    meta["command"] = command
    meta["version"] = __version__
    meta.update(extra)
    return meta


def cmd_dist(args) -> int:
    spec = _walk_from_args(args)
    series = build(spec, args.n_max)
    table = max_pmf_table(series, args.n_max)
    rows = [
        [int(n), float(table.pmf[n]), float(table.log_pmf[n]), float(table.cumulative[n])]
        for n in range(1, args.n_max + 1)
    ]
    meta = _meta(spec, "dist", n_max=args.n_max)
    return _emit(args.format, meta, ["n", "pmf", "log_pmf", "cumulative"], rows)


def cmd_classify(args) -> int:
    spec = _walk_from_args(args)
    c = classify(spec)
    diag = series_diagnostic(build(spec, args.n_max))
    rows = [[c.label.value, c.justification.value, diag.verdict]]
    meta = _meta(
        spec,
        "classify",
        n_max=args.n_max,
        growth_exponent=diag.growth_exponent,
        log_sum_at_n_max=diag.log_sum_max,
    )
    return _emit(args.format, meta, ["label", "justification", "diagnostic"], rows)


def cmd_asympt(args) -> int:
    spec = _walk_from_args(args)
    target = ShapeTarget(args.target)
    shape = resolve_shape(spec, target)
    n_hi = args.n_hi
    n_lo = args.n_lo if args.n_lo is not None else max(shape.n_min_valid, n_hi // 100)
    series = build(spec, n_hi)
    fit = estimate_constant(series, shape, n_lo, n_hi, samples=args.samples)
    rows = []
    with np.errstate(over="ignore", under="ignore"):
        for n, lc, c in zip(fit.ns, fit.log_c_hat, fit.c_hat):
            ls = log_shape(shape, int(n))
            rows.append([int(n), float(np.exp(lc + ls)), float(np.exp(ls)), float(c)])
    meta = _meta(
        spec,
        "asympt",
        target=target.value,
        branch=shape.branch,
        n_min_valid=shape.n_min_valid,
        n_lo=int(n_lo),
        n_hi=int(n_hi),
        samples=args.samples,
        drift=fit.drift,
        underflowed=fit.underflowed,
    )
    return _emit(args.format, meta, ["n", "exact", "shape", "c_hat"], rows)


def cmd_hit(args) -> int:
    spec = _walk_from_args(args)
    q = HittingQuery(a=args.a, k=args.k, b=args.b)
    series = build(spec, max(1, args.b - 1))
    p = hit_before(series, q)
    meta = _meta(spec, "hit", a=args.a, k=args.k, b=args.b)
    return _emit(args.format, meta, ["a", "k", "b", "probability"], [[args.a, args.k, args.b, p]])


def cmd_return(args) -> int:
    spec = _walk_from_args(args)
    opts = TruncationOptions(min_terms=args.min_terms, tolerance=args.tolerance)
    series = build(spec, args.min_terms)
    rp = return_prob(series, opts)
    meta = _meta(spec, "return", min_terms=args.min_terms, tolerance=args.tolerance)
    rows = [[rp.value, rp.lower, rp.upper, rp.n_terms, rp.method, rp.tolerance_met]]
    return _emit(
        args.format, meta, ["value", "lower", "upper", "n_terms", "method", "tolerance_met"], rows
    )


def _sim_config(args, spec: WalkSpec) -> tuple[SimConfig, int]:
    seed = args.seed if args.seed is not None else secrets.randbits(64)
    cfg = SimConfig(
        spec=spec,
        excursions=args.excursions,
        seed=seed,
        workers=args.workers,
        cap_steps=args.cap_steps,
        cap_height=args.cap_height,
    )
    return cfg, seed


def cmd_simulate(args) -> int:
    spec = _walk_from_args(args)
    cfg, seed = _sim_config(args, spec)
    res = run(cfg)
    rows = [
        [int(n), int(res.counts[n]), float(res.counts[n] / res.total)]
        for n in range(1, cfg.cap_height)
    ]
    meta = _meta(
        spec,
        "simulate",
        excursions=cfg.excursions,
        seed=seed,
        cap_steps=cfg.cap_steps,
        cap_height=cfg.cap_height,
        censored_height=res.censored_height,
        censored_steps=res.censored_steps,
        total=res.total,
    )
    return _emit(args.format, meta, ["n", "count", "empirical"], rows)


def cmd_compare(args) -> int:
    spec = _walk_from_args(args)
    cfg, seed = _sim_config(args, spec)
    series = build(spec, cfg.cap_height - 1)
    table = max_pmf_table(series, cfg.cap_height - 1)
    res = run(cfg)
    rep = compare(res, table)
    rows = [
        [int(n), float(e), float(emp), float(se), float(z)]
        for n, e, emp, se, z in zip(rep.n, rep.exact, rep.empirical, rep.stderr, rep.z)
    ]
    meta = _meta(
        spec,
        "compare",
        excursions=cfg.excursions,
        seed=seed,
        cap_steps=cfg.cap_steps,
        cap_height=cfg.cap_height,
        censored_height=res.censored_height,
        censored_steps=res.censored_steps,
        total=res.total,
        n_flagged=rep.n_flagged,
        flagged_bins=[int(n) for n in rep.n[rep.flagged]],
        chi_square=rep.chi_square,
        chi_square_dof=rep.chi_square_dof,
        chi_square_pvalue=(rep.chi_square_pvalue if rep.chi_square_dof else None),
        censor_allowance=rep.censor_allowance,
    )
    return _emit(args.format, meta, ["n", "exact", "empirical", "stderr", "z"], rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmax",
        description="Exact and simulated distribution of the maximum of a random-walk excursion.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("dist", help="tabulate the excursion-maximum pmf")
    _add_walk_args(sp)
    sp.add_argument("--n-max", type=int, required=True, dest="n_max")
    _add_format_arg(sp)
    sp.set_defaults(func=cmd_dist)

    sp = sub.add_parser("classify", help="transient / null / positive recurrent label")
    _add_walk_args(sp)
    sp.add_argument("--n-max", type=int, default=100_000, dest="n_max",
                    help="series length for the advisory growth diagnostic")
    _add_format_arg(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("asympt", help="decay shape and fitted constant")
    _add_walk_args(sp)
    sp.add_argument("--target", choices=("max-pmf", "product"), default="max-pmf")
    sp.add_argument("--n-lo", type=int, dest="n_lo")
    sp.add_argument("--n-hi", type=int, default=100_000, dest="n_hi")
    sp.add_argument("--samples", type=int, default=33)
    _add_format_arg(sp)
    sp.set_defaults(func=cmd_asympt)

    sp = sub.add_parser("hit", help="probability of reaching a before b from k")
    _add_walk_args(sp)
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    _add_format_arg(sp)
    sp.set_defaults(func=cmd_hit)

    sp = sub.add_parser("return", help="probability of ever returning to the origin")
    _add_walk_args(sp)
    sp.add_argument("--min-terms", type=int, default=100_000, dest="min_terms")
    sp.add_argument("--tolerance", type=float, default=1e-6)
    _add_format_arg(sp)
    sp.set_defaults(func=cmd_return)

    def add_sim_args(sp):
        sp.add_argument("--excursions", type=int, required=True)
        sp.add_argument("--seed", type=int, help="64-bit seed; generated and reported if absent")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--cap-steps", type=int, default=1_000_000, dest="cap_steps")
        sp.add_argument("--cap-height", type=int, default=1_000, dest="cap_height")

    sp = sub.add_parser("simulate", help="Monte Carlo excursion maxima")
    _add_walk_args(sp)
    add_sim_args(sp)
    _add_format_arg(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("compare", help="simulate, then score against the exact pmf")
    _add_walk_args(sp)
    add_sim_args(sp)
    _add_format_arg(sp)
    sp.set_defaults(func=cmd_compare)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError, RangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
