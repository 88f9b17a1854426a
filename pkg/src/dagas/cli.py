"""Command-line interface.

Every subcommand emits a machine-readable report (JSON by default, a table
for humans on request) that embeds the fully resolved configuration,
including the seed, so identical invocations produce identical bytes.
Exit codes: 0 success, 2 validation error, 3 budget error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import _kernels
from .animals import enumerate_counts, series_eval_alternating
from .cyclic_mc import (cyclic_marginal, cyclic_path_prob, dominant_eigen,
                        limit_chain, to_cyclic_mc, transfer_cyclic_law)
from .errors import BudgetExceededError, DagasError, ValidationError
from .gas import estimate_occupation
from .gf import LineSource, adjudicate, adjudicate_all, gf_value, source_prob
from .lattice import MarkedGraph, marked_distance, parse_lattice
from .transfer import (build_transfer, char_poly_check, recurrence_residual,
                       select_lr_index_convention, stationary_line_law)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BUDGET = 3


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(report, sort_keys=True,
                                    separators=(",", ":"), allow_nan=True))
        sys.stdout.write("\n")
    elif fmt == "table":
        for key, value in sorted(report.items()):
            sys.stdout.write(f"{key:30s} {value}\n")
    else:
        raise ValidationError(f"unknown output format {fmt!r}")


def _parse_vertex(text: str) -> tuple[int, int]:
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"vertex must look like 'i,j', got {text!r}") from exc
    return i, j


def _parse_family(args) -> dict:
    fam = args.family
    if fam.startswith("lr:"):
        return {"family": "lr",
                "r_set": tuple(int(x) for x in fam[3:].split(","))}
    if fam in ("tri-pair", "tri-line"):
        return {"family": fam}
    if fam.startswith("tn:"):
        return {"family": "tn", "n": int(fam[3:])}
    raise ValidationError(
        f"family must be lr:..., tri-pair, tri-line or tn:<n>, got {fam!r}")


def _cmd_enumerate(args) -> dict:
    lat = parse_lattice(args.lattice)
    source = tuple(_parse_vertex(s) for s in args.source)
    series = enumerate_counts(lat, source, args.kmax, method=args.method)
    report = series.to_dict()
    report["method"] = args.method
    if args.p is not None:
        value, bound = series_eval_alternating(series, args.p)
        report["p"] = args.p
        report["alternating_value"] = value
        report["truncation_bound"] = bound
    return report


def _cmd_gas(args) -> dict:
    lat = parse_lattice(args.lattice)
    source = tuple(_parse_vertex(s) for s in args.source)
    est = estimate_occupation(
        lat, source, args.p, args.n, args.seed,
        cell_budget=args.budget, check_hard_particle=args.check_hp,
        allow_supercritical=args.allow_supercritical)
    return est.to_dict()


def _chain_report(args) -> dict:
    spec = _parse_family(args)
    tm = build_transfer(spec["family"], args.p, r_set=spec.get("r_set"),
                        n=spec.get("n"))
    eig = dominant_eigen(tm)
    chain, _ = limit_chain(tm)
    return {
        "family": args.family,
        "p": args.p,
        "window": tm.m,
        "V": tm.mat.tolist(),
        "lambda": eig.lam,
        "spectrum": [[z.real, z.imag] for z in eig.spectrum],
        "left": eig.left.tolist(),
        "right": eig.right.tolist(),
        "nu": chain.nu.tolist(),
        "M": chain.M.tolist(),
    }


def _cmd_cyclic(args) -> dict:
    spec = _parse_family(args)
    tm = build_transfer(spec["family"], args.p, r_set=spec.get("r_set"),
                        n=spec.get("n"))
    chain, eig = to_cyclic_mc(tm, args.N)
    report = {
        "family": args.family,
        "p": args.p,
        "N": args.N,
        "lambda": eig.lam,
        "nu": chain.nu.tolist(),
        "M": chain.M.tolist(),
    }
    if args.marginal is not None:
        report["marginal_position"] = args.marginal
        report["marginal"] = [cyclic_marginal(chain, args.marginal, x)
                              for x in range(chain.size)]
    if args.trajectory:
        traj = [int(x) for x in args.trajectory.split(",")]
        report["trajectory"] = traj
        report["cyclic_path_prob"] = cyclic_path_prob(chain, traj)
        report["transfer_law_prob"] = transfer_cyclic_law(tm, args.N, traj)
    return report


def _cmd_linelaw(args) -> dict:
    spec = _parse_family(args)
    law = stationary_line_law(spec["family"], args.N, args.p,
                              r_set=spec.get("r_set"), n=spec.get("n"))
    report = {
        "family": args.family,
        "N": args.N,
        "p": args.p,
        "kind": law.kind,
        "z_closed": law.z_closed,
        "z_trace": law.z_trace,
        "trace_gap": law.trace_gap,
        "dual_gap": law.dual_gap,
    }
    if spec["family"] in ("lr", "tri-pair") or spec["family"] == "tn":
        try:
            report["recurrence_residual"] = recurrence_residual(
                spec["family"], args.N, args.p, r_set=spec.get("r_set"),
                n=spec.get("n"), law=law)
        except ValidationError as exc:
            report["recurrence_residual"] = None
            report["recurrence_note"] = str(exc)
    if spec["family"] == "lr":
        report["index_convention"] = select_lr_index_convention(
            spec["r_set"], args.p, args.N)
    if args.full:
        if law.kind == "line":
            report["F"] = {format(mask, "b").zfill(args.N): pr
                           for mask, pr in sorted(law.probs.items())}
        else:
            report["F"] = {f"{c:0{args.N}b}|{d:0{args.N}b}": pr
                           for (c, d), pr in sorted(law.probs.items())}
    return report


def _cmd_gf(args) -> dict:
    spec = _parse_family(args) if args.family != "tri-mixed" else \
        {"family": "tri-mixed"}
    kind = {"lr": "lr", "tri-pair": "tri-mixed", "tri-mixed": "tri-mixed",
            "tri-line": "tri-line", "tn": "tn"}[spec["family"]]
    offsets = tuple(int(x) for x in args.offsets.split(","))
    src = LineSource(kind, offsets, r_set=spec.get("r_set", ()),
                     n=spec.get("n", 0))
    prob = source_prob(src, args.p)
    return {
        "chain": kind,
        "offsets": list(offsets),
        "p": args.p,
        "occupation_probability": prob,
        "gf_value": gf_value(src, args.p),
        "source_vertices": [list(v) for v in src.vertices()],
    }


def _cmd_adjudicate(args) -> dict:
    if args.entry:
        reports = [adjudicate(args.entry)]
    else:
        reports = adjudicate_all()
    return {"entries": [r.to_dict() for r in reports],
            "statuses": {r.entry: r.status for r in reports}}


def _cmd_charpoly(args) -> dict:
    spec = _parse_family(args)
    return char_poly_check(spec["family"], spec.get("n", len(spec.get("r_set", ()))),
                           Fraction(args.p), r_set=spec.get("r_set"))


def _cmd_distance(args) -> dict:
    g1 = MarkedGraph(parse_lattice(args.g1),
                     tuple(_parse_vertex(s) for s in args.m1))
    g2 = MarkedGraph(parse_lattice(args.g2),
                     tuple(_parse_vertex(s) for s in args.m2))
    d = marked_distance(g1, g2, args.rmax)
    return {
        "g1": args.g1, "g2": args.g2, "r_max": args.rmax,
        "resolved": d.resolved,
        "r_star": d.r_star,
        "first_difference": d.r_diff,
        "value" if d.resolved else "upper_bound": d.value,
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dagas",
        description="directed animals, gas models and line Markov chains")
    parser.add_argument("--format", choices=("json", "table"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("enumerate", help="exact animal counts by area")
    sp.add_argument("--lattice", required=True)
    sp.add_argument("--source", action="append", required=True,
                    help="vertex 'i,j'; repeat for multi-vertex sources")
    sp.add_argument("--kmax", type=int, required=True)
    sp.add_argument("--method", choices=("frontier", "subsets"),
                    default="frontier")
    sp.add_argument("--p", type=float, default=None,
                    help="also evaluate the alternating series at p")
    sp.set_defaults(run=_cmd_enumerate)

    sp = sub.add_parser("gas", help="Monte Carlo occupation estimate")
    sp.add_argument("--lattice", required=True)
    sp.add_argument("--source", action="append", required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--budget", type=int, default=1_000_000)
    sp.add_argument("--check-hp", action="store_true")
    sp.add_argument("--allow-supercritical", action="store_true")
    sp.set_defaults(run=_cmd_gas)

    sp = sub.add_parser("chain", help="transfer matrix, eigen data, limit chain")
    sp.add_argument("--family", required=True,
                    help="lr:0,1[,..] | tri-pair | tri-line | tn:<n>")
    sp.add_argument("--p", type=float, required=True)
    sp.set_defaults(run=_chain_report)

    sp = sub.add_parser("cyclic", help="finite-N cyclic laws and marginals")
    sp.add_argument("--family", required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--marginal", type=int, default=None)
    sp.add_argument("--trajectory", default=None,
                    help="comma-separated state indices of length N")
    sp.set_defaults(run=_cmd_cyclic)

    sp = sub.add_parser("linelaw", help="stationary line law and residuals")
    sp.add_argument("--family", required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--full", action="store_true",
                    help="include the full subset law")
    sp.set_defaults(run=_cmd_linelaw)

    sp = sub.add_parser("gf", help="line-source occupation and GF value")
    sp.add_argument("--family", required=True,
                    help="lr:.. | tri-mixed | tri-line | tn:<n>")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--offsets", required=True, help="e.g. 0,2,5")
    sp.set_defaults(run=_cmd_gf)

    sp = sub.add_parser("adjudicate", help="score printed formulas vs oracles")
    sp.add_argument("--entry", default=None)
    sp.set_defaults(run=_cmd_adjudicate)

    sp = sub.add_parser("charpoly", help="exact characteristic polynomials")
    sp.add_argument("--family", required=True, help="tn:<n> | lr:0,1,..")
    sp.add_argument("--p", default="1/4", help="rational, e.g. 1/4")
    sp.set_defaults(run=_cmd_charpoly)

    sp = sub.add_parser("distance", help="marked-graph distance")
    sp.add_argument("--g1", required=True)
    sp.add_argument("--m1", action="append", required=True)
    sp.add_argument("--g2", required=True)
    sp.add_argument("--m2", action="append", required=True)
    sp.add_argument("--rmax", type=int, required=True)
    sp.set_defaults(run=_cmd_distance)

    return parser


def main(argv=None) -> int:
    threads = os.environ.get("DAGAS_THREADS")
    if threads and _kernels.backend_name() == "numba":
        import numba
        numba.set_num_threads(max(1, int(threads)))
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.run(args)
    except BudgetExceededError as exc:
        sys.stderr.write(f"budget error: {exc}\n")
        return EXIT_BUDGET
    except DagasError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    report["backend"] = _kernels.backend_name()
    _emit(report, args.format)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
