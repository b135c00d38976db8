"""Command-line front end.

Exit codes: 0 feasible (non-empty interval), 1 infeasible (empty interval),
2 input error, 3 output write failure.
"""

from __future__ import annotations

import argparse
import glob
import json
import math
import sys

import numpy as np

from .graph import circuit_weight, find_positive_circuit
from .instance_file import InstanceFileError, encode_matrix, encode_value, load_instance
from .oracle import FEAS_TOL, bisection_bounds, build_lp, feasible_at, write_lp_file
from .solver import LambdaInterval, ProblemInstance, SolveReport, solve

EXIT_FEASIBLE, EXIT_EMPTY, EXIT_INPUT, EXIT_WRITE = 0, 1, 2, 3


def finite_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return value


def _not_half_integer(inst: ProblemInstance) -> list[str]:
    bad = []
    for key in ("P", "I", "C"):
        M = getattr(inst, key)
        finite = M[np.isfinite(M)]
        if not np.all(2.0 * finite == np.round(2.0 * finite)):
            bad.append(key)
    return bad


def oracle_block(report: SolveReport, inst: ProblemInstance, tol: float) -> dict:
    ref = bisection_bounds(inst, tol=tol)
    if report.branches == ("le",) and report.rho is not None:
        ref = ref.intersect(LambdaInterval(-math.inf, report.rho))
    elif report.branches == ("ge",):
        ref = ref.intersect(LambdaInterval(report.rho, math.inf))
    got = report.solution
    block = {"lo": None, "hi": None, "delta_lo": None, "delta_hi": None}
    if ref.is_empty or got.is_empty:
        block["agree"] = ref.is_empty == got.is_empty
    else:
        slack = max(2.0 * tol, 1e-6)
        deltas = []
        for a, b in ((got.lo, ref.lo), (got.hi, ref.hi)):
            deltas.append(0.0 if a == b else abs(a - b))
        block.update(
            lo=encode_value(ref.lo),
            hi=encode_value(ref.hi),
            delta_lo=encode_value(deltas[0]),
            delta_hi=encode_value(deltas[1]),
            agree=all(d <= slack for d in deltas),
        )
    return block


def result_document(report: SolveReport, name: str | None = None, diagnostics: bool = False) -> dict:
    sol = report.solution
    doc: dict = {}
    if name is not None:
        doc["name"] = name
    doc.update(
        status="empty" if sol.is_empty else "feasible-interval",
        lo=None if sol.is_empty else encode_value(sol.lo),
        hi=None if sol.is_empty else encode_value(sol.hi),
        rho=encode_value(report.rho),
        branches=list(report.branches),
        mcm_p=encode_value(report.mcm_p),
        mcm_i=encode_value(report.mcm_i),
    )
    if diagnostics and report.intermediate:
        diag = {}
        for side, tr in report.intermediate.items():
            entry = {"reason": tr.reason or None}
            for key, M in (("P_tilde", tr.P_tilde), ("I_tilde", tr.I_tilde), ("S", tr.S), ("S_star", tr.S_star)):
                entry[key] = None if M is None else encode_matrix(M)
            entry["lo"] = None if tr.lo is None else encode_value(tr.lo)
            entry["hi"] = None if tr.hi is None else encode_value(tr.hi)
            diag[side] = entry
        doc["diagnostics"] = diag
    return doc


def _text(doc: dict) -> str:
    head = doc.get("name", "instance")
    if doc["status"] == "empty":
        lines = [f"{head}: no feasible lambda"]
    else:
        lines = [f"{head}: lambda in [{doc['lo']}, {doc['hi']}]"]
    lines.append(f"  rho = {doc['rho']}, branches = {', '.join(doc['branches'])}")
    lines.append(f"  mcm(P) = {doc['mcm_p']}, mcm(I) = {doc['mcm_i']}")
    for side, entry in doc.get("diagnostics", {}).items():
        lines.append(f"  [{side}] lo = {entry['lo']}, hi = {entry['hi']}" + (f" ({entry['reason']})" if entry["reason"] else ""))
        for key in ("P_tilde", "I_tilde", "S_star"):
            if entry[key] is not None:
                lines.append(f"    {key} = {entry[key]}")
    if "oracle" in doc:
        o = doc["oracle"]
        lines.append(f"  oracle: [{o['lo']}, {o['hi']}] agree = {o['agree']}")
    return "\n".join(lines)


def run_solve(args) -> int:
    paths = list(args.inputs)
    if args.glob:
        paths += sorted(glob.glob(args.glob))
    if not paths:
        print("error: no input files", file=sys.stderr)
        return EXIT_INPUT

    worst = EXIT_FEASIBLE
    for path in paths:
        try:
            inst, meta = load_instance(path)
        except InstanceFileError as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            worst = EXIT_INPUT
            continue
        if args.strict_halves:
            for key in _not_half_integer(inst):
                print(f"warning: {path}: {key} has entries that are not multiples of 1/2; "
                      "results may carry rounding error", file=sys.stderr)
        report = solve(inst, rho=args.rho, branch=args.branch, record=args.diagnostics)
        doc = result_document(report, meta.get("name"), args.diagnostics)
        if args.oracle:
            doc["oracle"] = oracle_block(report, inst, args.tol)
        if args.format == "text":
            print(_text(doc))
        else:
            print(json.dumps(doc, indent=None if len(paths) > 1 else 2))
        code = EXIT_EMPTY if report.solution.is_empty else EXIT_FEASIBLE
        if worst != EXIT_INPUT:
            worst = max(worst, code)
    return worst


def run_check(args) -> int:
    try:
        inst, _ = load_instance(args.input)
    except InstanceFileError as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if feasible_at(inst, args.lam, tol=args.tol):
        print(f"lambda = {args.lam:g}: feasible")
        return EXIT_FEASIBLE
    A = inst.matrix_at(args.lam)
    circuit = find_positive_circuit(A, tol=args.tol)
    nodes = " -> ".join(str(v + 1) for v in circuit + circuit[:1])
    print(f"lambda = {args.lam:g}: infeasible; positive circuit {nodes} (weight {circuit_weight(A, circuit):g})")
    return EXIT_EMPTY


def run_export_lp(args) -> int:
    try:
        inst, _ = load_instance(args.input)
    except InstanceFileError as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    model = build_lp(inst, "minimize" if args.objective == "min" else "maximize")
    try:
        if args.output == "-":
            write_lp_file(model, sys.stdout)
        else:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                write_lp_file(model, fh)
    except OSError as exc:
        print(f"error: cannot write {args.output}: {exc.strerror}", file=sys.stderr)
        return EXIT_WRITE
    return EXIT_FEASIBLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="picncp",
        description="Feasible lambda interval of G(lam P + lam^-1 I + C) without positive circuits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute the feasible interval")
    p.add_argument("inputs", nargs="*", help="instance files (JSON)")
    p.add_argument("--glob", help="also read every file matching this pattern")
    p.add_argument("--rho", type=finite_float, help="pivot override")
    p.add_argument("--branch", choices=["auto", "le", "ge", "both"], default="auto")
    p.add_argument("--oracle", action="store_true", help="cross-check with the bisection oracle")
    p.add_argument("--tol", type=float, default=1e-9, help="oracle bisection tolerance")
    p.add_argument("--diagnostics", action="store_true", help="include intermediate matrices")
    p.add_argument("--format", choices=["text", "structured"], default="structured")
    p.add_argument("--strict-halves", action="store_true", help="warn on entries that are not multiples of 1/2")
    p.set_defaults(func=run_solve)

    c = sub.add_parser("check", help="test feasibility at one lambda")
    c.add_argument("input")
    c.add_argument("lam", type=finite_float, metavar="LAMBDA")
    c.add_argument("--tol", type=float, default=FEAS_TOL, help="per-arc slack for rounding noise")
    c.set_defaults(func=run_check)

    e = sub.add_parser("export-lp", help="write LP1 (min) or LP2 (max) in CPLEX LP format")
    e.add_argument("input")
    e.add_argument("--objective", choices=["min", "max"], default="min")
    e.add_argument("-o", "--output", required=True, help="destination file, or - for stdout")
    e.set_defaults(func=run_export_lp)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
