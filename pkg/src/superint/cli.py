"""Command-line front end.

    superint catalog list
    superint check <file|name> [--json PATH]
    superint solve <file|name> [--window lo:hi | lo1:hi1,...] [--cap K] [--json PATH]
    superint glue <a> <b> -o <file>
    superint certify <file|name> [--seed K] [--json PATH]
    superint run <file|name> [--seed K] [--json PATH]

Exit codes: 0 ok, 2 axiom failure, 3 unexpected family dimension,
4 rank deficiency (or nonzero bracket), 5 I/O or format error.
``--json -`` writes the machine-readable form to stdout.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import catalog as cat
from .flat_geometry import FormatError
from .formats import dumps, load_structure, save_structure
from .hesse_frobenius import check_axioms, glue
from .pipeline import EXIT_AXIOM, EXIT_FAMILY, EXIT_IO, EXIT_OK, EXIT_RANK, PipelineError, run_pipeline
from .potential_solver import ExponentWindow, default_window, solve_potentials

SEED_ENV = "SUPERINT_SEED"


def resolve(target: str):
    """``(structure, raw symmetry report or None)`` for a file path or catalog name."""
    if Path(target).is_file():
        return load_structure(target)
    try:
        return cat.catalog(target), None
    except cat.UnknownName as exc:
        raise FormatError(f"unknown catalog name or missing file: {target}") from exc


def parse_window(text: str | None, n: int, cap: int | None, hf):
    if text is None:
        w = default_window(hf)
        return ExponentWindow(w.lo, w.hi, cap if cap is not None else w.total_degree_cap)
    parts = text.split(",")
    try:
        pairs = [tuple(int(v) for v in p.split(":")) for p in parts]
    except ValueError as exc:
        raise FormatError(f"bad --window {text!r}") from exc
    if any(len(p) != 2 for p in pairs):
        raise FormatError(f"bad --window {text!r}; expected lo:hi")
    if len(pairs) == 1:
        pairs = pairs * n
    if len(pairs) != n:
        raise FormatError(f"--window lists {len(pairs)} ranges for dimension {n}")
    lo, hi = zip(*pairs)
    return ExponentWindow(lo, hi, cap if cap is not None else 4)


def emit(args, payload: dict, lines: list) -> None:
    if getattr(args, "json", None) == "-":
        print(dumps(payload))
        return
    for line in lines:
        print(line)
    if getattr(args, "json", None):
        Path(args.json).write_text(dumps(payload) + "\n", encoding="utf-8")


def cmd_catalog(args) -> int:
    rows = []
    for name, e in cat.ENTRIES.items():
        rows.append({"name": name, "expected": list(e.expected), "description": e.description})
    lines = [f"{r['name']:<14} {str(tuple(r['expected'])):<16} {r['description']}" for r in rows]
    lines.append("semisimple:<n>:<mask>  e.g. semisimple:4:1110")
    emit(args, {"entries": rows}, lines)
    return EXIT_OK


def cmd_check(args) -> int:
    hf, raw = resolve(args.target)
    reports = check_axioms(hf, raw)
    payload = {"name": hf.name or args.target, "dim": hf.dim, "axioms": [r.to_json() for r in reports]}
    lines = [f"{r.identity:<13} {'ok' if r else 'FAIL'}  {r.first_failure()}".rstrip() for r in reports]
    emit(args, payload, lines)
    return EXIT_OK if all(reports) else EXIT_AXIOM


def cmd_solve(args) -> int:
    hf, raw = resolve(args.target)
    if not all(check_axioms(hf, raw)):
        print("structure fails the axiom checks; run `check` for details", file=sys.stderr)
        return EXIT_AXIOM
    window = parse_window(args.window, hf.dim, args.cap, hf)
    fam = solve_potentials(hf, window)
    lines = [f"potential family: dimension {fam.dim} (expected {hf.dim + 2})"]
    lines += [f"  V{k + 1} = {V}" for k, V in enumerate(fam.basis)]
    lines += [f"warning: {w}" for w in fam.warnings]
    emit(args, fam.to_json(), lines)
    return EXIT_OK if fam.dim == hf.dim + 2 or hf.dim == 1 else EXIT_FAMILY


def cmd_glue(args) -> int:
    a, _ = resolve(args.a)
    b, _ = resolve(args.b)
    hf = glue(a, b, args.name or "")
    save_structure(hf, args.output)
    ok = all(check_axioms(hf))
    print(f"wrote {args.output}: dim {hf.dim}, axioms {'ok' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_AXIOM


def _run(args, full: bool):
    hf, raw = resolve(args.target)
    name = args.target if not Path(args.target).is_file() else (hf.name or args.target)
    window = parse_window(getattr(args, "window", None), hf.dim, getattr(args, "cap", None), hf)
    return run_pipeline(hf, window, seed=args.seed, name=name, raw_symmetry=raw, strict_family=hf.dim > 1)


def cmd_certify(args) -> int:
    report = _run(args, full=True)
    cert = report.certificate
    lines = [
        f"system {cert.system}: n = {cert.n}",
        f"  brackets vanish identically: {cert.bracket_zero}",
        f"  gradient rank {cert.rank} / target {cert.target} (points tried: {cert.points_tried})",
        f"  selected integrals: {[k + 1 for k in cert.selected]}",
        f"  witness point: ({', '.join(str(v) for v in cert.witness_point)})",
        f"  valid: {cert.valid}",
    ]
    emit(args, cert.to_json(), lines)
    return EXIT_OK if cert.valid else EXIT_RANK


def cmd_run(args) -> int:
    report = _run(args, full=False)
    fam, comp, cert = report.family, report.compatible, report.certificate
    lines = [f"{report.name} (n = {report.dim})"]
    lines += [f"  {r.identity:<13} ok" for r in report.axioms]
    lines.append(f"  potential family dimension {fam.dim}")
    lines += [f"    V{k + 1} = {V}" for k, V in enumerate(fam.basis)]
    lines.append(f"  compatible Killing tensors {comp.dim}")
    lines.append(f"  certificate: rank {cert.rank}/{cert.target}, valid {cert.valid}")
    if report.inheritance:
        lines.append(f"  inheritance by level (leaves first): {report.inheritance['levels']}")
    if report.expected:
        lines.append(f"  expected (family, compatible, rank) = {report.expected}, got {report.triple}")
    emit(args, report.to_json(full=bool(args.full)), lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    default_seed = int(os.environ.get(SEED_ENV, "0"))
    ap = argparse.ArgumentParser(prog="superint", description="Superintegrable systems from Hesse-Frobenius structures.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list builtin structures")
    p.add_argument("action", choices=["list"])
    p.add_argument("--json")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("check", help="run the three axiom checks")
    p.add_argument("target")
    p.add_argument("--json")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="solve for the potential family")
    p.add_argument("target")
    p.add_argument("--window")
    p.add_argument("--cap", type=int)
    p.add_argument("--json")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("glue", help="write the product structure of two inputs")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--name")
    p.set_defaults(func=cmd_glue)

    for verb, func in (("certify", cmd_certify), ("run", cmd_run)):
        p = sub.add_parser(verb, help="full pipeline" if verb == "run" else "certify superintegrability")
        p.add_argument("target")
        p.add_argument("--seed", type=int, default=default_seed)
        p.add_argument("--window")
        p.add_argument("--cap", type=int)
        p.add_argument("--json")
        if verb == "run":
            p.add_argument("--full", action="store_true", help="include companion potentials")
        p.set_defaults(func=func)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
