"""Command-line frontend: generate instances, run check suites, emit reports.

Exit codes: 0 all non-skipped checks passed, 1 a check failed, 2 bad
arguments or unknown suite/kind, 3 I/O failure. Replaying with the same
seed produces byte-identical output files.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .linalg import DensityMatrix, density_to_json
from .measurement import kraus_to_json, povm_to_json
from .randgen import random_cq_state, random_density, random_kraus, random_povm
from .suites import SuiteConfig, reports_to_csv, reports_to_ndjson, run_suites
from .wehrl import SpinJ, husimi, joint_weights, make_grid, wehrl_min_scan


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dims {text!r}; expected e.g. 2,3,2")
    if not dims or any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError(f"bad dims {text!r}; entries must be >= 1")
    return dims


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qssa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run inequality check suites")
    p_check.add_argument("--suite", action="append", default=None,
                         help="suite name (repeatable or comma-separated); 'all' runs everything")
    p_check.add_argument("--dims", type=_parse_dims, default=(2, 2, 2))
    p_check.add_argument("--trials", type=int, default=50)
    p_check.add_argument("--seed", type=int, default=0)
    p_check.add_argument("--tol", type=float, default=None)
    p_check.add_argument("--d", type=int, default=2, help="counterexample dimension")
    p_check.add_argument("--two-j", type=int, default=1, dest="two_j")
    p_check.add_argument("--out", default=None, help="output path (default stdout)")
    p_check.add_argument("--format", choices=("json", "csv"), default="json")

    p_gen = sub.add_parser("gen", help="generate a random object and write its JSON")
    p_gen.add_argument("--kind", choices=("density", "kraus", "povm", "cq"), required=True)
    p_gen.add_argument("--dims", type=_parse_dims, default=(2, 2))
    p_gen.add_argument("--rank", type=int, default=None)
    p_gen.add_argument("--count", type=int, default=2)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)

    p_wehrl = sub.add_parser("wehrl", help="scan Wehrl entropies of random pure states")
    p_wehrl.add_argument("--two-j", type=int, default=1, dest="two_j")
    p_wehrl.add_argument("--trials", type=int, default=100)
    p_wehrl.add_argument("--seed", type=int, default=0)
    p_wehrl.add_argument("--out", required=True, help="scan CSV path")
    p_wehrl.add_argument("--emit-husimi", action="store_true",
                         help="also dump node values of the minimizing state")
    return parser


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def cmd_check(args) -> int:
    try:
        cfg = SuiteConfig(
            suites=args.suite or ["all"],
            dims=args.dims,
            trials=args.trials,
            seed=args.seed,
            tol=args.tol,
            d=args.d,
            two_j=args.two_j,
            out=args.out,
            fmt=args.format,
        )
        reports = run_suites(cfg)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = reports_to_csv(reports) if cfg.fmt == "csv" else reports_to_ndjson(reports)
    try:
        _write(cfg.out, text)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3
    n_fail = sum(1 for r in reports if r.status == "ok" and not r.passed)
    n_skip = sum(1 for r in reports if r.status == "skipped")
    print(f"{len(reports)} reports, {n_fail} failed, {n_skip} skipped", file=sys.stderr)
    return 1 if n_fail else 0


def cmd_gen(args) -> int:
    try:
        if args.kind == "density":
            dims = args.dims
            rank = args.rank if args.rank is not None else int(np.prod(dims))
            obj = density_to_json(random_density(dims, rank, args.seed))
        elif args.kind == "kraus":
            if len(args.dims) != 1:
                print("error: gen kraus expects a single operator dimension, e.g. --dims 4", file=sys.stderr)
                return 2
            obj = kraus_to_json(random_kraus(args.dims[0], args.count, args.seed))
        elif args.kind == "povm":
            if len(args.dims) != 1:
                print("error: gen povm expects a single dimension, e.g. --dims 3", file=sys.stderr)
                return 2
            obj = povm_to_json(random_povm(args.dims[0], args.count, args.seed))
        else:
            if len(args.dims) != 3:
                print("error: gen cq expects three factors, e.g. --dims 2,2,2", file=sys.stderr)
                return 2
            obj = density_to_json(random_cq_state(args.dims, args.seed))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        _write(args.out, json.dumps(obj, separators=(",", ":")) + "\n")
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3
    return 0


def cmd_wehrl(args) -> int:
    try:
        spin = SpinJ(args.two_j)
        scan = wehrl_min_scan(spin, args.trials, args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    lines = ["trial,seed,two_j,S_W,S,diff"]
    for row in scan["rows"]:
        lines.append(f"{row['trial']},{row['seed']},{row['two_j']},{row['S_W']!r},{row['S']!r},{row['diff']!r}")
    summary = scan["summary"]
    try:
        _write(args.out, "\n".join(lines) + "\n")
        if args.emit_husimi:
            _write(_husimi_path(args.out), _husimi_csv(spin, scan, args.seed))
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3
    print(
        f"two_j={summary['two_j']} trials={summary['trials']} "
        f"min_S_W={summary['min_S_W']!r} coherent={summary['coherent_value']!r} "
        f"margin={summary['margin']!r} residual={summary['resolution_residual']!r}"
    )
    return 0


def _husimi_path(out: str) -> str:
    return (out[:-4] if out.endswith(".csv") else out) + ".husimi.csv"


def _husimi_csv(spin: SpinJ, scan: dict, seed: int) -> str:
    from .randgen import random_pure_state, rng_for

    best = min(scan["rows"], key=lambda r: r["S_W"])
    psi = random_pure_state(spin.dim, rng_for(seed, (best["trial"],)))
    rho = DensityMatrix(np.outer(psi, psi.conj()), (spin.dim,), trace_tol=1e-9, psd_tol=1e-12)
    grid = make_grid(spin)
    values = husimi(rho, (grid,))
    weights = joint_weights((grid,))
    lines = ["theta,phi,weight,value"]
    for (th, ph), w, v in zip(grid.nodes, weights, values):
        lines.append(f"{float(th)!r},{float(ph)!r},{float(w)!r},{float(v)!r}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "check":
        return cmd_check(args)
    if args.command == "gen":
        return cmd_gen(args)
    return cmd_wehrl(args)


if __name__ == "__main__":
    sys.exit(main())
