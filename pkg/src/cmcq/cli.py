"""Command-line entry point: ``cmcq <command> ...``.

Exit codes: 0 success, 1 a demo check failed, 2 invalid input,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import maxmin as mm
from . import numerics as nx
from .demo import run_filtering_demo
from .errors import BadSchmidt
from .report import analyze_density, analyze_pure, analyze_sc, format_text
from .statefile import read_density, read_sc
from .states import schmidt_vector

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2, 3
CROSS_CHECK_TOL = 1e-6
MAX_PURE_DIM = 8


def default_tol() -> float:
    raw = os.environ.get("CMCQ_TOL")
    if not raw:
        return nx.DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise SystemExit(f"cmcq: CMCQ_TOL={raw!r} is not a number") from None
    if not (tol > 0 and math.isfinite(tol)):
        raise SystemExit(f"cmcq: CMCQ_TOL must be positive, got {raw!r}")
    return tol


def _floats(values: list[str]) -> list[float]:
    out = []
    for chunk in values:
        for part in chunk.replace(",", " ").split():
            try:
                out.append(float(part))
            except ValueError:
                raise BadSchmidt(f"not a number: {part!r}") from None
    return out


def render(doc: dict, fmt: str) -> str:
    if fmt == "text":
        return format_text(doc) + "\n"
    return json.dumps(doc, indent=2) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands -------------------------------------------------------------


def cmd_analyze(args) -> int:
    rho, sf = read_density(args.input, args.tol)
    report = analyze_density(rho, args.tol, label=sf.metadata.get("label"), timing=not args.no_timing)
    _emit(render(report, args.format), args.output)
    return EXIT_OK


def cmd_pure(args) -> int:
    lams = _floats(args.schmidt)
    if not 2 <= len(lams) <= MAX_PURE_DIM:
        raise BadSchmidt(f"need between 2 and {MAX_PURE_DIM} Schmidt coefficients, got {len(lams)}")
    lam = schmidt_vector(lams, tol=args.tol, renormalize=args.renorm)
    renormalized = args.renorm and abs(sum(lams) - 1.0) > args.tol
    report = analyze_pure(lam, args.tol, timing=not args.no_timing)
    if renormalized:
        report["warnings"] = [f"Schmidt coefficients summed to {sum(lams)!r}; renormalized"]
        print(f"cmcq: warning: {report['warnings'][0]}", file=sys.stderr)
    _emit(render(report, args.format), args.output)
    return EXIT_OK


def cmd_sc(args) -> int:
    s = read_sc(args.input)
    _emit(render(analyze_sc(s, args.tol, timing=not args.no_timing), args.format), args.output)
    return EXIT_OK


def _maxmin_problem(args) -> mm.MaxMinProblem:
    if (args.b is None) == (args.schmidt is None):
        raise ValueError("give exactly one of --b and --schmidt")
    if args.schmidt is not None:
        return mm.from_schmidt(schmidt_vector(_floats(args.schmidt), tol=args.tol))
    values = _floats(args.b)
    m = len(values)
    d = int(round((1 + math.sqrt(1 + 8 * m)) / 2))
    if m == 0 or d * (d - 1) // 2 != m:
        raise ValueError(f"--b needs d(d-1)/2 pair values for some d >= 2, got {m}")
    return mm.MaxMinProblem.from_pairs(d, values)


def cmd_maxmin(args) -> int:
    problem = _maxmin_problem(args)
    if args.method == "closed":
        sol = mm.solve(problem, "closed")
    elif args.method == "bisect":
        sol = mm.solve_general(problem, method="bisection")
    else:
        sol = mm.grid_oracle(problem, args.steps)
    reference = mm.solve_general(problem)
    doc = {"d": problem.d, **sol.to_dict(), "reference_lp": reference.alpha0}
    diff = abs(sol.alpha0 - reference.alpha0)
    # the grid is only accurate to its mesh, so it is reported but not flagged
    if args.method != "grid" and diff > CROSS_CHECK_TOL:
        doc["warnings"] = [f"{sol.method} and LP disagree by {diff:.3e}"]
        print(f"cmcq: warning: {doc['warnings'][0]}", file=sys.stderr)
    _emit(render(doc, args.format), args.output)
    return EXIT_OK


def cmd_filter_demo(args) -> int:
    checks = run_filtering_demo(args.tol)
    lines = [f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}" for c in checks]
    ok = all(c.passed for c in checks)
    lines.append(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _batch_one(path: str, tol: float, timing: bool, fmt: str) -> dict:
    name = Path(path).name
    try:
        rho, sf = read_density(path, tol)
        report = analyze_density(rho, tol, label=sf.metadata.get("label"), timing=timing)
    except (ValueError, ArithmeticError, np.linalg.LinAlgError, RuntimeError) as exc:
        return {"file": name, "status": "failed", "error": str(exc)}
    status = "detected" if report["detected"].get("cmc") else "undetected"
    return {"file": name, "status": status, "npt": report["detected"]["ppt"], "text": render(report, fmt)}


def cmd_batch(args) -> int:
    src = Path(args.directory)
    if not src.is_dir():
        raise ValueError(f"{src}: not a directory")
    out = Path(args.out) if args.out else src / "reports"
    files = sorted(str(p) for p in src.glob("*.json") if p.is_file())
    work = [(f, args.tol, not args.no_timing, args.format) for f in files]
    if args.jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_batch_one, *zip(*work)))
    else:
        results = [_batch_one(*w) for w in work]

    out.mkdir(parents=True, exist_ok=True)
    ext = ".txt" if args.format == "text" else ".json"
    entries = []
    for r in results:
        entry = {k: v for k, v in r.items() if k != "text"}
        if "text" in r:
            report_name = Path(r["file"]).stem + ext
            (out / report_name).write_text(r["text"])
            entry["report"] = report_name
        entries.append(entry)
    summary = {
        "schema": "cmcq.batch/1",
        "files": len(entries),
        "detected": sum(e["status"] == "detected" for e in entries),
        "undetected": sum(e["status"] == "undetected" for e in entries),
        "failed": sum(e["status"] == "failed" for e in entries),
        "npt": sum(bool(e.get("npt")) for e in entries),
        "entries": entries,
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    sys.stdout.write(
        f"{summary['files']} files: {summary['detected']} detected, {summary['undetected']} undetected, "
        f"{summary['failed']} failed; reports in {out}\n"
    )
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="numerical tolerance (default 1e-9 or $CMCQ_TOL)")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--no-timing", action="store_true", help="omit timing so reports are byte-for-byte reproducible")

    parser = argparse.ArgumentParser(prog="cmcq", description="Covariance-matrix entanglement detection and quantification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="analyze a state file")
    p.add_argument("input")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("pure", parents=[common], help="exact values for a pure state given by Schmidt coefficients")
    p.add_argument("--schmidt", nargs="+", required=True, metavar="LAMBDA")
    p.add_argument("--renorm", action="store_true", help="rescale coefficients that do not sum to 1")
    p.set_defaults(func=cmd_pure)

    p = sub.add_parser("sc", parents=[common], help="exact values for a Schmidt-correlated state file")
    p.add_argument("input")
    p.set_defaults(func=cmd_sc)

    p = sub.add_parser("maxmin", parents=[common], help="solve the max-min problem")
    p.add_argument("--b", nargs="+", metavar="B_IJ", help="pair values b_12, b_13, ..., b_(d-1)d")
    p.add_argument("--schmidt", nargs="+", metavar="LAMBDA")
    p.add_argument("--method", choices=("closed", "bisect", "grid"), default="closed")
    p.add_argument("--steps", type=int, default=400)
    p.set_defaults(func=cmd_maxmin)

    p = sub.add_parser("paper-demo", parents=[common], help="reproduce the local filtering example")
    p.set_defaults(func=cmd_filter_demo)

    p = sub.add_parser("batch", parents=[common], help="analyze every *.json state file in a directory")
    p.add_argument("directory")
    p.add_argument("--jobs", "-j", type=int, default=1)
    p.add_argument("--out", help="report directory (default DIRECTORY/reports)")
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol is None:
        args.tol = default_tol()
    if not (args.tol > 0 and math.isfinite(args.tol)):
        print("cmcq: --tol must be positive", file=sys.stderr)
        return EXIT_INVALID
    if getattr(args, "jobs", 1) < 1:
        print("cmcq: --jobs must be at least 1", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except (np.linalg.LinAlgError, RuntimeError, ArithmeticError) as exc:
        print(f"cmcq: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"cmcq: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
