"""Command line entry point.

Every subcommand prints JSON to stdout and diagnostics to stderr.  Exit codes:
0 success or pass, 1 usage or schema error, 2 numerical failure or failed check.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .arrangement import Arrangement, MultiplicityList
from .exceptions import CollisionError, LocusConfError, NonConvergenceError, SchemaError
from .locus import (
    DEFAULT_FIRST_TOL,
    DEFAULT_LOCUS_TOL,
    DEFAULT_REFLECTION_TOL,
    coarse_symmetry_violations,
    is_locus_configuration,
    locus_residual,
)
from .oracles import SUITES
from .solver import SolverConfig, solve_equilibrium
from .svg import STYLES, render_svg

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

log = logging.getLogger("locusconf")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(payload) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _load_arrangement(path: str) -> Arrangement:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from None
    return Arrangement.from_dict(data)


def _collision_report(arrangement: Arrangement) -> dict:
    lines = []
    for i in range(arrangement.n):
        try:
            res, rel = locus_residual(arrangement, i, 1)
            lines.append({"index": i, "residuals": [res], "relative": [rel]})
        except CollisionError as exc:
            lines.append({"index": i, "error": str(exc)})
    return {"error": "collision", "lines": lines}


def cmd_solve(args) -> int:
    m = MultiplicityList(tuple(args.multiplicities))
    cfg = SolverConfig(grad_tol=args.grad_tol, max_iters=args.max_iters)
    try:
        result = solve_equilibrium(m, cfg)
    except NonConvergenceError as exc:
        log.error("%s", exc)
        _emit({"error": "non-convergence", "message": str(exc), "thetas": exc.thetas,
               "gradient_inf_norm": exc.gradient_inf_norm, "iterations": exc.iterations})
        return EXIT_NUMERIC
    payload = result.to_dict()
    if args.verify:
        report = is_locus_configuration(result.arrangement, tol=args.tol_locus, first_tol=args.tol_first)
        payload["locus_report"] = report.to_dict()
        log.info("first locus: %s, all locus: %s", report.first_locus_pass, report.all_locus_pass)
    if args.output:
        Path(args.output).write_text(json.dumps(payload, indent=2) + "\n")
    _emit(payload)
    log.info("converged in %d iterations", result.iterations)
    return EXIT_OK


def cmd_verify(args) -> int:
    arrangement = _load_arrangement(args.path)
    try:
        report = is_locus_configuration(
            arrangement, tol=args.tol_locus, first_tol=args.tol_first, reflection_tol=args.tol_reflection
        )
    except CollisionError as exc:
        log.error("%s", exc)
        _emit(_collision_report(arrangement))
        return EXIT_NUMERIC
    _emit(report.to_dict())
    if not report.all_locus_pass:
        log.warning("not a locus configuration (max relative residual %.3e)", report.max_relative)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_coarse(args) -> int:
    m = MultiplicityList(tuple(args.multiplicities))
    bad = coarse_symmetry_violations(m)
    mirrors = [i for i in range(len(m)) if m[i] > 1]
    _emit({
        "multiplicities": list(m.values),
        "coarsely_symmetric": not bad,
        "mirror_lines": mirrors,
        "violations": [{"index": i, "offset": j} for i, j in bad],
    })
    return EXIT_OK if not bad else EXIT_NUMERIC


def cmd_plot(args) -> int:
    arrangement = _load_arrangement(args.path)
    svg = render_svg(arrangement, args.style)
    Path(args.output).write_text(svg)
    _emit({"output": str(args.output), "lines": arrangement.n, "style": args.style})
    return EXIT_OK


def cmd_check(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    rows = []
    for name in names:
        fn = SUITES[name]
        suite_rows = fn() if name == "families" else fn(seed=args.seed)
        rows.extend((name, r) for r in suite_rows)
    width = max(len(r.name) for _, r in rows)
    for suite, r in rows:
        print(f"{'PASS' if r.passed else 'FAIL'}  {suite:<10} {r.name:<{width}}  {r.value:.3e} < {r.tolerance:.0e}",
              file=sys.stderr)
    ok = all(r.passed for _, r in rows)
    _emit({"suite": args.suite, "passed": ok, "rows": [dict(r.to_dict(), suite=s) for s, r in rows]})
    return EXIT_OK if ok else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="locusconf", description="Charged trigonometric Calogero-Moser equilibria and locus configurations.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def tolerances(sp):
        sp.add_argument("--tol-first", type=float, default=DEFAULT_FIRST_TOL,
                        help="relative tolerance for the first locus equations")
        sp.add_argument("--tol-locus", type=float, default=DEFAULT_LOCUS_TOL,
                        help="relative tolerance for the higher locus equations")

    s = sub.add_parser("solve", help="compute the equilibrium arrangement for a multiplicity list")
    s.add_argument("multiplicities", type=int, nargs="+")
    s.add_argument("--grad-tol", type=float, default=1e-12)
    s.add_argument("--max-iters", type=int, default=200)
    s.add_argument("--verify", action="store_true", help="append the locus report")
    s.add_argument("-o", "--output", help="also write the result JSON to this file")
    tolerances(s)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check all locus equations for an arrangement file")
    v.add_argument("path")
    tolerances(v)
    v.add_argument("--tol-reflection", type=float, default=DEFAULT_REFLECTION_TOL)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("coarse", help="test a multiplicity list for coarse symmetry")
    c.add_argument("multiplicities", type=int, nargs="+")
    c.set_defaults(func=cmd_coarse)

    pl = sub.add_parser("plot", help="draw an arrangement file as SVG")
    pl.add_argument("path")
    pl.add_argument("-o", "--output", required=True)
    pl.add_argument("--style", choices=sorted(STYLES), default="color")
    pl.set_defaults(func=cmd_plot)

    ch = sub.add_parser("check", help="run the oracle suites")
    ch.add_argument("suite", choices=[*SUITES, "all"])
    ch.add_argument("--seed", type=int, default=0)
    ch.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except CollisionError as exc:
        print(f"locusconf: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (SchemaError, ValueError) as exc:
        print(f"locusconf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LocusConfError as exc:
        print(f"locusconf: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
