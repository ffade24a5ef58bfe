"""Command line interface.

Exit codes: 0 success or hit, 1 usage/parse error, 2 precondition failure,
3 no hit within bounds (or a nonzero residual from ``verify``), 4 homography
input to ``detect``.
"""
from __future__ import annotations

import argparse
import sys

from . import report
from .errors import KoenigsError, ParseError
from .linearized import bell, linearize_row, verify_row
from .parser import parse_expression
from .poincare import constants_check, homography_closed_form, solve_koenigs, validate_map
from .ritt import (
    HIT,
    HOMOGRAPHY,
    DetectionBounds,
    RittEquationSigma,
    RittEquationTau,
    transcendence_report,
    verify_equation_sigma,
    verify_equation_tau,
)

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_NO_HIT, EXIT_HOMOGRAPHY = 0, 1, 2, 3, 4
DEFAULT_ORDER = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the JSON report")
    common.add_argument("--out", metavar="FILE", help="write the report to FILE instead of stdout")

    p = _Parser(prog="koenigs", description="Koenigs functions and Ritt type-(A) detection")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", parents=[common], help="sigma and tau coefficients")
    s.add_argument("--map", required=True)
    s.add_argument("--order", type=int, default=DEFAULT_ORDER)

    d = sub.add_parser("detect", parents=[common], help="search for a type-(A) equation")
    d.add_argument("--map", required=True)
    defaults = DetectionBounds()
    d.add_argument("--order", type=int, default=None)
    d.add_argument("--r-max", type=int, default=defaults.r_max)
    d.add_argument("--j-max", type=int, default=defaults.j_max)
    d.add_argument("--deg-max", type=int, default=defaults.deg_max)
    d.add_argument("--margin", type=int, default=defaults.margin)
    d.add_argument("--no-confirm", action="store_true",
                   help="skip re-verification of a hit at doubled order")

    v = sub.add_parser("verify", parents=[common], help="residual of a given equation")
    v.add_argument("--map", required=True)
    v.add_argument("--side", choices=("tau", "sigma"), required=True)
    v.add_argument("--r", type=int, required=True)
    v.add_argument("--j", type=int, required=True)
    v.add_argument("--A", required=True, dest="A")
    v.add_argument("--order", type=int, default=DEFAULT_ORDER)

    b = sub.add_parser("bell", parents=[common], help="partial Bell polynomial")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--k", type=int, required=True)

    li = sub.add_parser("linearize", parents=[common], help="linearized row n")
    li.add_argument("--map", required=True)
    li.add_argument("--n", type=int, required=True)
    li.add_argument("--verify", action="store_true")
    li.add_argument("--order", type=int, default=DEFAULT_ORDER)

    c = sub.add_parser("constants-check", parents=[common], help="forcing factors q^n - 1")
    c.add_argument("--map", required=True)
    c.add_argument("--order", type=int, default=DEFAULT_ORDER)
    return p


def _map(src: str):
    return validate_map(parse_expression(src, ("z",)))


def _cmd_solve(args):
    m = _map(args.map)
    pair = solve_koenigs(m, args.order)
    out = report.pair_json(pair)
    if m.is_homography:
        out["closed_form_sigma"] = report.ratfun_json(homography_closed_form(m), "t")
    inputs = {"map": args.map, "R": m.R.to_str("z"), "order": args.order}
    return report.envelope("solve", inputs, out), EXIT_OK


def _cmd_detect(args):
    m = _map(args.map)
    bounds = DetectionBounds(args.r_max, args.j_max, args.deg_max, args.order, args.margin)
    pair = solve_koenigs(m, bounds.order)
    rep = transcendence_report(pair, bounds, confirm=not args.no_confirm)
    inputs = {"map": args.map, "R": m.R.to_str("z")}
    code = {HIT: EXIT_OK, HOMOGRAPHY: EXIT_HOMOGRAPHY}.get(rep.outcome, EXIT_NO_HIT)
    return report.envelope("detect", inputs, report.detection_json(rep)), code


def _cmd_verify(args):
    m = _map(args.map)
    A = parse_expression(args.A, ("x",))
    pair = solve_koenigs(m, args.order)
    if args.side == "tau":
        eq = RittEquationTau(args.r, args.j, A)
        res = verify_equation_tau(pair, eq)
    else:
        eq = RittEquationSigma(args.r, args.j, A)
        res = verify_equation_sigma(pair, eq)
    inputs = {"map": args.map, "R": m.R.to_str("z"), "side": args.side, "r": args.r,
              "j": args.j, "A": args.A, "order": args.order}
    out = {"side": args.side, "equation": report.equation_json(eq),
           "residual": report.residual_json(res)}
    return report.envelope("verify", inputs, out), EXIT_OK if res.ok else EXIT_NO_HIT


def _cmd_bell(args):
    b = bell(args.n, args.k)
    return report.envelope("bell", {"n": args.n, "k": args.k}, report.bell_json(b)), EXIT_OK


def _cmd_linearize(args):
    m = _map(args.map)
    row = linearize_row(m, args.n)
    out = report.row_json(row)
    code = EXIT_OK
    inputs = {"map": args.map, "R": m.R.to_str("z"), "n": args.n}
    if args.verify:
        pair = solve_koenigs(m, args.order)
        checks = [verify_row(linearize_row(m, k), pair) for k in range(1, args.n + 1)]
        out["verify"] = [report.residual_json(r) for r in checks]
        inputs["order"] = args.order
        if not all(r.ok for r in checks):
            code = EXIT_PRECONDITION
    return report.envelope("linearize", inputs, out), code


def _cmd_constants(args):
    m = _map(args.map)
    trace = constants_check(m, args.order)
    inputs = {"map": args.map, "R": m.R.to_str("z"), "order": args.order}
    return report.envelope("constants-check", inputs, report.constants_json(trace)), EXIT_OK


COMMANDS = {
    "solve": _cmd_solve,
    "detect": _cmd_detect,
    "verify": _cmd_verify,
    "bell": _cmd_bell,
    "linearize": _cmd_linearize,
    "constants-check": _cmd_constants,
}


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        doc, code = COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"koenigs: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KoenigsError as exc:
        print(f"koenigs: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    text = report.dumps(doc) if args.json else report.render_text(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main(argv: list[str] | None = None) -> None:
    try:
        code = run(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
    sys.exit(code)
