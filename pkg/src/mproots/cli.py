"""Command-line interface: benchmark tables, order checks, theorem verification.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import analysis, methods, problems, weights
from .numerics import PrecisionContext, to_sci_string

_DEFAULT_DIGITS_ENV = "MPROOTS_DIGITS"


def _default_digits() -> int:
    raw = os.environ.get(_DEFAULT_DIGITS_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise SystemExit(f"invalid {_DEFAULT_DIGITS_ENV}={raw!r}: not an integer")
    return 7000


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r} ({e})")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mproots",
        description="Multi-precision three-point root-finding benchmarks and proofs",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=None,
                        help="significant decimal digits (default 7000, env MPROOTS_DIGITS)")
    common.add_argument("--backend", default=None,
                        help="arithmetic backend: gmpy2 or decimal (default: auto)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=type(p))

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    run_p = add_parser("run", help="run one method on one problem, print the trace")
    run_p.add_argument("--method", required=True)
    run_p.add_argument("--problem", required=True)
    run_p.add_argument("--x0", default=None,
                       help="starting point as a decimal string (full precision)")
    run_p.add_argument("--iters", type=int, default=4)

    table_p = add_parser("table", help="benchmark table for one problem")
    table_p.add_argument("--problem", required=True)
    table_p.add_argument("--methods", default=",".join(methods.TABLE_METHOD_IDS),
                         help="comma-separated method ids")
    table_p.add_argument("--x0", default=None)
    table_p.add_argument("--iters", type=int, default=4)
    table_p.add_argument("--format", choices=("md", "csv"), default="md")
    table_p.add_argument("--output", default=None, help="write to file instead of stdout")

    order_p = add_parser("verify-order",
                         help="compare measured order against the theoretical one")
    order_p.add_argument("--methods", default=",".join(methods.TABLE_METHOD_IDS))
    order_p.add_argument("--problems", default="f1,f2,f3,f4")
    order_p.add_argument("--iters", type=int, default=4)
    order_p.add_argument("--tolerance", default="0.01",
                         help="allowed |measured - theoretical| (decimal string)")

    thm_p = add_parser("verify-theorem",
                       help="exact symbolic check of the error equation")
    thm_p.add_argument("--h0", type=_fraction, default=Fraction(1),
                       help="weight value at 0 (exact rational, default 1)")
    thm_p.add_argument("--h1", type=_fraction, default=Fraction(2),
                       help="weight slope at 0 (exact rational, default 2)")

    wt_p = add_parser("validate-weights", help="check H(0)=1 and H'(0)=2")
    wt_p.add_argument("--weights", default="w1,w2,w3")

    return p


def _make_ctx(args, parser) -> PrecisionContext:
    digits = args.digits if args.digits is not None else _default_digits()
    try:
        return PrecisionContext(digits, args.backend)
    except ValueError as e:
        parser.error(str(e))


def _get_methods(ids: str, parser) -> list:
    out = []
    for mid in (s.strip() for s in ids.split(",") if s.strip()):
        try:
            out.append(methods.get_method(mid))
        except KeyError as e:
            parser.error(str(e))
    if not out:
        parser.error("no methods selected")
    return out


def _get_problems(ids: str, parser) -> list:
    out = []
    for pid in (s.strip() for s in ids.split(",") if s.strip()):
        try:
            out.append(problems.get_problem(pid))
        except KeyError as e:
            parser.error(str(e))
    if not out:
        parser.error("no problems selected")
    return out


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _get_one(items: list, what: str, parser):
    if len(items) != 1:
        parser.error(f"exactly one {what} expected")
    return items[0]


def cmd_run(args, parser) -> int:
    ctx = _make_ctx(args, parser)
    method = _get_one(_get_methods(args.method, parser), "method", parser)
    problem = _get_one(_get_problems(args.problem, parser), "problem", parser)
    x0 = ctx.real(args.x0 if args.x0 is not None else problem.x0_default)
    trace = methods.run(method, problem, x0, args.iters, ctx)
    print(methods.render_trace(trace))
    return 0


def cmd_table(args, parser) -> int:
    ctx = _make_ctx(args, parser)
    ms = _get_methods(args.methods, parser)
    problem = _get_one(_get_problems(args.problem, parser), "problem", parser)
    x0 = ctx.real(args.x0 if args.x0 is not None else problem.x0_default)
    rows = analysis.build_table(ms, problem, x0, ctx, args.iters)
    if args.format == "csv":
        text = analysis.render_csv(rows)
    else:
        title = (f"{problem.id}: f(x) = {problem.expression}, "
                 f"x0 = {args.x0 or problem.x0_default}, digits = {ctx.digits}")
        text = analysis.render_markdown(rows, title)
    _emit(text, args.output)
    return 0


def cmd_verify_order(args, parser) -> int:
    ctx = _make_ctx(args, parser)
    ms = _get_methods(args.methods, parser)
    ps = _get_problems(args.problems, parser)
    tol = ctx.real(args.tolerance)
    failures = 0
    for m in sorted(ms, key=lambda m: m.id):
        for p in sorted(ps, key=lambda p: p.id):
            x0 = ctx.real(p.x0_default)
            trace = methods.run(m, p, x0, args.iters, ctx)
            note = analysis.ACOC_SKIP.get((m.id, p.id))
            if trace.status.value == "step_failed" or len(trace.iterates) < 4:
                print(f"{m.id} on {p.id}: FAIL ({trace.status.value}: "
                      f"{trace.failure_reason or 'too few iterates'})")
                failures += 1
                continue
            rep = analysis.acoc(trace)
            if not rep.usable:
                print(f"{m.id} on {p.id}: FAIL (ACOC unusable: {rep.detail})")
                failures += 1
                continue
            shown = rep.rounded()
            dev = abs(rep.value - m.order_theoretical)
            if note is not None:
                print(f"{m.id} on {p.id}: ACOC={shown} vs order {m.order_theoretical} "
                      f"-- skipped ({note})")
            elif dev < tol:
                print(f"{m.id} on {p.id}: ACOC={shown} vs order "
                      f"{m.order_theoretical} -- ok")
            else:
                print(f"{m.id} on {p.id}: ACOC={shown} vs order "
                      f"{m.order_theoretical} -- FAIL")
                failures += 1
    return 1 if failures else 0


def cmd_verify_theorem(args, parser) -> int:
    from .series import derive_family_error, resolve_r8

    report = derive_family_error(args.h0, args.h1)
    print(f"error equation under H(0) = {args.h0}, H'(0) = {args.h1}:")
    for k in range(4, 9):
        print(f"  R{k} = {report.R[k].render()}")
    ok = report.all_subeighth_vanish()
    if args.h0 == 1 and args.h1 == 2:
        res = resolve_r8()
        print(f"R8 third factor resolves to the {res.matches.replace('_', ' ')} variant:")
        print(f"  R8 = {res.r8.render()}")
        print(f"  1/2*c2^2*(4*c2^2 - c3)*(c2^3 - 8*c2*c3 + 2*c4) "
              f"{'==' if res.matches == 'c2_cubed' else '!='} R8")
    print("sub-eighth coefficients vanish" if ok
          else "sub-eighth coefficients DO NOT vanish")
    return 0 if ok else 1


def cmd_validate_weights(args, parser) -> int:
    ctx = _make_ctx(args, parser)
    ids = [s.strip() for s in args.weights.split(",") if s.strip()]
    all_ok = True
    for wid in ids:
        try:
            w = weights.get_weight(wid)
        except KeyError as e:
            parser.error(str(e))
        rep = weights.validate_weight(w, ctx)
        print(rep.summary() + f"  [H(0) measured exactly, slope "
              f"{to_sci_string(rep.slope_estimate, 8)}]")
        all_ok = all_ok and rep.passed
    return 0 if all_ok else 1


_COMMANDS = {
    "run": cmd_run,
    "table": cmd_table,
    "verify-order": cmd_verify_order,
    "verify-theorem": cmd_verify_theorem,
    "validate-weights": cmd_validate_weights,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    return _COMMANDS[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())
