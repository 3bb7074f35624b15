"""Convergence diagnostics and benchmark table assembly."""

from __future__ import annotations

import decimal
import io
from dataclasses import dataclass
from fractions import Fraction

from .errors import InsufficientData, PrecisionExhausted
from .methods import IterationTrace, MethodSpec, RunStatus, run
from .numerics import (
    BigReal,
    ErrorMagnitude,
    PrecisionContext,
    compare_error,
    exp,
    ln,
    to_sci_string,
)
from .problems import PolynomialProblem, Problem
from .series import RationalPoly

__all__ = [
    "ACOC_SKIP",
    "AcocReport",
    "BenchmarkRow",
    "ComparisonReport",
    "acoc",
    "asymptotic_constant",
    "build_table",
    "efficiency_index",
    "render_csv",
    "render_markdown",
]

# (method_id, problem_id) pairs whose measured order is known to sit away from
# the method's nominal order; verify-order reports them but does not fail.
ACOC_SKIP = {
    ("3.1", "f2"): "order measures ~9 on this problem; reported as measured",
}


def _to_decimal(x: BigReal, sig: int = 30) -> decimal.Decimal:
    return decimal.Decimal(to_sci_string(x, sig))


@dataclass(frozen=True)
class AcocReport:
    """Computational order estimated from the last four iterates."""

    value: BigReal | None
    usable: bool
    detail: str = ""

    def rounded(self, places: int = 4) -> decimal.Decimal | None:
        if not self.usable:
            return None
        q = decimal.Decimal(1).scaleb(-places)
        return _to_decimal(self.value).quantize(q, rounding=decimal.ROUND_HALF_EVEN)


def acoc(trace: IterationTrace) -> AcocReport:
    """ln|dx_{n+1}/dx_n| / ln|dx_n/dx_{n-1}| over the final four iterates."""
    if len(trace.iterates) < 4:
        raise InsufficientData(
            f"need at least 4 iterates, trace has {len(trace.iterates)}"
        )
    x = trace.iterates[-4:]
    d0, d1, d2 = x[1] - x[0], x[2] - x[1], x[3] - x[2]
    if d0.is_zero() or d1.is_zero() or d2.is_zero():
        return AcocReport(None, False, "zero difference between consecutive iterates")
    r_num = abs(d2 / d1)
    r_den = abs(d1 / d0)
    if r_num == 1 or r_den == 1:
        return AcocReport(None, False, "log argument equal to 1")
    return AcocReport(ln(r_num) / ln(r_den), True)


def efficiency_index(order: int, evals: int, ctx: PrecisionContext) -> BigReal:
    """order**(1/evals) at context precision."""
    if order < 2:
        raise ValueError("order must be >= 2")
    if evals < 1:
        raise ValueError("evals must be >= 1")
    return exp(ln(ctx.real(order)) / evals)


@dataclass(frozen=True)
class ComparisonReport:
    """Measured e_{n+1}/e_n^8 against the symbolic prediction."""

    measured: BigReal
    predicted: Fraction
    rel_deviation: BigReal | None
    predicted_zero: bool
    pair_index: int


def asymptotic_constant(trace: IterationTrace, predicted: RationalPoly,
                        problem: Problem, ctx: PrecisionContext) -> ComparisonReport:
    """Check the eighth-order error constant on a synthetic polynomial problem.

    Exact normalized derivatives are only available for polynomial problems
    with a rational root, so the check is restricted to those by design.
    """
    if not isinstance(problem, PolynomialProblem) or problem.rational_root is None:
        raise InsufficientData(
            "asymptotic-constant checks need a polynomial problem with a rational root"
        )
    values = {k: problem.normalized_derivative(k) for k in range(2, 10)}
    predicted_value = predicted.substitute(values)
    if predicted_value == 0:
        return ComparisonReport(ctx.zero(), predicted_value, None, True, -1)
    if len(trace.iterates) < 4:
        raise InsufficientData("need at least 4 iterates (3 error pairs)")

    # last pair whose e_n^8 still sits above the precision floor
    floor = ctx.residual_floor
    pair = None
    for n in range(len(trace.abs_errors) - 2, -1, -1):
        e_n, e_n1 = trace.abs_errors[n], trace.abs_errors[n + 1]
        if e_n.is_zero() or e_n1.is_zero():
            continue
        if e_n ** 8 > floor and e_n1 > floor:
            pair = n
            break
    if pair is None:
        raise PrecisionExhausted(
            "every e_n^8 is below the precision floor; rerun with more digits"
        )

    measured = trace.abs_errors[pair + 1] / trace.abs_errors[pair] ** 8
    pred_abs = abs(ctx.real(predicted_value))
    rel = abs(measured - pred_abs) / pred_abs
    return ComparisonReport(measured, predicted_value, rel, False, pair)


@dataclass(frozen=True)
class BenchmarkRow:
    """One rendered table row: method, weight label, 4 error cells, ACOC."""

    method_id: str
    weight_label: str
    errors: list[ErrorMagnitude | None]
    acoc: decimal.Decimal | None
    status: str

    def cells(self) -> list[str]:
        return [str(e) if e is not None else "-" for e in self.errors]


def build_table(methods: list[MethodSpec], problem: Problem,
                x0: BigReal | None = None, ctx: PrecisionContext | None = None,
                iters: int = 4) -> list[BenchmarkRow]:
    """Run every method ``iters`` iterations from x0 and assemble rows."""
    if ctx is None:
        if x0 is None:
            raise ValueError("either x0 or ctx must be given")
        ctx = x0.ctx
    if x0 is None:
        x0 = ctx.real(problem.x0_default)
    zero = ctx.zero()

    rows = []
    for m in methods:
        tr = run(m, problem, x0, iters, ctx)
        errs: list[ErrorMagnitude | None] = [
            compare_error(e, zero) for e in tr.abs_errors[1:]
        ]
        errs += [None] * (iters - len(errs))
        a = None
        if len(tr.iterates) >= 4:
            rep = acoc(tr)
            a = rep.rounded()
        status = tr.status.value
        if tr.status is RunStatus.STEP_FAILED:
            status += f" ({tr.failure_reason} at n={tr.failed_at})"
        rows.append(BenchmarkRow(m.id, m.weight_label, errs, a, status))
    return rows


def render_markdown(rows: list[BenchmarkRow], title: str = "") -> str:
    n_err = max((len(r.errors) for r in rows), default=4)
    out = []
    if title:
        out.append(f"**{title}**")
        out.append("")
    header = ["M", "W-F"] + [f"x{k} - x*" for k in range(1, n_err + 1)] + ["ACOC"]
    out.append("| " + " | ".join(header) + " |")
    out.append("|" + "---|" * len(header))
    for r in rows:
        acoc_s = str(r.acoc) if r.acoc is not None else "-"
        label = f"({r.weight_label})" if r.weight_label != "-" else "-"
        cells = [f"({r.method_id})", label] + r.cells() + [acoc_s]
        out.append("| " + " | ".join(cells) + " |")
    if any(r.status != "max_iters" and r.status != "converged" for r in rows):
        out.append("")
        for r in rows:
            if r.status.startswith("step_failed"):
                out.append(f"- ({r.method_id}): {r.status}")
    return "\n".join(out)


def render_csv(rows: list[BenchmarkRow]) -> str:
    import csv

    n_err = max((len(r.errors) for r in rows), default=4)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["method", "weight"]
    for k in range(1, n_err + 1):
        header += [f"err{k}_mant", f"err{k}_exp"]
    header += ["acoc", "status"]
    w.writerow(header)
    for r in rows:
        row = [r.method_id, r.weight_label]
        for e in r.errors:
            if e is None:
                row += ["", ""]
            elif e.exact_zero:
                row += ["0.000", "0"]
            else:
                row += [str(e.mantissa), str(e.exponent)]
        row += [str(r.acoc) if r.acoc is not None else "", r.status]
        w.writerow(row)
    return buf.getvalue()
