"""Iteration engine: one-step maps for every cataloged scheme, plus the driver.

All steps are stateless functions of (problem, current iterate); the driver
``run`` turns them into an IterationTrace and converts step-level exceptions
into a ``step_failed`` status so benchmark tables can render partial rows.

Evaluation budgets are part of the contract: each eighth-order step calls f
exactly three times and f' exactly once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .errors import DenominatorZero, DerivativeZero, DomainError, StepError, WeightPole
from .numerics import BigReal, PrecisionContext, compare_error, to_sci_string
from .problems import Problem
from .weights import WeightFn, builtin_weights

__all__ = [
    "IterationTrace",
    "MethodSpec",
    "RunStatus",
    "TABLE_METHOD_IDS",
    "catalog",
    "correction_factor",
    "get_method",
    "render_trace",
    "run",
    "step_bi_ren_wu",
    "step_family",
    "step_maheshwari",
    "step_newton",
    "step_nonoptimal_8",
    "step_sharma_sharma",
    "step_wang_liu",
]


def _check_ctx(x: BigReal, ctx: PrecisionContext | None) -> PrecisionContext:
    if ctx is not None and ctx != x.ctx:
        raise ValueError("iterate was built under a different precision context")
    return x.ctx


def _derivative(problem: Problem, x: BigReal) -> BigReal:
    d = problem.df(x)
    if d.is_zero():
        raise DerivativeZero("f'(x) = 0")
    return d


def correction_factor(fx: BigReal, fy: BigReal, fz: BigReal) -> BigReal:
    """Rational combination of f-values approximating f'(x)/f'(z).

    Denominator guards are the caller's job; this assumes they are nonzero.
    """
    num = fy ** 3 * (fx - 10 * fy) + 4 * fx * fx * (fy * fy + fx * fy)
    den = fx * (2 * fx - fy) ** 2 * (fy - fz)
    return num / den


def step_family(problem: Problem, x: BigReal, w: WeightFn,
                ctx: PrecisionContext | None = None) -> BigReal:
    """One step of the optimal eighth-order three-point family with weight H.

    Substeps: a Newton point y, a fourth-order corrected point z, then a
    damped Newton-like correction from z scaled by F(x,y,z) * H(f(z)/f(x)).
    Exactly 4 new evaluations: f(x), f'(x), f(y), f(z).
    """
    _check_ctx(x, ctx)
    fx = problem.f(x)
    dfx = _derivative(problem, x)
    if fx.is_zero():
        raise DenominatorZero("f(x)")
    y = x - fx / dfx
    fy = problem.f(y)
    dyx = fy - fx
    if dyx.is_zero():
        raise DenominatorZero("f(y) - f(x)")
    z = x + (fx * fx / dyx - fy * fy / fx) / dfx
    fz = problem.f(z)
    if fz.is_zero():
        return z
    if (2 * fx - fy).is_zero():
        raise DenominatorZero("2 f(x) - f(y)")
    if (fy - fz).is_zero():
        raise DenominatorZero("f(y) - f(z)")
    corr = correction_factor(fx, fy, fz)
    s = fz / fx
    try:
        h = w.eval(s)
    except ZeroDivisionError:
        raise WeightPole(f"weight {w.id} hit a pole at s = f(z)/f(x)") from None
    return z - fz / dfx * corr * h


def step_maheshwari(problem: Problem, x: BigReal,
                    ctx: PrecisionContext | None = None) -> BigReal:
    """One fourth-order step (two-point, 3 evaluations: f(x), f'(x), f(y))."""
    _check_ctx(x, ctx)
    fx = problem.f(x)
    dfx = _derivative(problem, x)
    if fx.is_zero():
        raise DenominatorZero("f(x)")
    y = x - fx / dfx
    fy = problem.f(y)
    dyx = fy - fx
    if dyx.is_zero():
        raise DenominatorZero("f(y) - f(x)")
    return x + (fx * fx / dyx - fy * fy / fx) / dfx


def step_nonoptimal_8(problem: Problem, x: BigReal,
                      ctx: PrecisionContext | None = None) -> BigReal:
    """Fourth-order step followed by a full Newton step (5 evaluations)."""
    z = step_maheshwari(problem, x, ctx)
    fz = problem.f(z)
    if fz.is_zero():
        return z
    dfz = problem.df(z)
    if dfz.is_zero():
        raise DerivativeZero("f'(z) = 0")
    return z - fz / dfz


def step_newton(problem: Problem, x: BigReal,
                ctx: PrecisionContext | None = None) -> BigReal:
    """Classic second-order step (2 evaluations)."""
    _check_ctx(x, ctx)
    fx = problem.f(x)
    dfx = _derivative(problem, x)
    return x - fx / dfx


def step_bi_ren_wu(problem: Problem, x: BigReal,
                   ctx: PrecisionContext | None = None,
                   beta: Fraction = Fraction(-1, 2),
                   alpha: Fraction = Fraction(1)) -> BigReal:
    """Eighth-order comparator built on divided differences.

    Third substep divides by f[z,y] + f[z,x,x](z-y) and applies the weight
    1/(1 - alpha*t)^2 with t = f(z)/f(x).
    """
    _check_ctx(x, ctx)
    fx = problem.f(x)
    dfx = _derivative(problem, x)
    if fx.is_zero():
        raise DenominatorZero("f(x)")
    y = x - fx / dfx
    fy = problem.f(y)
    den = fx + (beta - 2) * fy
    if den.is_zero():
        raise DenominatorZero("f(x) + (beta - 2) f(y)")
    z = y - fy / dfx * (fx + beta * fy) / den
    fz = problem.f(z)
    if fz.is_zero():
        return z
    if (z - y).is_zero():
        raise DenominatorZero("z - y")
    if (z - x).is_zero():
        raise DenominatorZero("z - x")
    f_zy = (fz - fy) / (z - y)
    f_zx = (fz - fx) / (z - x)
    f_zxx = (f_zx - dfx) / (z - x)
    den2 = f_zy + f_zxx * (z - y)
    if den2.is_zero():
        raise DenominatorZero("f[z,y] + f[z,x,x](z - y)")
    t = fz / fx
    pole = 1 - alpha * t
    if pole.is_zero():
        raise DenominatorZero("1 - alpha t")
    return z - fz / den2 / (pole * pole)


def step_wang_liu(problem: Problem, x: BigReal,
                  ctx: PrecisionContext | None = None) -> BigReal:
    """Eighth-order comparator with ratio weights.

    Uses t = f(y)/f(x) and s = f(z)/f(y); the z substep damps Newton by
    (1-t)/(1-2t), the last substep applies (5-2t+t^2)/(5-12t) + (1+4t)s.
    """
    _check_ctx(x, ctx)
    fx = problem.f(x)
    dfx = _derivative(problem, x)
    if fx.is_zero():
        raise DenominatorZero("f(x)")
    y = x - fx / dfx
    fy = problem.f(y)
    t = fy / fx
    g_den = 1 - 2 * t
    if g_den.is_zero():
        raise DenominatorZero("1 - 2t")
    z = x - fx / dfx * (1 - t) / g_den
    fz = problem.f(z)
    if fz.is_zero():
        return z
    if fy.is_zero():
        raise DenominatorZero("f(y)")
    s = fz / fy
    h_den = 5 - 12 * t
    if h_den.is_zero():
        raise DenominatorZero("5 - 12t")
    h = (5 - 2 * t + t * t) / h_den
    v = 1 + 4 * t
    return z - fz / dfx * (h + v * s)


def step_sharma_sharma(problem: Problem, x: BigReal,
                       ctx: PrecisionContext | None = None,
                       alpha: Fraction = Fraction(1)) -> BigReal:
    """Eighth-order comparator on first-order divided differences.

    Third substep uses f[x,y] f(z) / (f[x,z] f[y,z]) times 1 + t/(1 + alpha*t)
    with t = f(z)/f(x).
    """
    _check_ctx(x, ctx)
    fx = problem.f(x)
    dfx = _derivative(problem, x)
    if fx.is_zero():
        raise DenominatorZero("f(x)")
    y = x - fx / dfx
    fy = problem.f(y)
    den = fx - 2 * fy
    if den.is_zero():
        raise DenominatorZero("f(x) - 2 f(y)")
    z = y - fy / dfx * fx / den
    fz = problem.f(z)
    if fz.is_zero():
        return z
    for a, b, name in ((x, y, "x - y"), (x, z, "x - z"), (y, z, "y - z")):
        if (a - b).is_zero():
            raise DenominatorZero(name)
    f_xy = (fx - fy) / (x - y)
    f_xz = (fx - fz) / (x - z)
    f_yz = (fy - fz) / (y - z)
    prod = f_xz * f_yz
    if prod.is_zero():
        raise DenominatorZero("f[x,z] f[y,z]")
    t = fz / fx
    pole = 1 + alpha * t
    if pole.is_zero():
        raise DenominatorZero("1 + alpha t")
    return z - f_xy * fz / prod * (1 + t / pole)


# -- catalog -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MethodSpec:
    """An iteration scheme plus its declared order and per-step cost."""

    id: str
    step_fn: Callable
    order_theoretical: int
    evals_per_iter: int
    weight: WeightFn | None = None
    weight_label: str = "-"
    params: Mapping[str, Fraction] = field(default_factory=dict)

    def step(self, problem: Problem, x: BigReal,
             ctx: PrecisionContext | None = None) -> BigReal:
        if self.weight is not None:
            return self.step_fn(problem, x, self.weight, ctx)
        return self.step_fn(problem, x, ctx)


def _build_catalog() -> dict[str, MethodSpec]:
    w1, w2, w3 = builtin_weights()
    specs = [
        MethodSpec("newton", step_newton, 2, 2),
        MethodSpec("2.1", step_maheshwari, 4, 3),
        MethodSpec("2.2", step_nonoptimal_8, 8, 5),
        MethodSpec("2.14", step_family, 8, 4, weight=w1, weight_label="2.13"),
        MethodSpec("2.16", step_family, 8, 4, weight=w2, weight_label="2.15"),
        MethodSpec("2.18", step_family, 8, 4, weight=w3, weight_label="2.17"),
        MethodSpec("3.1", step_bi_ren_wu, 8, 4, weight_label="3.2",
                   params={"beta": Fraction(-1, 2), "alpha": Fraction(1)}),
        MethodSpec("3.3", step_wang_liu, 8, 4, weight_label="3.4"),
        MethodSpec("3.5", step_sharma_sharma, 8, 4, weight_label="3.6",
                   params={"alpha": Fraction(1)}),
    ]
    return {m.id: m for m in specs}


_CATALOG = _build_catalog()

TABLE_METHOD_IDS = ("2.14", "2.16", "2.18", "3.1", "3.3", "3.5")


def catalog() -> dict[str, MethodSpec]:
    return dict(_CATALOG)


def get_method(method_id: str) -> MethodSpec:
    try:
        return _CATALOG[method_id]
    except KeyError:
        raise KeyError(f"unknown method id {method_id!r}") from None


# -- driver --------------------------------------------------------------------


class RunStatus(str, enum.Enum):
    CONVERGED = "converged"
    MAX_ITERS = "max_iters"
    STEP_FAILED = "step_failed"


@dataclass
class IterationTrace:
    method_id: str
    problem_id: str
    x0: BigReal
    digits: int
    iterates: list[BigReal]
    abs_errors: list[BigReal]
    residuals: list[BigReal]
    status: RunStatus
    failure_reason: str | None = None
    failed_at: int | None = None

    def __len__(self) -> int:
        return len(self.iterates)


def run(method: MethodSpec, problem: Problem, x0: BigReal,
        max_iters: int = 4, ctx: PrecisionContext | None = None) -> IterationTrace:
    """Iterate until max_iters steps, the residual floor, or a step failure.

    The residual floor is 10^(-digits+20): once |f(x_n)| drops below it, the
    value is numerically indistinguishable from zero at working precision and
    further steps would divide noise by noise. Residuals and absolute errors
    recorded here are diagnostics computed outside the steps' evaluation
    budget.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    ctx = _check_ctx(x0, ctx)
    root = problem.root(ctx)
    floor = ctx.residual_floor

    iterates = [x0]
    abs_errors = [abs(x0 - root)]
    residuals = [abs(problem.f(x0))]
    status: RunStatus | None = None
    reason = None
    failed_at = None

    for n in range(max_iters):
        if residuals[-1] < floor:
            status = RunStatus.CONVERGED
            break
        try:
            x_next = method.step(problem, iterates[-1], ctx)
            r_next = abs(problem.f(x_next))
        except (StepError, DomainError) as e:
            status = RunStatus.STEP_FAILED
            reason = f"{type(e).__name__}: {e}"
            failed_at = n
            break
        iterates.append(x_next)
        abs_errors.append(abs(x_next - root))
        residuals.append(r_next)

    if status is None:
        status = RunStatus.CONVERGED if residuals[-1] < floor else RunStatus.MAX_ITERS

    return IterationTrace(
        method_id=method.id,
        problem_id=problem.id,
        x0=x0,
        digits=ctx.digits,
        iterates=iterates,
        abs_errors=abs_errors,
        residuals=residuals,
        status=status,
        failure_reason=reason,
        failed_at=failed_at,
    )


def render_trace(trace: IterationTrace) -> str:
    """Fixed record format: header line plus one row per iterate."""
    ctx = trace.x0.ctx
    zero = ctx.zero()
    lines = [
        f"method={trace.method_id} problem={trace.problem_id} "
        f"x0={to_sci_string(trace.x0, 12)} digits={trace.digits} "
        f"status={trace.status.value}"
        + (f" ({trace.failure_reason} at iteration {trace.failed_at})"
           if trace.status is RunStatus.STEP_FAILED else "")
    ]
    lines.append(f"{'n':>3}  {'x_n':<46}  {'|x_n - x*|':<12}  {'|f(x_n)|':<12}")
    for n, (x, e, r) in enumerate(zip(trace.iterates, trace.abs_errors, trace.residuals)):
        lines.append(
            f"{n:>3}  {to_sci_string(x, 40):<46}  "
            f"{str(compare_error(e, zero)):<12}  {str(compare_error(r, zero)):<12}"
        )
    return "\n".join(lines)
