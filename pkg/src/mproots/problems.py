"""Benchmark problems: named scalar equations with analytic derivatives.

Each problem carries a hand-derived first derivative; the test suite checks
every derivative against a central finite difference at random points near
the root, so a transcription slip here cannot survive CI.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable

from .errors import DomainError, InvalidProblem
from .numerics import BigReal, PrecisionContext, cos, exp, ln, sin, sqrt

__all__ = [
    "Problem",
    "PolynomialProblem",
    "builtin_problems",
    "get_problem",
    "make_polynomial_problem",
]


@dataclass(frozen=True)
class Problem:
    """A scalar equation f(x) = 0 with analytic derivative and known simple root."""

    id: str
    f: Callable[[BigReal], BigReal]
    df: Callable[[BigReal], BigReal]
    root: Callable[[PrecisionContext], BigReal]
    x0_default: str
    expression: str = ""
    derivative_expression: str = ""
    source: str = ""


# -- the four builtin benchmark equations -------------------------------------


def _f1(x: BigReal) -> BigReal:
    return ln(1 + x * x) + exp(x * x - 3 * x) * sin(x)


def _df1(x: BigReal) -> BigReal:
    # chain rule on ln(1+x^2); product rule on exp(x^2-3x)*sin(x)
    return 2 * x / (1 + x * x) + exp(x * x - 3 * x) * ((2 * x - 3) * sin(x) + cos(x))


def _f2(x: BigReal) -> BigReal:
    return ln(1 - x + x * x) + 4 * sin(1 - x)


def _df2(x: BigReal) -> BigReal:
    return (2 * x - 1) / (1 - x + x * x) - 4 * cos(1 - x)


def _f3_guard(x: BigReal) -> None:
    # sin(pi/x^2) is undefined at 0 and numerically meaningless for |x| ~ 0
    if abs(x) < x.ctx.real(f"1e-{x.ctx.digits // 2}"):
        raise DomainError("f3", "~0", "argument too close to the x=0 singularity")


def _f3(x: BigReal) -> BigReal:
    _f3_guard(x)
    return x ** 4 + sin(x.ctx.pi() / (x * x)) - 5


def _df3(x: BigReal) -> BigReal:
    _f3_guard(x)
    p = x.ctx.pi()
    return 4 * x ** 3 - 2 * p * cos(p / (x * x)) / x ** 3


def _f4(x: BigReal) -> BigReal:
    return (x - 2) * (x ** 10 + x + 1) * exp(-x - 1)


def _df4(x: BigReal) -> BigReal:
    # product rule over the three factors; exp factor contributes -1 times itself
    q = x ** 10 + x + 1
    return exp(-x - 1) * (q + (x - 2) * (10 * x ** 9 + 1) - (x - 2) * q)


_BUILTINS = (
    Problem(
        id="f1",
        f=_f1,
        df=_df1,
        root=lambda ctx: ctx.zero(),
        x0_default="0.35",
        expression="ln(1+x^2) + exp(x^2-3x)*sin(x)",
        derivative_expression="2x/(1+x^2) + exp(x^2-3x)*((2x-3)*sin(x) + cos(x))",
        source="mixed log/exp/trig benchmark, root 0",
    ),
    Problem(
        id="f2",
        f=_f2,
        df=_df2,
        root=lambda ctx: ctx.one(),
        x0_default="1.1",
        expression="ln(1-x+x^2) + 4*sin(1-x)",
        derivative_expression="(2x-1)/(1-x+x^2) - 4*cos(1-x)",
        source="log/trig benchmark, root 1 (1-x+x^2 > 0 everywhere)",
    ),
    Problem(
        id="f3",
        f=_f3,
        df=_df3,
        root=lambda ctx: sqrt(ctx.real(2)),
        x0_default="1.5",
        expression="x^4 + sin(pi/x^2) - 5",
        derivative_expression="4x^3 - 2*pi*cos(pi/x^2)/x^3",
        source="quartic/trig benchmark, root sqrt(2); undefined at x=0",
    ),
    Problem(
        id="f4",
        f=_f4,
        df=_df4,
        root=lambda ctx: ctx.real(2),
        x0_default="2.1",
        expression="(x-2)*(x^10+x+1)*exp(-x-1)",
        derivative_expression="exp(-x-1)*((x^10+x+1) + (x-2)*(10x^9+1) - (x-2)*(x^10+x+1))",
        source="polynomial/exponential benchmark, root 2",
    ),
)


def builtin_problems() -> list[Problem]:
    """The four benchmark equations, in table order f1..f4."""
    return list(_BUILTINS)


def get_problem(problem_id: str) -> Problem:
    for p in _BUILTINS:
        if p.id == problem_id:
            return p
    raise KeyError(f"unknown problem id {problem_id!r}")


# -- synthetic polynomial problems ------------------------------------------------


def _poly_eval(coeffs: tuple[Fraction, ...], x):
    """Horner evaluation; works for BigReal and exact Fraction arguments alike."""
    if isinstance(x, BigReal):
        conv = x.ctx.real
    else:
        conv = Fraction
    acc = conv(coeffs[-1])
    for a in reversed(coeffs[:-1]):
        acc = acc * x + conv(a)
    return acc


def _poly_derivative(coeffs: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    return tuple(Fraction(k) * a for k, a in enumerate(coeffs))[1:] or (Fraction(0),)


@dataclass(frozen=True)
class PolynomialProblem(Problem):
    """Problem backed by exact rational coefficients (ascending degree order)."""

    coeffs: tuple[Fraction, ...] = field(default=())
    rational_root: Fraction | None = None

    def normalized_derivative(self, k: int) -> Fraction:
        """Exact f^(k)(root) / (k! f'(root)) for a rational root."""
        if self.rational_root is None:
            raise InvalidProblem(
                "exact normalized derivatives need a rational root"
            )
        r = self.rational_root
        # Taylor-shift the coefficients to the root: b_j = sum_k a_k C(k,j) r^(k-j)
        n = len(self.coeffs) - 1
        b = [
            sum(self.coeffs[m] * comb(m, j) * r ** (m - j) for m in range(j, n + 1))
            for j in range(n + 1)
        ]
        if b[1] == 0:
            raise InvalidProblem("derivative vanishes at the root")
        if k > n:
            return Fraction(0)
        return Fraction(b[k], b[1])


def make_polynomial_problem(
    coeffs,
    root,
    problem_id: str = "poly",
    x0_default: str | None = None,
    validation_ctx: PrecisionContext | None = None,
) -> PolynomialProblem:
    """Build a Problem from exact polynomial coefficients (ascending degree).

    ``root`` may be an int/Fraction (checked exactly) or a callable
    ``ctx -> BigReal`` for irrational roots (checked numerically).
    """
    cs = tuple(Fraction(a) for a in coeffs)
    if len(cs) < 2 or all(a == 0 for a in cs[1:]):
        raise InvalidProblem("polynomial must have degree >= 1")
    dcs = _poly_derivative(cs)

    rational_root: Fraction | None = None
    if isinstance(root, (int, Fraction)):
        rational_root = Fraction(root)
        if _poly_eval(cs, rational_root) != 0:
            raise InvalidProblem(f"{rational_root} is not a zero of the polynomial")
        if _poly_eval(dcs, rational_root) == 0:
            raise InvalidProblem("derivative vanishes at the root (multiple root)")
        root_fn = lambda ctx, _r=rational_root: ctx.real(_r)  # noqa: E731
    elif callable(root):
        root_fn = root
        ctx = validation_ctx or PrecisionContext(100)
        r = root_fn(ctx)
        if not abs(_poly_eval(cs, r)) < ctx.real(f"1e-{ctx.digits - 10}"):
            raise InvalidProblem("supplied root is not a zero at working precision")
        if not abs(_poly_eval(dcs, r)) > ctx.real(f"1e-{ctx.digits // 2}"):
            raise InvalidProblem("derivative vanishes at the root (multiple root)")
    else:
        raise TypeError("root must be an int, Fraction, or callable ctx -> BigReal")

    expr = " + ".join(
        f"({a})x^{k}" if k else f"({a})" for k, a in enumerate(cs) if a != 0
    )
    return PolynomialProblem(
        id=problem_id,
        f=lambda x: _poly_eval(cs, x),
        df=lambda x: _poly_eval(dcs, x),
        root=root_fn,
        x0_default=x0_default or "0.1",
        expression=expr,
        derivative_expression="exact coefficient derivative",
        source="synthetic polynomial",
        coeffs=cs,
        rational_root=rational_root,
    )
