"""Weight functions H(s) for the three-point family, plus validation.

A weight enters the family's third substep as a multiplicative correction
evaluated at s = f(z)/f(x). Eighth order requires H(0) = 1 and H'(0) = 2;
``validate_weight`` checks exactly those two conditions (value exactly, slope
by central finite difference). The curvature H''(0) is deliberately left
unconstrained: s shrinks like the cube of the error, so a quadratic term in
H cannot touch the eighth-order coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import DomainError
from .numerics import BigReal, PrecisionContext

__all__ = ["WeightFn", "ValidationReport", "builtin_weights", "get_weight", "validate_weight"]


@dataclass(frozen=True)
class WeightFn:
    """Scalar weight H with declared exact value and slope at 0.

    ``eval`` is numeric-generic: it accepts any value supporting +,*,/ with
    ints (BigReal for iteration, Fraction for exactness tests).
    """

    id: str
    eval: Callable
    h0: Fraction
    h1: Fraction
    expression: str = ""


_W1 = WeightFn("w1", lambda s: 1 + 2 * s, Fraction(1), Fraction(2), "1 + 2s")
_W2 = WeightFn("w2", lambda s: (1 + 4 * s) / (1 + 2 * s), Fraction(1), Fraction(2),
               "(1 + 4s)/(1 + 2s)")
_W3 = WeightFn("w3", lambda s: 1 / (1 - 2 * s), Fraction(1), Fraction(2), "1/(1 - 2s)")


def builtin_weights() -> list[WeightFn]:
    return [_W1, _W2, _W3]


def get_weight(weight_id: str) -> WeightFn:
    for w in builtin_weights():
        if w.id == weight_id:
            return w
    raise KeyError(f"unknown weight id {weight_id!r}")


@dataclass(frozen=True)
class ValidationReport:
    weight_id: str
    value_at_zero: BigReal
    value_ok: bool
    slope_estimate: BigReal
    slope_ok: bool

    @property
    def passed(self) -> bool:
        return self.value_ok and self.slope_ok

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (
            f"{self.weight_id}: H(0)={'ok' if self.value_ok else 'BAD'} "
            f"H'(0)={'ok' if self.slope_ok else 'BAD'} -> {status}"
        )


def validate_weight(w: WeightFn, ctx: PrecisionContext) -> ValidationReport:
    """Check the eighth-order conditions H(0) = 1 and H'(0) = 2.

    The slope is a central difference with h = 10^(-digits/4), accepted within
    10^(-digits/3); a weight whose pole sits at 0 raises DomainError.
    """
    try:
        at_zero = w.eval(ctx.zero())
    except ZeroDivisionError:
        raise DomainError(f"weight {w.id}", "0", "undefined at 0") from None
    value_ok = at_zero == 1

    h = ctx.real(f"1e-{ctx.digits // 4}")
    try:
        slope = (w.eval(h) - w.eval(-h)) / (2 * h)
    except ZeroDivisionError:
        raise DomainError(f"weight {w.id}", "near 0", "pole adjacent to 0") from None
    tol = ctx.real(f"1e-{ctx.digits // 3}")
    slope_ok = abs(slope - 2) <= tol

    return ValidationReport(
        weight_id=w.id,
        value_at_zero=at_zero,
        value_ok=value_ok,
        slope_estimate=slope,
        slope_ok=slope_ok,
    )
