"""Arbitrary-precision real arithmetic contract used by the whole package.

Two interchangeable kernels implement the contract:

* ``gmpy2`` -- compiled MPFR bindings, the fast path (selected by default
  when importable);
* ``decimal`` -- stdlib fallback, pure Python driver code on top of
  ``decimal.Context`` plus hand-built sin/cos/pi.

The active default is chosen once at import; ``MPROOTS_BACKEND`` overrides
it. A :class:`PrecisionContext` is an immutable value passed explicitly, so
there is no hidden global precision state, and :class:`BigReal` values are
immutable and safe to share between threads.
"""

from __future__ import annotations

import decimal
import os
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ContextMismatch, DomainError
from . import _decimal_backend, _gmpy_backend

__all__ = [
    "BigReal",
    "ErrorMagnitude",
    "PrecisionContext",
    "available_backends",
    "compare_error",
    "cos",
    "default_backend",
    "eval_elementary",
    "exp",
    "ln",
    "pi",
    "pow_int",
    "sin",
    "sqrt",
    "to_sci_string",
]

MIN_DIGITS = 50

_BACKENDS = {
    _gmpy_backend.NAME: _gmpy_backend,
    _decimal_backend.NAME: _decimal_backend,
}


def available_backends() -> tuple[str, ...]:
    return tuple(name for name, mod in _BACKENDS.items() if mod.available())


def default_backend() -> str:
    forced = os.environ.get("MPROOTS_BACKEND")
    if forced:
        if forced not in _BACKENDS:
            raise ValueError(f"unknown backend {forced!r}; known: {sorted(_BACKENDS)}")
        if not _BACKENDS[forced].available():
            raise ValueError(f"backend {forced!r} is not importable on this host")
        return forced
    return _gmpy_backend.NAME if _gmpy_backend.available() else _decimal_backend.NAME


_kernel_cache: dict[tuple[str, int], object] = {}


def _kernel(backend: str, digits: int):
    key = (backend, digits)
    k = _kernel_cache.get(key)
    if k is None:
        k = _BACKENDS[backend].Kernel(digits)
        _kernel_cache[key] = k
    return k


class PrecisionContext:
    """Working precision in significant decimal digits, plus the kernel choice."""

    __slots__ = ("digits", "backend", "_k")

    def __init__(self, digits: int = 7000, backend: str | None = None):
        if digits < MIN_DIGITS:
            raise ValueError(f"digits must be >= {MIN_DIGITS}, got {digits}")
        backend = backend or default_backend()
        if backend not in _BACKENDS:
            raise ValueError(f"unknown backend {backend!r}; known: {sorted(_BACKENDS)}")
        if not _BACKENDS[backend].available():
            raise ValueError(f"backend {backend!r} is not importable on this host")
        object.__setattr__(self, "digits", digits)
        object.__setattr__(self, "backend", backend)
        object.__setattr__(self, "_k", _kernel(backend, digits))

    def __setattr__(self, name, value):
        raise AttributeError("PrecisionContext is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, PrecisionContext)
            and self.digits == other.digits
            and self.backend == other.backend
        )

    def __hash__(self):
        return hash((self.digits, self.backend))

    def __repr__(self):
        return f"PrecisionContext(digits={self.digits}, backend={self.backend!r})"

    # -- value construction --------------------------------------------------

    def real(self, value) -> "BigReal":
        """Build a BigReal from an int, Fraction, decimal string, or BigReal."""
        if isinstance(value, BigReal):
            if value.ctx == self:
                return value
            return BigReal(self._k.from_str(to_sci_string(value)), self)
        if isinstance(value, bool):
            raise TypeError("bool is not a numeric value here")
        if isinstance(value, int):
            return BigReal(self._k.from_int(value), self)
        if isinstance(value, Fraction):
            return BigReal(self._k.from_fraction(value), self)
        if isinstance(value, str):
            return BigReal(self._k.from_str(value), self)
        raise TypeError(
            f"cannot build a BigReal from {type(value).__name__}; "
            "use an int, Fraction, or decimal string"
        )

    def zero(self) -> "BigReal":
        return self.real(0)

    def one(self) -> "BigReal":
        return self.real(1)

    def pi(self) -> "BigReal":
        return BigReal(self._k.pi(), self)

    @property
    def residual_floor(self) -> "BigReal":
        """10^(-digits+20); below this |f(x)| is numerically indistinguishable from 0."""
        return self.real(f"1e{-self.digits + 20}")


class BigReal:
    """Immutable arbitrary-precision real number bound to a PrecisionContext."""

    __slots__ = ("_v", "_ctx")

    def __init__(self, raw, ctx: PrecisionContext):
        object.__setattr__(self, "_v", raw)
        object.__setattr__(self, "_ctx", ctx)

    def __setattr__(self, name, value):
        raise AttributeError("BigReal is immutable")

    @property
    def ctx(self) -> PrecisionContext:
        return self._ctx

    @property
    def raw(self):
        return self._v

    def is_zero(self) -> bool:
        return self._ctx._k.is_zero(self._v)

    def sign(self) -> int:
        return self._ctx._k.sign(self._v)

    # -- coercion helpers ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, BigReal):
            if other._ctx != self._ctx:
                raise ContextMismatch(
                    f"cannot mix values from {self._ctx!r} and {other._ctx!r}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self._ctx.real(other)
        return None

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return BigReal(self._ctx._k.add(self._v, o._v), self._ctx)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return BigReal(self._ctx._k.sub(self._v, o._v), self._ctx)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return BigReal(self._ctx._k.sub(o._v, self._v), self._ctx)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return BigReal(self._ctx._k.mul(self._v, o._v), self._ctx)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return BigReal(self._ctx._k.div(self._v, o._v), self._ctx)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return BigReal(self._ctx._k.div(o._v, self._v), self._ctx)

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return BigReal(self._ctx._k.pow_int(self._v, k), self._ctx)

    def __neg__(self):
        return BigReal(self._ctx._k.neg(self._v), self._ctx)

    def __abs__(self):
        return BigReal(self._ctx._k.abs(self._v), self._ctx)

    # -- comparisons -------------------------------------------------------------

    def _cmp(self, other):
        o = self._coerce(other)
        if o is None:
            return None
        return self._ctx._k.cmp(self._v, o._v)

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __ne__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c != 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    __hash__ = None

    def __repr__(self):
        return f"BigReal({to_sci_string(self, min(self._ctx.digits, 30))!r})"


# -- serialization -------------------------------------------------------------


def to_sci_string(x: BigReal, digits: int | None = None) -> str:
    """Serialize as ``±0.<mantissa>e<exp>``; exact zero serializes as ``0``."""
    n = digits if digits is not None else x.ctx.digits
    if n < 1:
        raise ValueError("digit count must be positive")
    sign, digs, exp = x.ctx._k.to_digits(x.raw, n)
    if sign == 0:
        return "0"
    return f"{'-' if sign < 0 else '+'}0.{digs}e{exp}"


@dataclass(frozen=True)
class ErrorMagnitude:
    """|x - x*| in the normalized form 0.ddd x 10^exponent."""

    mantissa: decimal.Decimal
    exponent: int
    exact_zero: bool = False

    def __str__(self) -> str:
        if self.exact_zero:
            return "0"
        return f"{self.mantissa}e{self.exponent}"


def compare_error(x: BigReal, x_star: BigReal) -> ErrorMagnitude:
    """Normalized |x - x_star| with the mantissa rounded half-even to 3 digits."""
    d = abs(x - x_star)
    if d.is_zero():
        return ErrorMagnitude(decimal.Decimal("0.000"), 0, exact_zero=True)
    _, digs, exp = x.ctx._k.to_digits(d.raw, 40)
    m = decimal.Decimal("0." + digs)
    m3 = m.quantize(decimal.Decimal("0.001"), rounding=decimal.ROUND_HALF_EVEN)
    if m3 == 1:
        m3 = decimal.Decimal("0.100")
        exp += 1
    return ErrorMagnitude(m3, exp)


# -- elementary functions ---------------------------------------------------------


def ln(x: BigReal) -> BigReal:
    if x.sign() <= 0:
        raise DomainError("ln", to_sci_string(x, 10) if not x.is_zero() else "0",
                          "requires a positive argument")
    return BigReal(x.ctx._k.ln(x.raw), x.ctx)


def exp(x: BigReal) -> BigReal:
    return BigReal(x.ctx._k.exp(x.raw), x.ctx)


def sin(x: BigReal) -> BigReal:
    return BigReal(x.ctx._k.sin(x.raw), x.ctx)


def cos(x: BigReal) -> BigReal:
    return BigReal(x.ctx._k.cos(x.raw), x.ctx)


def sqrt(x: BigReal) -> BigReal:
    if x.sign() < 0:
        raise DomainError("sqrt", to_sci_string(x, 10), "requires a nonnegative argument")
    return BigReal(x.ctx._k.sqrt(x.raw), x.ctx)


def pow_int(x: BigReal, k: int) -> BigReal:
    if k < 0 and x.is_zero():
        raise DomainError("pow_int", "0", f"zero base with negative exponent {k}")
    return x ** k


def pi(ctx: PrecisionContext) -> BigReal:
    return ctx.pi()


_ELEMENTARY = {"ln": ln, "exp": exp, "sin": sin, "cos": cos, "sqrt": sqrt}


def eval_elementary(fn_id: str, arg, ctx: PrecisionContext | None = None,
                    exponent: int | None = None) -> BigReal:
    """Dispatch to one of {ln, exp, sin, cos, sqrt, pow_int} with domain checks.

    ``arg`` may be a BigReal, or a plain int/Fraction/decimal string built
    under ``ctx``. ``exponent`` is required for ``pow_int`` only.
    """
    if not isinstance(arg, BigReal):
        if ctx is None:
            raise ValueError("a PrecisionContext is required for non-BigReal arguments")
        arg = ctx.real(arg)
    elif ctx is not None and arg.ctx != ctx:
        raise ContextMismatch(f"argument context {arg.ctx!r} != requested {ctx!r}")
    if fn_id == "pow_int":
        if exponent is None:
            raise ValueError("pow_int requires an integer exponent")
        return pow_int(arg, exponent)
    try:
        fn = _ELEMENTARY[fn_id]
    except KeyError:
        raise ValueError(f"unknown elementary function {fn_id!r}") from None
    return fn(arg)
