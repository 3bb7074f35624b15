"""Stdlib `decimal` arithmetic kernel (pure-Python fallback path).

`decimal.Context` supplies correctly rounded +,-,*,/,ln,exp,sqrt,power.
Circular functions and pi are not part of the stdlib context, so they are
built here: pi by a Machin arctangent formula over plain integers, sin/cos
by Taylor series after reduction modulo 2*pi. A few guard digits are carried
internally so results stay accurate to well under 2 units in the last
retained decimal place.
"""

from __future__ import annotations

import decimal
from decimal import Decimal
from fractions import Fraction

NAME = "decimal"

_GUARD_DIGITS = 8
_SERIES_GUARD = 10


def available() -> bool:
    return True


def _atan_inv_scaled(k: int, scale: int) -> int:
    """floor-ish of atan(1/k) * scale via the alternating odd-power series."""
    k2 = k * k
    power = scale // k
    total = power
    n = 1
    while power:
        power //= k2
        term = power // (2 * n + 1)
        total += -term if n % 2 == 1 else term
        n += 1
    return total


class Kernel:
    name = NAME

    def __init__(self, digits: int):
        self.digits = digits
        self._prec = digits + _GUARD_DIGITS
        self._ctx = decimal.Context(
            prec=self._prec,
            rounding=decimal.ROUND_HALF_EVEN,
            Emax=decimal.MAX_EMAX,
            Emin=decimal.MIN_EMIN,
        )
        self._pi = None
        self._two_pi = None

    def _wide(self, extra: int = _SERIES_GUARD) -> decimal.Context:
        c = self._ctx.copy()
        c.prec = self._prec + extra
        return c

    # -- construction ------------------------------------------------------

    def from_str(self, s: str):
        return self._ctx.plus(Decimal(s))

    def from_int(self, n: int):
        return self._ctx.plus(Decimal(n))

    def from_fraction(self, fr: Fraction):
        return self._ctx.divide(Decimal(fr.numerator), Decimal(fr.denominator))

    # -- ring operations ---------------------------------------------------

    def add(self, a, b):
        return self._ctx.add(a, b)

    def sub(self, a, b):
        return self._ctx.subtract(a, b)

    def mul(self, a, b):
        return self._ctx.multiply(a, b)

    def div(self, a, b):
        if b.is_zero():
            raise ZeroDivisionError("division by zero")
        return self._ctx.divide(a, b)

    def neg(self, a):
        return self._ctx.minus(a)

    def abs(self, a):
        return self._ctx.abs(a)

    def pow_int(self, a, k: int):
        if k == 0:
            return self.from_int(1)
        if k < 0 and a.is_zero():
            raise ZeroDivisionError("zero raised to a negative power")
        return self._ctx.power(a, k)

    # -- predicates --------------------------------------------------------

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def sign(self, a) -> int:
        if a.is_zero():
            return 0
        return -1 if a.is_signed() else 1

    def cmp(self, a, b) -> int:
        c = self._ctx.compare(a, b)
        return int(c)

    # -- elementary functions ----------------------------------------------

    def ln(self, a):
        return self._ctx.ln(a)

    def exp(self, a):
        return self._ctx.exp(a)

    def sqrt(self, a):
        return self._ctx.sqrt(a)

    def pi(self):
        if self._pi is None:
            scale = 10 ** (self._prec + 15)
            raw = 16 * _atan_inv_scaled(5, scale) - 4 * _atan_inv_scaled(239, scale)
            wide = self._wide(20)
            self._pi = self._ctx.plus(wide.divide(Decimal(raw), Decimal(scale)))
            self._two_pi = self._ctx.plus(wide.divide(Decimal(2 * raw), Decimal(scale)))
        return self._pi

    def _reduce_angle(self, x, wide: decimal.Context):
        """Shift x by an integer multiple of 2*pi into roughly [-pi, pi]."""
        self.pi()
        two_pi = self._two_pi
        q = wide.divide(x, two_pi).to_integral_value(rounding=decimal.ROUND_HALF_EVEN)
        if q.is_zero():
            return x
        return wide.subtract(x, wide.multiply(q, two_pi))

    def sin(self, x):
        wide = self._wide()
        if wide.abs(x) > Decimal("3.3"):
            x = self._reduce_angle(x, wide)
        # Taylor: x - x^3/3! + x^5/5! - ...
        i, last, total, fact, num, sign = 1, None, x, 1, x, 1
        xx = wide.multiply(x, x)
        while total != last:
            last = total
            i += 2
            fact *= i * (i - 1)
            num = wide.multiply(num, xx)
            sign = -sign
            term = wide.divide(num, Decimal(fact))
            total = wide.add(total, term if sign > 0 else wide.minus(term))
        return self._ctx.plus(total)

    def cos(self, x):
        wide = self._wide()
        if wide.abs(x) > Decimal("3.3"):
            x = self._reduce_angle(x, wide)
        i, last, total, fact, num, sign = 0, None, Decimal(1), 1, Decimal(1), 1
        xx = wide.multiply(x, x)
        while total != last:
            last = total
            i += 2
            fact *= i * (i - 1)
            num = wide.multiply(num, xx)
            sign = -sign
            term = wide.divide(num, Decimal(fact))
            total = wide.add(total, term if sign > 0 else wide.minus(term))
        return self._ctx.plus(total)

    # -- conversion ---------------------------------------------------------

    def to_digits(self, a, n: int):
        """Return (sign, digit-string, exponent) with value = sign * 0.digits * 10^exp."""
        if a.is_zero():
            return 0, "", 0
        rctx = decimal.Context(prec=n, rounding=decimal.ROUND_HALF_EVEN,
                               Emax=decimal.MAX_EMAX, Emin=decimal.MIN_EMIN)
        r = rctx.plus(a)
        sign, digits, exp = r.as_tuple()
        digs = "".join(map(str, digits))
        # exponent of the leading digit relative to the decimal point
        lead = len(digs) + exp
        digs = digs.ljust(n, "0")[:n]
        return (-1 if sign else 1), digs, lead
