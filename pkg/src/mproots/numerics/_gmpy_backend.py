"""MPFR-backed arithmetic kernel (compiled fast path, via gmpy2).

Each kernel instance owns a private gmpy2 context sized for the requested
number of significant decimal digits; no thread-global gmpy2 state is touched.
"""

from __future__ import annotations

import math
from fractions import Fraction

try:
    import gmpy2
except ImportError:  # pragma: no cover - exercised only on hosts without gmpy2
    gmpy2 = None

NAME = "gmpy2"

# Extra mantissa bits beyond ceil(digits*log2(10)); keeps decimal round-trips
# and <=2-ulp decimal accuracy claims comfortably true.
_GUARD_BITS = 16


def available() -> bool:
    return gmpy2 is not None


class Kernel:
    name = NAME

    def __init__(self, digits: int):
        self.digits = digits
        bits = int(math.ceil(digits * math.log2(10))) + _GUARD_BITS
        self._ctx = gmpy2.context(precision=bits)
        self._pi = None

    # -- construction ------------------------------------------------------

    def from_str(self, s: str):
        return gmpy2.mpfr(s, context=self._ctx)

    def from_int(self, n: int):
        return gmpy2.mpfr(n, context=self._ctx)

    def from_fraction(self, fr: Fraction):
        return self._ctx.div(gmpy2.mpz(fr.numerator), gmpy2.mpz(fr.denominator))

    # -- ring operations ---------------------------------------------------

    def add(self, a, b):
        return self._ctx.add(a, b)

    def sub(self, a, b):
        return self._ctx.sub(a, b)

    def mul(self, a, b):
        return self._ctx.mul(a, b)

    def div(self, a, b):
        if gmpy2.is_zero(b):
            raise ZeroDivisionError("division by zero")
        return self._ctx.div(a, b)

    def neg(self, a):
        return self._ctx.minus(a)

    def abs(self, a):
        return self._ctx.abs(a)

    def pow_int(self, a, k: int):
        if k == 0:
            return self.from_int(1)
        if k < 0 and gmpy2.is_zero(a):
            raise ZeroDivisionError("zero raised to a negative power")
        return self._ctx.pow(a, k)

    # -- predicates --------------------------------------------------------

    def is_zero(self, a) -> bool:
        return gmpy2.is_zero(a)

    def sign(self, a) -> int:
        return gmpy2.sign(a)

    def cmp(self, a, b) -> int:
        if a < b:
            return -1
        if a > b:
            return 1
        return 0

    # -- elementary functions ----------------------------------------------

    def ln(self, a):
        return self._ctx.log(a)

    def exp(self, a):
        return self._ctx.exp(a)

    def sin(self, a):
        return self._ctx.sin(a)

    def cos(self, a):
        return self._ctx.cos(a)

    def sqrt(self, a):
        return self._ctx.sqrt(a)

    def pi(self):
        if self._pi is None:
            self._pi = self._ctx.const_pi()
        return self._pi

    # -- conversion ---------------------------------------------------------

    def to_digits(self, a, n: int):
        """Return (sign, digit-string, exponent) with value = sign * 0.digits * 10^exp."""
        if gmpy2.is_zero(a):  # covers -0 as well
            return 0, "", 0
        digs, exp, _ = a.digits(10, n)
        if digs.startswith("-"):
            return -1, digs[1:], exp
        return 1, digs, exp
