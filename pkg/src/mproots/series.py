"""Exact truncated-series oracle for the eighth-order convergence proof.

Everything here is exact rational arithmetic; no floating point anywhere.

The model: a function with a simple zero is represented through its
normalized derivatives at the root, c_k = f^(k)(x*) / (k! f'(x*)), kept as
symbols c2..c9. Working in units of f'(x*), the value series is
arg + c2*arg^2 + ... + c8*arg^8 and the derivative series is
1 + 2*c2*e + ... + 9*c9*e^8; coefficients beyond c9 carry no information in
this model, matching the O(e^9) bookkeeping of the convergence analysis.

Coefficients are sparse Laurent polynomials (negative exponents are allowed
internally: some intermediate quotients, e.g. the correction-factor series,
momentarily need monomial divisors like 4*c2 before the final cancellation).
All published results are asserted to be genuine polynomials.

Truncation order 9 is the public contract; the derivations run at a higher
internal order so that every reported coefficient is exact despite the
valuation shifts that division introduces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import CompositionDomain, NotInvertible, OrderMismatch

__all__ = [
    "ErrorEquationReport",
    "FamilyExpansions",
    "R8Resolution",
    "RationalPoly",
    "TruncSeries",
    "derive_family_error",
    "derive_newton_error",
    "family_expansions",
    "resolve_r8",
    "series_add",
    "series_compose_f",
    "series_invert",
    "series_mul",
    "series_scale",
]

VAR_NAMES = ("c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9")
_NVARS = len(VAR_NAMES)
_ZERO_EXP = (0,) * _NVARS

DEFAULT_ORDER = 9
_INTERNAL_ORDER = 14  # margin for exactness through e^9 under valuation shifts


def _as_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    raise TypeError(f"expected an exact rational, got {type(q).__name__}")


class RationalPoly:
    """Sparse polynomial in c2..c9 with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple, Fraction] | None = None):
        self.terms = {e: q for e, q in (terms or {}).items() if q != 0}

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls) -> "RationalPoly":
        return cls()

    @classmethod
    def const(cls, q) -> "RationalPoly":
        q = _as_fraction(q)
        return cls({_ZERO_EXP: q}) if q else cls()

    @classmethod
    def var(cls, k: int) -> "RationalPoly":
        """The symbol c_k for k in 2..9."""
        if not 2 <= k <= 9:
            raise ValueError(f"c_{k} is outside the model (k must be 2..9)")
        e = [0] * _NVARS
        e[k - 2] = 1
        return cls({tuple(e): Fraction(1)})

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {_ZERO_EXP}

    def constant_value(self) -> Fraction:
        return self.terms.get(_ZERO_EXP, Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def has_negative_exponents(self) -> bool:
        return any(any(p < 0 for p in e) for e in self.terms)

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        t = dict(self.terms)
        for e, q in other.terms.items():
            s = t.get(e, Fraction(0)) + q
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return RationalPoly(t)

    def __neg__(self) -> "RationalPoly":
        return RationalPoly({e: -q for e, q in self.terms.items()})

    def __sub__(self, other: "RationalPoly") -> "RationalPoly":
        return self + (-other)

    def __mul__(self, other: "RationalPoly") -> "RationalPoly":
        t: dict[tuple, Fraction] = {}
        for e1, q1 in self.terms.items():
            for e2, q2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e, Fraction(0)) + q1 * q2
                if s:
                    t[e] = s
                else:
                    t.pop(e, None)
        return RationalPoly(t)

    def scale(self, q) -> "RationalPoly":
        q = _as_fraction(q)
        if not q:
            return RationalPoly()
        return RationalPoly({e: c * q for e, c in self.terms.items()})

    def monomial_inverse(self) -> "RationalPoly":
        if len(self.terms) != 1:
            raise NotInvertible("only a single monomial can be inverted exactly")
        (e, q), = self.terms.items()
        return RationalPoly({tuple(-p for p in e): Fraction(1) / q})

    # -- structure ---------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, RationalPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def substitute(self, values: dict[int, object]):
        """Evaluate at numeric values {k: value for c_k}; exact for Fractions.

        Raises on negative exponents: only fully cancelled (polynomial)
        results are meant to be substituted.
        """
        if self.has_negative_exponents():
            raise ValueError("cannot substitute into a Laurent intermediate")
        total = None
        for e, q in self.terms.items():
            term = None
            for k, p in zip(range(2, 10), e):
                if p == 0:
                    continue
                v = values[k]
                factor = v ** p
                term = factor if term is None else term * factor
            term = q if term is None else term * q
            total = term if total is None else total + term
        return Fraction(0) if total is None else total

    def __repr__(self):
        return f"RationalPoly({self.render()!r})"

    def render(self) -> str:
        """Canonical human-readable form, highest total degree first."""
        if not self.terms:
            return "0"

        def key(item):
            e, _ = item
            return (-sum(e), tuple(-p for p in e))

        parts = []
        for e, q in sorted(self.terms.items(), key=key):
            factors = []
            for name, p in zip(VAR_NAMES, e):
                if p == 1:
                    factors.append(name)
                elif p != 0:
                    factors.append(f"{name}^{p}")
            mag = abs(q)
            coeff = "" if (mag == 1 and factors) else str(mag)
            body = "*".join(([coeff] if coeff else []) + factors) or str(mag)
            parts.append(("- " if q < 0 else "+ ") + body)
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else ("-" + out[2:])


class TruncSeries:
    """Power series in the error variable e, truncated past ``order``."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        cs = list(coeffs)
        if len(cs) > order + 1:
            cs = cs[: order + 1]
        while len(cs) < order + 1:
            cs.append(RationalPoly.zero())
        self.order = order
        self.coeffs = tuple(cs)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "TruncSeries":
        return cls(order, [])

    @classmethod
    def const(cls, q, order: int = DEFAULT_ORDER) -> "TruncSeries":
        return cls(order, [RationalPoly.const(q)])

    @classmethod
    def e_var(cls, order: int = DEFAULT_ORDER) -> "TruncSeries":
        return cls(order, [RationalPoly.zero(), RationalPoly.const(1)])

    # -- access -----------------------------------------------------------------

    def coeff(self, k: int) -> RationalPoly:
        if not 0 <= k <= self.order:
            raise IndexError(f"power {k} outside truncation order {self.order}")
        return self.coeffs[k]

    def valuation(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                return k
        return None

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise OrderMismatch(
                f"cannot extend a series from order {self.order} to {order}"
            )
        return TruncSeries(order, self.coeffs[: order + 1])

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __repr__(self):
        parts = [
            f"({c.render()})*e^{k}" for k, c in enumerate(self.coeffs) if not c.is_zero()
        ]
        return " + ".join(parts) + f" + O(e^{self.order + 1})" if parts else (
            f"0 + O(e^{self.order + 1})"
        )

    # -- arithmetic ----------------------------------------------------------------

    def _match(self, other: "TruncSeries") -> None:
        if self.order != other.order:
            raise OrderMismatch(
                f"series orders differ: {self.order} vs {other.order}"
            )

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._match(other)
        return TruncSeries(
            self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.order, [-c for c in self.coeffs])

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        self._match(other)
        return TruncSeries(
            self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        self._match(other)
        out = [RationalPoly.zero() for _ in range(self.order + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j in range(self.order + 1 - i):
                b = other.coeffs[j]
                if b.is_zero():
                    continue
                out[i + j] = out[i + j] + a * b
        return TruncSeries(self.order, out)

    def scale(self, factor) -> "TruncSeries":
        if isinstance(factor, RationalPoly):
            return TruncSeries(self.order, [c * factor for c in self.coeffs])
        q = _as_fraction(factor)
        return TruncSeries(self.order, [c.scale(q) for c in self.coeffs])

    def shift_down(self, v: int) -> "TruncSeries":
        """Divide by e^v; coefficients above order-v are lost (zero-filled)."""
        if v == 0:
            return self
        if any(not c.is_zero() for c in self.coeffs[:v]):
            raise NotInvertible(f"series has valuation below {v}")
        return TruncSeries(self.order, self.coeffs[v:])

    def _invert_unit(self) -> "TruncSeries":
        """Inverse of a series whose leading coefficient is a single monomial."""
        lead = self.coeffs[0]
        if lead.is_zero():
            raise NotInvertible("series has a zero constant term")
        if not lead.is_monomial():
            raise NotInvertible(
                "constant term is not invertible (not a monomial): "
                + lead.render()
            )
        inv0 = lead.monomial_inverse()
        out = [inv0]
        for d in range(1, self.order + 1):
            acc = RationalPoly.zero()
            for j in range(1, d + 1):
                a = self.coeffs[j]
                if a.is_zero():
                    continue
                acc = acc + a * out[d - j]
            out.append(-(inv0 * acc))
        return TruncSeries(self.order, out)

    def divide_by(self, other: "TruncSeries") -> "TruncSeries":
        """Quotient with valuation cancellation (both sides shifted by val(b))."""
        self._match(other)
        v = other.valuation()
        if v is None:
            raise NotInvertible("division by the zero series")
        sv = self.valuation()
        if v and sv is not None and sv < v:
            raise NotInvertible("quotient would not be a power series")
        num = self.shift_down(v) if sv is not None else self
        return num * other.shift_down(v)._invert_unit()


# -- public operation names -------------------------------------------------------


def series_add(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a + b


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a * b


def series_scale(a: TruncSeries, q) -> TruncSeries:
    return a.scale(q)


def series_invert(a: TruncSeries) -> TruncSeries:
    """Inverse of a unit series; the constant term must be a nonzero rational."""
    lead = a.coeffs[0]
    if not lead.is_constant() or lead.is_zero():
        raise NotInvertible(
            "series_invert needs a nonzero rational constant term, got "
            + lead.render()
        )
    return a._invert_unit()


def series_compose_f(arg: TruncSeries) -> TruncSeries:
    """Series of f(x* + arg)/f'(x*) = arg + c2*arg^2 + ... + c8*arg^8."""
    if not arg.coeffs[0].is_zero():
        raise CompositionDomain("composition argument must have zero constant term")
    acc = arg
    power = arg
    for k in range(2, 9):
        power = power * arg
        if power.valuation() is None:
            break
        acc = acc + power.scale(RationalPoly.var(k))
    return acc


def _fprime_series(arg: TruncSeries) -> TruncSeries:
    """Series of f'(x* + arg)/f'(x*) = 1 + 2*c2*arg + ... + 9*c9*arg^8."""
    acc = TruncSeries.const(1, arg.order)
    power = TruncSeries.const(1, arg.order)
    for k in range(2, 10):
        power = power * arg
        if power.valuation() is None:
            break
        acc = acc + power.scale(RationalPoly.var(k).scale(k))
    return acc


# -- derivations --------------------------------------------------------------------


def derive_newton_error(order: int = DEFAULT_ORDER) -> TruncSeries:
    """Error series of one Newton step: e - f(x)/f'(x) expanded at the root."""
    w = max(order, _INTERNAL_ORDER)
    e = TruncSeries.e_var(w)
    fx = series_compose_f(e)
    fpx = _fprime_series(e)
    ey = e - fx.divide_by(fpx)
    return ey.truncate(order)


@dataclass(frozen=True)
class FamilyExpansions:
    """All intermediate expansions of one family step, truncated to the contract order."""

    newton_error: TruncSeries      # e_y
    third_substep_error: TruncSeries  # e_z (the fourth-order substep)
    correction_series: TruncSeries    # F(x,y,z)
    ratio_series: TruncSeries         # s = f(z)/f(x)
    error_next: TruncSeries           # e_{n+1}
    h0: Fraction
    h1: Fraction


def family_expansions(h0=Fraction(1), h1=Fraction(2),
                      order: int = DEFAULT_ORDER) -> FamilyExpansions:
    """Symbolic expansion of the full three-point step with H ~ h0 + h1*s."""
    return _family_expansions_cached(_as_fraction(h0), _as_fraction(h1), order)


@lru_cache(maxsize=32)
def _family_expansions_cached(h0: Fraction, h1: Fraction,
                              order: int) -> FamilyExpansions:
    w = max(order, _INTERNAL_ORDER)

    e = TruncSeries.e_var(w)
    fx = series_compose_f(e)
    fpx = _fprime_series(e)
    inv_fpx = fpx._invert_unit()

    ey = e - fx * inv_fpx
    fy = series_compose_f(ey)

    # z = x + (f(x)^2/(f(y)-f(x)) - f(y)^2/f(x)) / f'(x)
    a = (fx * fx).divide_by(fy - fx)
    b = (fy * fy).divide_by(fx)
    ez = e + (a - b) * inv_fpx

    assert all(ez.coeff(k).is_zero() for k in range(1, 4)), "substep must be 4th order"
    c2, c3 = RationalPoly.var(2), RationalPoly.var(3)
    lead = (c2 * c2 * c2).scale(4) - c2 * c3
    assert ez.coeff(4) == lead, "unexpected leading substep coefficient"

    fz = series_compose_f(ez)
    s = fz.divide_by(fx)
    assert s.coeff(3) == lead, "ratio series must lead with the substep coefficient"

    num = fy * fy * fy * (fx - fy.scale(10)) + (fx * fx).scale(4) * (fy * fy + fx * fy)
    den = fx * (fx.scale(2) - fy) * (fx.scale(2) - fy) * (fy - fz)
    f_corr = num.divide_by(den)
    assert f_corr.coeff(0) == RationalPoly.const(1), "correction series must start at 1"
    assert f_corr.coeff(1) == c2.scale(2), "correction series e^1 must be 2*c2"
    assert f_corr.coeff(2) == c3.scale(3), "correction series e^2 must be 3*c3"

    h_series = TruncSeries.const(h0, w) + s.scale(h1)
    e_next = ez - fz * inv_fpx * f_corr * h_series
    assert all(e_next.coeff(k).is_zero() for k in range(0, 4)), (
        "error equation must start at e^4 for any H"
    )

    out = FamilyExpansions(
        newton_error=ey.truncate(order),
        third_substep_error=ez.truncate(order),
        correction_series=f_corr.truncate(order),
        ratio_series=s.truncate(order),
        error_next=e_next.truncate(order),
        h0=h0,
        h1=h1,
    )
    for name in ("newton_error", "third_substep_error", "correction_series",
                 "ratio_series", "error_next"):
        ser: TruncSeries = getattr(out, name)
        for c in ser.coeffs:
            if c.has_negative_exponents():
                raise AssertionError(f"{name} failed to cancel to a polynomial")
    return out


@dataclass(frozen=True)
class ErrorEquationReport:
    """Coefficients R4..R8 of e_{n+1} = R4 e^4 + ... + R8 e^8 + O(e^9)."""

    R: dict[int, RationalPoly]
    conditions_used: tuple[Fraction, Fraction]

    def all_subeighth_vanish(self) -> bool:
        return all(self.R[k].is_zero() for k in range(4, 8))


def derive_family_error(h0=Fraction(1), h1=Fraction(2)) -> ErrorEquationReport:
    """Error equation of the family under H(0)=h0, H'(0)=h1."""
    ex = family_expansions(h0, h1)
    return ErrorEquationReport(
        R={k: ex.error_next.coeff(k) for k in range(4, 9)},
        conditions_used=(ex.h0, ex.h1),
    )


@dataclass(frozen=True)
class R8Resolution:
    """The exact eighth-order constant and which printed variant it equals."""

    r8: RationalPoly
    candidate_c2_cubed: RationalPoly
    candidate_c3_cubed: RationalPoly
    matches: str  # "c2_cubed" | "c3_cubed" | "neither"


def resolve_r8() -> R8Resolution:
    """Adjudicate the third factor of R8: (c2^3 - 8 c2 c3 + 2 c4) vs (c3^3 - ...)."""
    c2, c3, c4 = (RationalPoly.var(k) for k in (2, 3, 4))
    common = (c2 * c2).scale(Fraction(1, 2)) * ((c2 * c2).scale(4) - c3)
    cand_c2 = common * ((c2 * c2 * c2) - (c2 * c3).scale(8) + c4.scale(2))
    cand_c3 = common * ((c3 * c3 * c3) - (c2 * c3).scale(8) + c4.scale(2))
    r8 = derive_family_error().R[8]
    if r8 == cand_c2:
        matches = "c2_cubed"
    elif r8 == cand_c3:
        matches = "c3_cubed"
    else:
        matches = "neither"
    return R8Resolution(r8, cand_c2, cand_c3, matches)
