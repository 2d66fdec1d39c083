"""Decimal arithmetic with a tracked absolute error bound.

Every quantity in this package is a :class:`HighPrecReal`: a ``Decimal``
value carried at a configurable working precision together with a
conservative absolute error bound.  Arithmetic propagates the bound, so a
result is certified to ``d`` decimal places exactly when ``err < 0.5e-d``.

The only transcendental machinery provided is what the series work needs:
the constants pi, ln 2 and ln pi, the expansion
``(1/2) ln((a+1)/(a-1)) = 1/a + 1/(3 a^3) + 1/(5 a^5) + ...`` with its
geometric tail bound, natural logs of rationals, and a small exp.

Values are immutable; operations are pure functions reading the working
precision from a context variable, so concurrent use is safe.
"""

from __future__ import annotations

import re
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from decimal import Context, Decimal, Inexact, ROUND_CEILING, ROUND_FLOOR, ROUND_HALF_EVEN, ROUND_HALF_UP
from fractions import Fraction

DEFAULT_DIGITS = 50
MAX_DIGITS = 1000

# Guard digits used internally when building constants and series, on top
# of the precision the caller asked for.
_PAD = 10

_working_digits: ContextVar[int] = ContextVar("charprime_working_digits", default=DEFAULT_DIGITS)

# Error-bound arithmetic runs at low precision, always rounding outward.
_ERR_UP = Context(prec=12, rounding=ROUND_CEILING)
_ERR_DOWN = Context(prec=12, rounding=ROUND_FLOOR)

# Roomy context for exact quantization regardless of value width.
_QUANTIZE_CTX = Context(prec=2 * MAX_DIGITS)

_ZERO = Decimal(0)
_ONE = Decimal(1)


class UncertifiedError(ValueError):
    """Requested digits exceed what the tracked error bound certifies."""


def working_digits() -> int:
    return _working_digits.get()


def set_working_digits(digits: int) -> None:
    if not 1 <= digits <= MAX_DIGITS:
        raise ValueError(f"working digits must be in 1..{MAX_DIGITS}, got {digits}")
    _working_digits.set(digits)


@contextmanager
def precision(digits: int):
    """Temporarily switch the working precision."""
    if not 1 <= digits <= MAX_DIGITS:
        raise ValueError(f"working digits must be in 1..{MAX_DIGITS}, got {digits}")
    token = _working_digits.set(digits)
    try:
        yield
    finally:
        _working_digits.reset(token)


def _value_ctx(digits: int | None = None) -> Context:
    return Context(prec=digits or _working_digits.get(), rounding=ROUND_HALF_EVEN)


def _ulp(value: Decimal, prec: int) -> Decimal:
    # One unit in the last place of a prec-digit result; exact results add 0.
    if value.is_zero():
        return _ZERO
    return _ONE.scaleb(value.adjusted() - prec + 1)


def _up(*terms: Decimal) -> Decimal:
    total = _ZERO
    for t in terms:
        total = _ERR_UP.add(total, t)
    return total


@dataclass(frozen=True)
class HighPrecReal:
    """A real number with a conservative absolute error bound."""

    value: Decimal
    err: Decimal = _ZERO

    def __post_init__(self):
        if self.err < 0:
            raise ValueError("error bound must be nonnegative")

    # -- construction ------------------------------------------------------

    @classmethod
    def exact(cls, x: int | str | Decimal) -> "HighPrecReal":
        return cls(Decimal(x), _ZERO)

    @classmethod
    def from_fraction(cls, frac: Fraction | int) -> "HighPrecReal":
        frac = Fraction(frac)
        ctx = _value_ctx()
        ctx.clear_flags()
        v = ctx.divide(Decimal(frac.numerator), Decimal(frac.denominator))
        e = _ulp(v, ctx.prec) if ctx.flags[Inexact] else _ZERO
        return cls(v, e)

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "HighPrecReal":
        if isinstance(other, HighPrecReal):
            return other
        if isinstance(other, int):
            return HighPrecReal(Decimal(other), _ZERO)
        if isinstance(other, Fraction):
            return HighPrecReal.from_fraction(other)
        if isinstance(other, Decimal):
            return HighPrecReal(other, _ZERO)
        return NotImplemented

    def _binary(self, other, op):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        ctx = _value_ctx()
        ctx.clear_flags()
        return op(self, other, ctx)

    def __add__(self, other):
        def op(a, b, ctx):
            v = ctx.add(a.value, b.value)
            rnd = _ulp(v, ctx.prec) if ctx.flags[Inexact] else _ZERO
            return HighPrecReal(v, _up(a.err, b.err, rnd))
        return self._binary(other, op)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return HighPrecReal(self.value.copy_negate(), self.err)

    def __abs__(self):
        return HighPrecReal(self.value.copy_abs(), self.err)

    def __mul__(self, other):
        def op(a, b, ctx):
            v = ctx.multiply(a.value, b.value)
            rnd = _ulp(v, ctx.prec) if ctx.flags[Inexact] else _ZERO
            e = _up(
                _ERR_UP.multiply(a.value.copy_abs(), b.err),
                _ERR_UP.multiply(b.value.copy_abs(), a.err),
                _ERR_UP.multiply(a.err, b.err),
                rnd,
            )
            return HighPrecReal(v, e)
        return self._binary(other, op)

    __rmul__ = __mul__

    def __truediv__(self, other):
        def op(a, b, ctx):
            b_low = _ERR_DOWN.subtract(b.value.copy_abs(), b.err)
            if b_low <= 0:
                raise ZeroDivisionError("divisor is not certified away from zero")
            v = ctx.divide(a.value, b.value)
            rnd = _ulp(v, ctx.prec) if ctx.flags[Inexact] else _ZERO
            # |x/y - a/b| <= ea/|y| + |a| eb/(|y||b|) with |y| >= b_low.
            e = _up(_ERR_UP.divide(a.err, b_low), rnd)
            if b.err:
                e = _up(e, _ERR_UP.divide(
                    _ERR_UP.multiply(a.value.copy_abs(), b.err),
                    _ERR_DOWN.multiply(b_low, b.value.copy_abs())))
            return HighPrecReal(v, e)
        return self._binary(other, op)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__truediv__(self)

    def pow_int(self, k: int) -> "HighPrecReal":
        """k-th power for integer k >= 0, by binary exponentiation."""
        if k < 0:
            raise ValueError("negative exponents are not supported")
        result = HighPrecReal(_ONE)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- inspection --------------------------------------------------------

    def certifies(self, d: int) -> bool:
        """True when rounding to d decimal places cannot be off by one unit."""
        return self.err < Decimal("0.5").scaleb(-d)

    def round_decimal(self, d: int) -> Decimal:
        """Round to d decimal places, halves away from zero."""
        q = self.value.quantize(_ONE.scaleb(-d), rounding=ROUND_HALF_UP, context=_QUANTIZE_CTX)
        return q.copy_abs() if q.is_zero() else q

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        return f"HighPrecReal({self.value}, err={self.err})"


# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------

CONSTANT_NAMES = ("pi", "ln2", "lnpi")


def constant(name: str, digits: int) -> HighPrecReal:
    """Return pi, ln2 or lnpi with err < 10**(-digits)."""
    if name not in CONSTANT_NAMES:
        raise ValueError(f"unknown constant {name!r}; expected one of {CONSTANT_NAMES}")
    if digits < 1:
        raise ValueError("digits must be >= 1")
    if digits > MAX_DIGITS - _PAD:
        raise ValueError(f"constant digits capped at {MAX_DIGITS - _PAD}")
    with precision(digits + _PAD):
        if name == "pi":
            x = _pi()
        elif name == "ln2":
            x = _ln2()
        else:
            x = _lnpi()
    if not x.err < _ONE.scaleb(-digits):
        raise UncertifiedError(f"could not certify {name} to {digits} digits")
    return x


def _pi() -> HighPrecReal:
    # Machin: pi = 16 atan(1/5) - 4 atan(1/239); both series alternate, so
    # the truncation error is bounded by the first omitted term.
    return 16 * _atan_inv(5) - 4 * _atan_inv(239)


def _atan_inv(n: int) -> HighPrecReal:
    prec = working_digits()
    cut = _ONE.scaleb(-(prec + 2))
    inv = HighPrecReal(_ONE) / HighPrecReal.exact(n)
    inv2 = inv * inv
    power = inv
    total = inv
    k = 1
    while True:
        power = power * inv2
        term = power / (2 * k + 1)
        if term.value < cut:
            break
        total = total + term if k % 2 == 0 else total - term
        k += 1
    return HighPrecReal(total.value, _up(total.err, cut))


def _ln2() -> HighPrecReal:
    # ln 2 = 2 * ((1/2) ln((3+1)/(3-1))); terms shrink by 9x each, so a bit
    # over one term per digit suffices.
    terms = working_digits() + 8
    return 2 * half_log_ratio(HighPrecReal(Decimal(3)), terms)


def _lnpi() -> HighPrecReal:
    pi = _pi()
    two = HighPrecReal.exact(2)
    return _ln2() + _ln_in_unit_range(pi / two)


def _ln_in_unit_range(x: HighPrecReal) -> HighPrecReal:
    # ln x for x in (1, 2), via 2 atanh((x-1)/(x+1)); the series terms are
    # positive and bounded by a geometric tail.
    u = (x - 1) / (x + 1)
    prec = working_digits()
    cut = _ONE.scaleb(-(prec + 2))
    u2 = u * u
    power = u
    total = u
    k = 1
    while True:
        power = power * u2
        term = power / (2 * k + 1)
        if term.value.copy_abs() < cut:
            break
        total = total + term
        k += 1
    u_hi = _up(u.value.copy_abs(), u.err)
    geom = _ERR_UP.divide(cut, _ERR_DOWN.subtract(_ONE, _ERR_UP.multiply(u_hi, u_hi)))
    return HighPrecReal((2 * total).value, _up((2 * total).err, 2 * geom))


def half_log_ratio(a, terms: int) -> HighPrecReal:
    """Truncated series for (1/2) ln((a+1)/(a-1)), with certified tail.

    The tail after ``terms`` terms is bounded by
    ``(1/a)**(2 t + 1) / ((2 t + 1) (1 - 1/a**2))`` evaluated with a rounded
    toward the bound-increasing side.
    """
    a = HighPrecReal._coerce(a)
    if a is NotImplemented:
        raise TypeError("a must be a number")
    if terms < 1:
        raise ValueError("terms must be >= 1")
    a_low = _ERR_DOWN.subtract(a.value, a.err)
    if a_low <= 1:
        raise ValueError("half_log_ratio requires a > 1")
    inv = HighPrecReal(_ONE) / a
    inv2 = inv * inv
    power = inv
    total = inv
    for k in range(1, terms):
        power = power * inv2
        total = total + power / (2 * k + 1)
    # Tail bound with 1/a rounded up.
    inv_hi = _ERR_UP.divide(_ONE, a_low)
    t = 2 * terms + 1
    tail_num = _ERR_UP.power(inv_hi, t)
    tail = _ERR_UP.divide(
        tail_num,
        _ERR_DOWN.multiply(Decimal(t), _ERR_DOWN.subtract(_ONE, _ERR_UP.multiply(inv_hi, inv_hi))),
    )
    return HighPrecReal(total.value, _up(total.err, tail))


def ln_fraction(num: int, den: int) -> HighPrecReal:
    """Natural log of a positive rational, certified at working precision."""
    if num <= 0 or den <= 0:
        raise ValueError("ln_fraction needs a positive rational")
    # Scale num/den by a power of two into [1, 2).
    shift = 0
    n, d = num, den
    while n >= 2 * d:
        d <<= 1
        shift += 1
    while n < d:
        n <<= 1
        shift -= 1
    ln2 = _ln2()
    if n == d:
        body = HighPrecReal(_ZERO)
    else:
        body = _ln_in_unit_range(HighPrecReal.from_fraction(Fraction(n, d)))
    return body + shift * ln2


def exp_hp(x: HighPrecReal) -> HighPrecReal:
    """exp(x) with a certified bound, for moderate |x|."""
    ln2 = _ln2()
    k = int((x.value / ln2.value).to_integral_value())
    r = x - k * ln2
    prec = working_digits()
    cut = _ONE.scaleb(-(prec + 2))
    term = HighPrecReal(_ONE)
    total = HighPrecReal(_ONE)
    i = 1
    while True:
        term = term * r / i
        total = total + term
        if term.value.copy_abs() < cut and i > r.value.copy_abs() * 2 + 2:
            break
        i += 1
    # Remaining Taylor tail is dominated by a geometric series with ratio <= 1/2.
    total = HighPrecReal(total.value, _up(total.err, 4 * cut))
    # Sensitivity to the argument bound: |d exp| <= exp(x+e) * e <= 2*value*e.
    scale = Fraction(2 ** k) if k >= 0 else Fraction(1, 2 ** (-k))
    out = total * scale
    sens = _ERR_UP.multiply(_ERR_UP.multiply(Decimal(2), out.value.copy_abs()), x.err)
    return HighPrecReal(out.value, _up(out.err, sens))


# ---------------------------------------------------------------------------
# Formatting
# ---------------------------------------------------------------------------

DECIMAL_STYLES = ("period", "euler-comma")


def format_decimal(x: HighPrecReal, d: int, style: str = "period",
                   allow_uncertified: bool = False) -> str:
    """Fixed-point decimal string with d places, halves rounded away from zero.

    Refuses when the error bound does not certify the last place, unless
    ``allow_uncertified`` is set.
    """
    if style not in DECIMAL_STYLES:
        raise ValueError(f"unknown decimal style {style!r}")
    if d < 0:
        raise ValueError("d must be >= 0")
    if not allow_uncertified and not x.certifies(d):
        raise UncertifiedError(
            f"error bound {x.err} does not certify {d} decimal places")
    q = x.round_decimal(d)
    s = format(q, "f")
    if d > 0 and "." not in s:
        s += "." + "0" * d
    if style == "euler-comma":
        s = s.replace(".", ",")
    return s


_DECIMAL_RE = re.compile(r"^-?\d+(\.\d*)?$")


def parse_decimal(s: str) -> HighPrecReal:
    """Parse a period-style decimal string into an exact HighPrecReal."""
    s = s.strip()
    if not _DECIMAL_RE.match(s):
        raise ValueError(f"not a plain decimal string: {s!r}")
    return HighPrecReal(Decimal(s), _ZERO)
