"""Exact integer and rational kernels.

Counts are plain Python ``int`` and probabilities are ``fractions.Fraction``;
both are arbitrary precision and ``Fraction`` is always stored reduced.

Factorials of negative integers are not errors here.  The closed forms are
evaluated verbatim at small orders where arguments such as ``(n - 4)!``
go negative, and those terms must vanish (the reciprocal gamma function is
zero at non-positive integers).  :func:`factorial` returns the
:data:`ZERO_RECIPROCAL` marker for them, and :func:`quotient` turns a marker
in the denominator into an exact zero.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

__all__ = [
    "FormulaDomainError",
    "ZeroReciprocal",
    "ZERO_RECIPROCAL",
    "factorial",
    "binomial",
    "indicator_even",
    "quotient",
    "LogApprox",
    "log_factorial",
    "to_decimal",
    "to_significant",
    "to_scientific",
]


class FormulaDomainError(ArithmeticError):
    """A negative factorial reached a numerator (or both sides of a ratio)."""


class ZeroReciprocal:
    """Value of ``k!`` for negative ``k``.

    Multiplying anything by it yields the marker again, raising it to the
    zeroth power yields 1 (empty product), and dividing by it yields 0.
    Dividing the marker itself is an error.
    """

    _instance: "ZeroReciprocal | None" = None

    def __new__(cls) -> "ZeroReciprocal":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ZERO_RECIPROCAL"

    def __mul__(self, other: object) -> "ZeroReciprocal":
        if isinstance(other, (int, ZeroReciprocal)):
            return self
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "int | ZeroReciprocal":
        if exponent < 0:
            raise FormulaDomainError("negative power of a negative factorial")
        return 1 if exponent == 0 else self

    def __truediv__(self, other: object):
        raise FormulaDomainError("negative factorial in a numerator")

    __floordiv__ = __truediv__

    def __rtruediv__(self, other: object) -> int:
        return 0

    __rfloordiv__ = __rtruediv__


ZERO_RECIPROCAL = ZeroReciprocal()

Factorial = Union[int, ZeroReciprocal]

# append-only memo; _FACT[k] == k!
_FACT: list[int] = [1]
_FACT_LOCK = threading.Lock()


def factorial(k: int) -> Factorial:
    """``k!`` for ``k >= 0``, :data:`ZERO_RECIPROCAL` for ``k < 0``."""
    if k < 0:
        return ZERO_RECIPROCAL
    table = _FACT
    if k < len(table):
        return table[k]
    with _FACT_LOCK:
        top = len(table)
        acc = table[-1]
        for j in range(top, k + 1):
            acc *= j
            table.append(acc)
    return table[k]


def binomial(n: int, k: int) -> int:
    """``C(n, k)``, zero outside ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def indicator_even(n: int) -> int:
    """Indicator of the even naturals, with 0 counted as even."""
    if n < 0:
        raise ValueError(f"indicator_even expects n >= 0, got {n}")
    return 1 if n % 2 == 0 else 0


def quotient(numerator: Factorial, denominator: Factorial) -> Fraction:
    """Exact ``numerator / denominator`` under the negative-factorial rule."""
    if isinstance(numerator, ZeroReciprocal):
        raise FormulaDomainError("negative factorial in a numerator")
    if isinstance(denominator, ZeroReciprocal):
        return Fraction(0)
    return Fraction(numerator, denominator)


@dataclass(frozen=True)
class LogApprox:
    """Natural log of a nonnegative quantity; ``sign == 0`` encodes zero."""

    log_value: float
    sign: int = 1

    @classmethod
    def of(cls, value: "int | Fraction") -> "LogApprox":
        if value < 0:
            raise ValueError("LogApprox holds nonnegative quantities only")
        if value == 0:
            return cls(-math.inf, 0)
        if isinstance(value, Fraction):
            return cls(math.log(value.numerator) - math.log(value.denominator))
        return cls(math.log(value))

    def value(self) -> float:
        """``exp(log_value)``; raises OverflowError past the float range."""
        return 0.0 if self.sign == 0 else math.exp(self.log_value)

    def log10(self) -> float:
        return self.log_value / math.log(10)

    def ratio(self, other: "LogApprox") -> float:
        """``self / other`` as a float."""
        if other.sign == 0:
            raise ZeroDivisionError("ratio to a zero LogApprox")
        if self.sign == 0:
            return 0.0
        return math.exp(self.log_value - other.log_value)


def log_factorial(k: int) -> LogApprox:
    if k < 0:
        raise ValueError("log_factorial needs k >= 0")
    return LogApprox(math.lgamma(k + 1))


# -- decimal rendering -------------------------------------------------------

_ROUNDINGS = ("half-even", "down")


def _round_div(num: int, den: int, rounding: str) -> int:
    """Round ``num / den`` (den > 0) to an integer."""
    q, r = divmod(num, den)
    if rounding == "down":
        # toward zero
        if q < 0 and r:
            q += 1
        return q
    twice = 2 * r
    if twice > den or (twice == den and q % 2 == 1):
        q += 1
    return q


def _check_rounding(rounding: str) -> None:
    if rounding not in _ROUNDINGS:
        raise ValueError(f"rounding must be one of {_ROUNDINGS}, got {rounding!r}")


def to_decimal(p: "Fraction | int", digits: int, rounding: str = "half-even") -> str:
    """Render ``p`` with exactly ``digits`` places after the point.

    >>> to_decimal(Fraction(824, 1680), 8)
    '0.49047619'
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    _check_rounding(rounding)
    p = Fraction(p)
    scaled = _round_div(p.numerator * 10**digits, p.denominator, rounding)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def _sig_parts(p: Fraction, sig: int, rounding: str) -> tuple[int, int]:
    """Return ``(mantissa, exponent)`` with ``|p| ~= mantissa * 10**exponent``.

    ``mantissa`` has exactly ``sig`` digits (for nonzero ``p``).
    """
    a = abs(p)
    num, den = a.numerator, a.denominator
    # e = floor(log10(a)), exactly
    e = len(str(num)) - len(str(den))
    if num * 10 ** max(-e, 0) < den * 10 ** max(e, 0):
        e -= 1
    shift = sig - 1 - e
    if shift >= 0:
        m = _round_div(num * 10**shift, den, rounding)
    else:
        m = _round_div(num, den * 10 ** (-shift), rounding)
    if m >= 10**sig:  # rounding carried into a new digit
        m //= 10
        e += 1
    return m, e - (sig - 1)


def to_significant(p: "Fraction | int", sig: int, rounding: str = "half-even") -> str:
    """Positional rendering of ``p`` with ``sig`` significant digits.

    >>> to_significant(Fraction(1, 3), 4)
    '0.3333'
    """
    if sig < 1:
        raise ValueError("sig must be >= 1")
    _check_rounding(rounding)
    p = Fraction(p)
    if p == 0:
        return "0." + "0" * (sig - 1) if sig > 1 else "0"
    m, exp10 = _sig_parts(p, sig, rounding)
    sign = "-" if p < 0 else ""
    digits = str(m)
    if exp10 >= 0:
        return sign + digits + "0" * exp10
    point = len(digits) + exp10
    if point > 0:
        return f"{sign}{digits[:point]}.{digits[point:]}"
    return f"{sign}0.{'0' * (-point)}{digits}"


def to_scientific(p: "Fraction | int", sig: int, rounding: str = "half-even") -> str:
    """Render as ``d.ddd e±XX`` with ``sig`` significant digits.

    >>> to_scientific(5676040, 3)
    '5.68e+06'
    """
    if sig < 1:
        raise ValueError("sig must be >= 1")
    _check_rounding(rounding)
    p = Fraction(p)
    if p == 0:
        return "0e+00"
    m, exp10 = _sig_parts(p, sig, rounding)
    digits = str(m)
    lead = exp10 + len(digits) - 1
    body = digits[0] + ("." + digits[1:] if len(digits) > 1 else "")
    sign = "-" if p < 0 else ""
    return f"{sign}{body}e{'+' if lead >= 0 else '-'}{abs(lead):02d}"
