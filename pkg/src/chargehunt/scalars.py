"""Exact Gaussian rationals ``re + i*im`` with ``re, im`` in Q."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

Number = Union[int, Fraction, "Gauss"]

_I_POWERS = ((1, 0), (0, 1), (-1, 0), (0, -1))


class Gauss:
    """An element of Q(i), stored as two ``Fraction`` values in lowest terms."""

    __slots__ = ("re", "im")

    def __init__(self, re: Union[int, Fraction, str] = 0, im: Union[int, Fraction, str] = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def i_power(cls, m: int) -> "Gauss":
        r, i = _I_POWERS[m % 4]
        return cls(r, i)

    @classmethod
    def coerce(cls, value: Number) -> "Gauss":
        if isinstance(value, Gauss):
            return value
        if isinstance(value, (int, Rational)):
            return cls(Fraction(value))
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, float):
            return cls(Fraction(value))
        raise TypeError(f"cannot coerce {value!r} to Gauss")

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def is_imag(self) -> bool:
        return not self.re

    def conjugate(self) -> "Gauss":
        return Gauss(self.re, -self.im)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other: Number) -> "Gauss":
        o = Gauss.coerce(other)
        return Gauss(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "Gauss":
        return Gauss(-self.re, -self.im)

    def __sub__(self, other: Number) -> "Gauss":
        o = Gauss.coerce(other)
        return Gauss(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: Number) -> "Gauss":
        return Gauss.coerce(other) - self

    def __mul__(self, other: Number) -> "Gauss":
        o = Gauss.coerce(other)
        return Gauss(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "Gauss":
        o = Gauss.coerce(other)
        den = o.re * o.re + o.im * o.im
        if not den:
            raise ZeroDivisionError("Gauss division by zero")
        num = self * o.conjugate()
        return Gauss(num.re / den, num.im / den)

    def __rtruediv__(self, other: Number) -> "Gauss":
        return Gauss.coerce(other) / self

    def __eq__(self, other: object) -> bool:
        try:
            o = Gauss.coerce(other)  # type: ignore[arg-type]
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"Gauss({self})"

    def __str__(self) -> str:
        if not self.im:
            return _fmt(self.re)
        if not self.re:
            return f"{_fmt(self.im)}i"
        sign = "+" if self.im > 0 else "-"
        return f"({_fmt(self.re)}{sign}{_fmt(abs(self.im))}i)"


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer; raises ``ValueError`` on anything else."""
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    if "/" in text:
        p, q = text.split("/", 1)
        if not q.strip().lstrip("+-").isdigit() or int(q) == 0:
            raise ValueError(f"bad rational {text!r}")
        return Fraction(int(p), int(q))
    return Fraction(int(text))


def format_rational(q: Fraction) -> str:
    return _fmt(Fraction(q))
