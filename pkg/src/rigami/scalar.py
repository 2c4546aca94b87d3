"""Exact rationals and outward-rounded dyadic intervals.

A ``Scalar`` is either a :class:`fractions.Fraction` (exact) or an
:class:`Interval` whose endpoints are dyadic rationals rounded outward to a
fixed number of significant bits.  Every quantity with a square root in it
(sector tangents on non-Pythagorean directions) becomes an ``Interval``;
everything else stays exact.

Decisions on interval-valued quantities go through :func:`decide`, which
recomputes at doubled precision until the answer is certain or the precision
cap is reached.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Optional, TypeVar, Union

DEFAULT_BITS = 128
DEFAULT_CAP = 4096


class PrecisionExhausted(ArithmeticError):
    """An interval still straddles a decision boundary at the precision cap."""

    def __init__(self, what: str, bits: int):
        super().__init__(f"precision exhausted deciding {what} at {bits} bits")
        self.what = what
        self.bits = bits


def _exponent(q: Fraction) -> int:
    # floor(log2|q|) up to +-1; only used to pick a rounding grid
    return abs(q.numerator).bit_length() - q.denominator.bit_length()


def round_down(q: Fraction, bits: int) -> Fraction:
    if q == 0:
        return q
    k = bits - _exponent(q)
    if k <= 0:
        scale = 1 << (-k)
        return Fraction((q.numerator // (q.denominator * scale)) * scale)
    return Fraction((q.numerator << k) // q.denominator, 1 << k)


def round_up(q: Fraction, bits: int) -> Fraction:
    return -round_down(-q, bits)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    bits: int = DEFAULT_BITS

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def around(cls, lo: Fraction, hi: Fraction, bits: int) -> "Interval":
        return cls(round_down(Fraction(lo), bits), round_up(Fraction(hi), bits), bits)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersect(self, other: "Interval") -> "Interval":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise ValueError("disjoint enclosures of one quantity")
        return Interval(lo, hi, max(self.bits, other.bits))

    def _coerce(self, other):
        if isinstance(other, Interval):
            return other
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return Interval(q, q, self.bits)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Interval.around(self.lo + o.lo, self.hi + o.hi, max(self.bits, o.bits))

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo, self.bits)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval.around(min(ps), max(ps), max(self.bits, o.bits))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval reciprocal straddles zero")
        return Interval.around(1 / self.hi, 1 / self.lo, self.bits)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi), self.bits)

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        return f"Interval([{float(self.lo):.17g}, {float(self.hi):.17g}], bits={self.bits})"


Scalar = Union[Fraction, Interval]


def is_exact(x: Scalar) -> bool:
    return not isinstance(x, Interval)


def as_interval(x: Scalar, bits: int = DEFAULT_BITS) -> Interval:
    if isinstance(x, Interval):
        return x
    q = Fraction(x)
    return Interval(q, q, bits)


def exact_sqrt(q: Fraction) -> Optional[Fraction]:
    """Rational square root of ``q`` if it exists."""
    if q < 0:
        raise ValueError("square root of a negative number")
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt(q: Fraction, bits: int = DEFAULT_BITS) -> Scalar:
    """Square root of a non-negative rational: exact when possible."""
    q = Fraction(q)
    r = exact_sqrt(q)
    if r is not None:
        return r
    # grid 2^-k with k chosen for ~bits significant bits of the root
    k = bits - _exponent(q) // 2
    if k >= 0:
        scaled = (q.numerator << (2 * k)) // q.denominator
        lo = isqrt(scaled)
        return Interval(Fraction(lo, 1 << k), Fraction(lo + 1, 1 << k), bits)
    shift = -k
    scaled = q.numerator // (q.denominator << (2 * shift))
    lo = isqrt(scaled)
    return Interval(Fraction(lo << shift), Fraction((lo + 1) << shift), bits)


def sign(x: Scalar) -> Optional[int]:
    """-1, 0, 1, or None when an interval straddles zero."""
    if isinstance(x, Interval):
        if x.lo > 0:
            return 1
        if x.hi < 0:
            return -1
        if x.lo == x.hi == 0:
            return 0
        return None
    return (x > 0) - (x < 0)


def in_band(x: Scalar, lo: Fraction, hi: Fraction) -> Optional[bool]:
    """Whether ``lo <= x <= hi``; None if an interval cannot tell."""
    if isinstance(x, Interval):
        if lo <= x.lo and x.hi <= hi:
            return True
        if x.hi < lo or x.lo > hi:
            return False
        return None
    return lo <= x <= hi


def to_float(x: Scalar) -> float:
    return float(x.mid) if isinstance(x, Interval) else float(x)


T = TypeVar("T")


def decide(
    what: str,
    evaluate: Callable[[int], T],
    verdict: Callable[[T], Optional[object]],
    bits: int = DEFAULT_BITS,
    cap: int = DEFAULT_CAP,
):
    """Evaluate at increasing precision until ``verdict`` is not None.

    ``evaluate(bits)`` recomputes the quantity from exact inputs at the given
    precision; ``verdict`` maps it to an answer or None if undecided.
    """
    while True:
        try:
            answer = verdict(evaluate(bits))
        except ZeroDivisionError:
            answer = None
        if answer is not None:
            return answer
        if bits >= cap:
            raise PrecisionExhausted(what, bits)
        bits = min(2 * bits, cap)


def parse_rational(text) -> Fraction:
    """Parse ``"num/den"`` (or an integer) exactly; floats are rejected."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"rationals must be given as 'num/den' strings, got {text!r}")
    s = text.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        if not _is_int(num) or not _is_int(den) or int(den) == 0:
            raise ValueError(f"malformed rational {text!r}")
        return Fraction(int(num), int(den))
    if not _is_int(s):
        raise ValueError(f"malformed rational {text!r}")
    return Fraction(int(s))


def _is_int(s: str) -> bool:
    s = s.strip()
    if s.startswith(("-", "+")):
        s = s[1:]
    return s.isdigit()


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"
