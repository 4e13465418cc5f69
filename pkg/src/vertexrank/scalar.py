"""Exact arithmetic in the Gaussian rationals Q(i).

Every scalar in the package is a :class:`GaussRational`: a pair of
:class:`fractions.Fraction` values.  ``Fraction`` already keeps itself
reduced with a positive denominator, so it serves directly as the
rational type.  Values are immutable and compare structurally.

Q(i) is not algebraically closed.  Operations that need a square root
outside it raise :class:`~vertexrank.errors.NotASquareError` instead of
approximating.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt
from numbers import Rational as _RationalABC

from .errors import NotASquareError, ParseError

Rational = Fraction

__all__ = [
    "Rational",
    "GaussRational",
    "ZERO",
    "ONE",
    "I",
    "gauss",
    "is_zero",
    "arith",
    "parse_scalar",
    "format_scalar",
    "rational_sqrt",
    "gauss_sqrt",
]


class GaussRational:
    """An element ``re + im*i`` of Q(i) with exact rational parts."""

    __slots__ = ("_re", "_im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussRational):
            if im:
                raise TypeError("imaginary part given twice")
            self._re, self._im = re._re, re._im
            return
        self._re = re if type(re) is Fraction else Fraction(re)
        self._im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def _raw(cls, re, im):
        obj = object.__new__(cls)
        obj._re = re
        obj._im = im
        return obj

    @property
    def re(self) -> Fraction:
        return self._re

    @property
    def im(self) -> Fraction:
        return self._im

    def conjugate(self) -> GaussRational:
        return GaussRational._raw(self._re, -self._im)

    def norm(self) -> Fraction:
        """Field norm ``re**2 + im**2``."""
        return self._re * self._re + self._im * self._im

    def is_real(self) -> bool:
        return not self._im

    # arithmetic ------------------------------------------------------

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussRational._raw(self._re + o._re, self._im + o._im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussRational._raw(self._re - o._re, self._im - o._im)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussRational._raw(o._re - self._re, o._im - self._im)

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self._re, self._im, o._re, o._im
        if not b:
            if not d:
                return GaussRational._raw(a * c, d)
            return GaussRational._raw(a * c, a * d)
        if not d:
            return GaussRational._raw(a * c, b * c)
        return GaussRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o._inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self._inverse()

    def _inverse(self) -> GaussRational:
        if not self._im:
            if not self._re:
                raise ZeroDivisionError("division by zero in Q(i)")
            return GaussRational._raw(1 / self._re, self._im)
        n = self.norm()
        return GaussRational._raw(self._re / n, -self._im / n)

    def __neg__(self):
        return GaussRational._raw(-self._re, -self._im)

    def __pos__(self):
        return self

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self._inverse() ** (-exponent)
        result = ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # comparison / hashing --------------------------------------------

    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self._re == o._re and self._im == o._im

    def __hash__(self):
        if not self._im:
            return hash(self._re)
        return hash((self._re, self._im))

    def __bool__(self):
        return bool(self._re) or bool(self._im)

    def __repr__(self):
        return f"GaussRational({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)

    def __reduce__(self):
        return (GaussRational, (self._re, self._im))


def _coerce(x):
    if isinstance(x, GaussRational):
        return x
    if isinstance(x, (int, _RationalABC)):
        return GaussRational._raw(Fraction(x), Fraction(0))
    return None


ZERO = GaussRational(0)
ONE = GaussRational(1)
I = GaussRational(0, 1)


def gauss(x) -> GaussRational:
    """Coerce an int, Fraction, GaussRational or scalar string."""
    if isinstance(x, str):
        return parse_scalar(x)
    g = _coerce(x)
    if g is None:
        raise TypeError(f"cannot convert {type(x).__name__} to GaussRational")
    return g


def is_zero(a) -> bool:
    return not gauss(a)


def arith(a, b, op: str) -> GaussRational:
    """Apply one of ``add``, ``sub``, ``mul``, ``div`` to two scalars."""
    a, b = gauss(a), gauss(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# text form -------------------------------------------------------------

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def _parse_rational(text: str, line=None) -> Fraction:
    if not _RATIONAL_RE.match(text):
        raise ParseError(f"bad rational {text!r}", line)
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}", line) from None


def parse_scalar(text: str, line=None) -> GaussRational:
    """Parse ``a/b``, ``a/b+c/d*i``, ``i``, ``-i``, ``3*i`` and similar."""
    s = "".join(text.split())
    if not s:
        raise ParseError("empty scalar", line)
    if not s.endswith("i"):
        return GaussRational._raw(_parse_rational(s, line), Fraction(0))
    body = s[:-1]
    split = max(body.rfind("+"), body.rfind("-"))
    if split > 0:
        re_part, im_part = body[:split], body[split:]
    else:
        re_part, im_part = "", body
    if im_part.endswith("*"):
        im_part = im_part[:-1]
        if im_part in ("", "+", "-"):
            raise ParseError(f"bad scalar {text!r}", line)
    if im_part in ("", "+"):
        im = Fraction(1)
    elif im_part == "-":
        im = Fraction(-1)
    else:
        im = _parse_rational(im_part, line)
    real = _parse_rational(re_part, line) if re_part else Fraction(0)
    return GaussRational._raw(real, im)


def format_scalar(a) -> str:
    a = gauss(a)
    re_, im = a.re, a.im
    if not im:
        return str(re_)
    if im == 1:
        im_text = "i"
    elif im == -1:
        im_text = "-i"
    else:
        im_text = f"{im}*i"
    if not re_:
        return im_text
    if im > 0:
        return f"{re_}+{im_text}"
    return f"{re_}{im_text}"


# square roots ----------------------------------------------------------

def rational_sqrt(q) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    q = Fraction(q)
    if q < 0:
        return None
    p, r = q.numerator, q.denominator
    sp, sr = isqrt(p), isqrt(r)
    if sp * sp != p or sr * sr != r:
        return None
    return Fraction(sp, sr)


def gauss_sqrt(z) -> GaussRational:
    """A square root of ``z`` in Q(i); raises NotASquareError if none exists."""
    z = gauss(z)
    a, b = z.re, z.im
    if not b:
        if a >= 0:
            r = rational_sqrt(a)
            if r is not None:
                return GaussRational._raw(r, Fraction(0))
        else:
            r = rational_sqrt(-a)
            if r is not None:
                return GaussRational._raw(Fraction(0), r)
        raise NotASquareError(z)
    m = rational_sqrt(a * a + b * b)
    if m is None:
        raise NotASquareError(z)
    x = rational_sqrt((a + m) / 2)
    if x is None or not x:
        raise NotASquareError(z)
    return GaussRational._raw(x, b / (2 * x))
