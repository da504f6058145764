"""Exact complex-rational arithmetic for the algebraic verification paths.

Spectral code uses ordinary ``complex``; everything that claims an *exact*
verdict runs on :class:`QG` values (Gaussian rationals: real and imaginary
parts are ``fractions.Fraction``).  The helpers at the bottom let callers
treat the two scalar kinds uniformly.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class QG:
    """Gaussian rational a + b*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def of(cls, x) -> "QG":
        if isinstance(x, QG):
            return x
        return cls(_frac(x))

    def __add__(self, other):
        o = QG.of(other)
        return QG(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = QG.of(other)
        return QG(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return QG.of(other).__sub__(self)

    def __mul__(self, other):
        o = QG.of(other)
        return QG(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QG.of(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QG((self.re * o.re + self.im * o.im) / d,
                  (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        return QG.of(other).__truediv__(self)

    def __neg__(self):
        return QG(-self.re, -self.im)

    def conjugate(self) -> "QG":
        return QG(self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, (QG, int, Rational)):
            o = QG.of(other)
            return self.re == o.re and self.im == o.im
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QG({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


I = QG(0, 1)
ZERO = QG(0)
ONE = QG(1)


def conj(z):
    """Complex conjugate for either scalar kind."""
    if isinstance(z, QG):
        return z.conjugate()
    return complex(z).conjugate()


def is_zero(z, tol: float = 0.0) -> bool:
    if isinstance(z, QG):
        return not z
    return abs(z) <= tol


def as_complex(z) -> complex:
    return complex(z)


def exact_scalar(x) -> QG:
    """Coerce ints/Fractions/QG to QG; reject floats (lossy)."""
    if isinstance(x, float) or isinstance(x, complex):
        raise TypeError("refusing lossy float -> exact conversion")
    return QG.of(x)
