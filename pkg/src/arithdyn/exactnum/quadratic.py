"""Exact arithmetic in quadratic fields Q(sqrt(D))."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .factor import factor_integer
from .poly import IntPoly


def squarefree_decompose(n: int) -> tuple[int, int]:
    """``n = s**2 * D`` with ``D`` square-free (sign kept in ``D``)."""
    if n == 0:
        raise ValueError("0 has no square-free part")
    sign = -1 if n < 0 else 1
    s, core = 1, 1
    for p, e in factor_integer(n).items():
        s *= p ** (e // 2)
        if e % 2:
            core *= p
    return s, sign * core


@dataclass(frozen=True)
class QuadraticNumber:
    """``a + b*sqrt(D)`` with rational ``a, b`` and square-free ``D != 0, 1``."""

    a: Fraction
    b: Fraction
    D: int

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def _coerce(self, other) -> "QuadraticNumber":
        if isinstance(other, QuadraticNumber):
            if other.D != self.D:
                raise ValueError("different quadratic fields")
            return other
        return QuadraticNumber(Fraction(other), Fraction(0), self.D)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadraticNumber(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.D)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadraticNumber(self.a * o.a + self.b * o.b * self.D, self.a * o.b + self.b * o.a, self.D)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = QuadraticNumber(Fraction(1), Fraction(0), self.D)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.D

    def trace(self) -> Fraction:
        return 2 * self.a

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __truediv__(self, other):
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        num = self * o.conjugate()
        return QuadraticNumber(num.a / n, num.b / n, self.D)

    def minimal_polynomial(self) -> IntPoly:
        """Primitive integer minimal polynomial (degree 1 when ``b == 0``)."""
        if self.b == 0:
            return IntPoly((-self.a.numerator, self.a.denominator)).primitive()
        t, n = self.trace(), self.norm()
        den = t.denominator * n.denominator // gcd(t.denominator, n.denominator)
        return IntPoly((int(n * den), int(-t * den), den)).primitive()

    def to_complex(self, ctx):
        if self.D > 0:
            return ctx.mpc(ctx.mpf(self.a.numerator) / self.a.denominator
                           + ctx.mpf(self.b.numerator) / self.b.denominator * ctx.sqrt(self.D))
        return ctx.mpc(ctx.mpf(self.a.numerator) / self.a.denominator,
                       ctx.mpf(self.b.numerator) / self.b.denominator * ctx.sqrt(-self.D))


def quadratic_roots(q: IntPoly) -> tuple[QuadraticNumber, QuadraticNumber]:
    """Both roots of an irreducible integer quadratic, exactly."""
    if q.degree != 2:
        raise ValueError("need a quadratic")
    c, b, a = q.coeffs
    disc = b * b - 4 * a * c
    s, D = squarefree_decompose(disc)
    if D == 1:
        raise ValueError("reducible quadratic")
    r = QuadraticNumber(Fraction(-b, 2 * a), Fraction(s, 2 * a), D)
    return r, r.conjugate()


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n
