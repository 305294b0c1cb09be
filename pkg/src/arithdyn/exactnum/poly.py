"""Dense integer polynomials and binary forms.

``IntPoly`` stores coefficients lowest degree first.  ``BinaryForm`` stores
``c[i]`` as the coefficient of ``X**i * Y**(d - i)``, so that dehomogenizing
at ``Y = 1`` gives an ``IntPoly`` with the same coefficient list.

Factorization-type operations (gcd, square-free and irreducible
decomposition over Z) delegate to sympy's dense univariate routines.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from sympy.polys.densearith import dup_exquo
from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_gcd
from sympy.polys.factortools import dup_factor_list
from sympy.polys.sqfreetools import dup_sqf_list


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = [int(x) for x in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c) if c else (0,)


def _to_dup(coeffs: Sequence[int]) -> list:
    return [ZZ(int(c)) for c in reversed(coeffs)]


def _from_dup(dup: Sequence) -> "IntPoly":
    return IntPoly(tuple(int(c) for c in reversed(dup)) or (0,))


def content_of(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g


@dataclass(frozen=True)
class IntPoly:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> "IntPoly":
        p = cls((1,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @classmethod
    def x(cls) -> "IntPoly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"

    def __add__(self, other) -> "IntPoly":
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "IntPoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "IntPoly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "IntPoly":
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return IntPoly((0,))
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntPoly":
        out = IntPoly((1,))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_fraction(self, x: Fraction) -> Fraction:
        """Exact value at a rational point, by a common-denominator Horner."""
        x = Fraction(x)
        num, den = x.numerator, x.denominator
        acc = 0
        power = 1
        for c in reversed(self.coeffs):
            acc = acc * num + c * power
            power *= den
        return Fraction(acc, den ** self.degree)

    def derivative(self) -> "IntPoly":
        return IntPoly(tuple(i * c for i, c in enumerate(self.coeffs))[1:] or (0,))

    def content(self) -> int:
        return content_of(self.coeffs)

    def primitive(self) -> "IntPoly":
        """Divide by the content, making the leading coefficient positive."""
        g = self.content()
        if g == 0:
            return self
        if self.lead < 0:
            g = -g
        return IntPoly(tuple(c // g for c in self.coeffs))

    def compose(self, inner: "IntPoly") -> "IntPoly":
        acc = IntPoly((0,))
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def gcd(self, other: "IntPoly") -> "IntPoly":
        h = dup_gcd(_to_dup(self.coeffs), _to_dup(_as_poly(other).coeffs), ZZ)
        return _from_dup(h).primitive()

    def exact_quo(self, other: "IntPoly") -> "IntPoly":
        """Quotient over Z; raises ValueError when the division leaves a remainder."""
        try:
            q = dup_exquo(_to_dup(self.coeffs), _to_dup(_as_poly(other).coeffs), ZZ)
        except Exception as exc:  # sympy raises ExactQuotientFailed
            raise ValueError(f"{other} does not divide {self}") from exc
        return _from_dup(q)

    def sqf_list(self) -> tuple[int, list[tuple["IntPoly", int]]]:
        """Square-free decomposition ``c * prod(q_k ** k)`` with primitive ``q_k``."""
        c, parts = dup_sqf_list(_to_dup(self.coeffs), ZZ)
        return int(c), [(_from_dup(q), int(k)) for q, k in parts]

    def squarefree_part(self) -> "IntPoly":
        out = IntPoly((1,))
        for q, _ in self.sqf_list()[1]:
            out = out * q
        return out.primitive()

    def factor_list(self) -> tuple[int, list[tuple["IntPoly", int]]]:
        """Irreducible factorization over Z."""
        c, parts = dup_factor_list(_to_dup(self.coeffs), ZZ)
        return int(c), [(_from_dup(q), int(k)) for q, k in parts]

    def is_irreducible(self) -> bool:
        if self.degree < 1:
            return False
        _, parts = self.factor_list()
        return len(parts) == 1 and parts[0][1] == 1 and parts[0][0].degree == self.degree


def _as_poly(x) -> IntPoly:
    if isinstance(x, IntPoly):
        return x
    if isinstance(x, int):
        return IntPoly((x,))
    raise TypeError(f"cannot treat {type(x).__name__} as IntPoly")


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous form of a fixed degree; ``coeffs[i]`` multiplies ``X**i Y**(d-i)``."""

    coeffs: tuple
    degree: int

    def __post_init__(self):
        c = tuple(self.coeffs)
        if len(c) > self.degree + 1:
            if any(c[self.degree + 1:]):
                raise ValueError("coefficient list longer than degree + 1")
            c = c[: self.degree + 1]
        c = c + (0,) * (self.degree + 1 - len(c))
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def homogenize(cls, p: IntPoly, degree: int) -> "BinaryForm":
        if p.degree > degree and not p.is_zero():
            raise ValueError("polynomial degree exceeds form degree")
        return cls(p.coeffs, degree)

    @classmethod
    def monomial(cls, i: int, degree: int, coeff=1) -> "BinaryForm":
        c = [0] * (degree + 1)
        c[i] = coeff
        return cls(tuple(c), degree)

    @classmethod
    def linear(cls, x_coeff, y_coeff) -> "BinaryForm":
        """The form ``x_coeff * X + y_coeff * Y``."""
        return cls((y_coeff, x_coeff), 1)

    def __repr__(self) -> str:
        return f"BinaryForm({list(self.coeffs)}, degree={self.degree})"

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def dehomogenize(self) -> IntPoly:
        return IntPoly(self.coeffs)

    def __call__(self, a, b):
        # Horner in a, with powers of b supplied from the low end.
        d = self.degree
        acc = self.coeffs[d] * (a ** 0)
        bpow = b ** 0
        for i in range(d - 1, -1, -1):
            bpow = bpow * b
            acc = acc * a + self.coeffs[i] * bpow
        return acc

    def map_coeffs(self, fn) -> "BinaryForm":
        return BinaryForm(tuple(fn(c) for c in self.coeffs), self.degree)

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return BinaryForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.degree)

    def __neg__(self) -> "BinaryForm":
        return self.map_coeffs(lambda c: -c)

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        return self + (-other)

    def scale(self, s) -> "BinaryForm":
        return self.map_coeffs(lambda c: c * s)

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        out = [0] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return BinaryForm(tuple(out), self.degree + other.degree)

    def __pow__(self, k: int) -> "BinaryForm":
        out = BinaryForm((1,), 0)
        for _ in range(k):
            out = out * self
        return out

    def d_dx(self) -> "BinaryForm":
        if self.degree == 0:
            return BinaryForm((0,), 0)
        return BinaryForm(tuple(i * self.coeffs[i] for i in range(1, self.degree + 1)), self.degree - 1)

    def d_dy(self) -> "BinaryForm":
        d = self.degree
        if d == 0:
            return BinaryForm((0,), 0)
        return BinaryForm(tuple((d - i) * self.coeffs[i] for i in range(d)), d - 1)

    def compose(self, p: "BinaryForm", q: "BinaryForm") -> "BinaryForm":
        """``self(p(X, Y), q(X, Y))`` for forms ``p``, ``q`` of a common degree."""
        if p.degree != q.degree:
            raise ValueError("inner forms must share a degree")
        d, e = self.degree, p.degree
        ppow = [BinaryForm((1,), 0)]
        qpow = [BinaryForm((1,), 0)]
        for _ in range(d):
            ppow.append(ppow[-1] * p)
            qpow.append(qpow[-1] * q)
        out = BinaryForm((0,), d * e)
        for i, c in enumerate(self.coeffs):
            if c:
                out = out + (ppow[i] * qpow[d - i]).scale(c)
        return out

    def content(self) -> int:
        return content_of(self.coeffs)

    def infinity_multiplicity(self) -> int:
        """Multiplicity of the root (1:0), i.e. the power of Y dividing the form."""
        if self.is_zero():
            raise ValueError("zero form")
        return self.degree - self.dehomogenize().degree

    def x_multiplicity(self) -> int:
        """Multiplicity of the root (0:1), i.e. the power of X dividing the form."""
        if self.is_zero():
            raise ValueError("zero form")
        k = 0
        while self.coeffs[k] == 0:
            k += 1
        return k
