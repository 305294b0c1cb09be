"""Endomorphisms of P^1 over Q given by primitive homogeneous integer lifts."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

from .exactnum import (
    BinaryForm,
    ComplexApprox,
    IntPoly,
    complex_roots,
    content_of,
    factor_integer,
    resultant,
    sylvester_cofactors,
)
from .exactnum.quadratic import QuadraticNumber, quadratic_roots


class DegenerateMapError(ValueError):
    """The two forms share a projective root, so they do not define a morphism."""


@dataclass(frozen=True)
class ProjPoint:
    """A point (a:b) of P^1(Q): coprime integers, b >= 0, and a > 0 when b == 0."""

    a: int
    b: int

    def __post_init__(self):
        a, b = int(self.a), int(self.b)
        if a == 0 and b == 0:
            raise ValueError("(0:0) is not a projective point")
        g = gcd(a, b)
        a, b = a // g, b // g
        if b < 0 or (b == 0 and a < 0):
            a, b = -a, -b
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def infinity(cls) -> "ProjPoint":
        return cls(1, 0)

    @classmethod
    def from_fraction(cls, x) -> "ProjPoint":
        x = Fraction(x)
        return cls(x.numerator, x.denominator)

    @classmethod
    def parse(cls, text: str) -> "ProjPoint":
        t = text.strip().lower()
        if t in ("inf", "infinity", "oo", "∞"):
            return cls.infinity()
        if ":" in t:
            a, b = t.split(":")
            return cls(int(a), int(b))
        return cls.from_fraction(Fraction(t))

    @property
    def is_infinity(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.is_infinity:
            raise ZeroDivisionError("point at infinity")
        return Fraction(self.a, self.b)

    def __str__(self) -> str:
        if self.is_infinity:
            return "inf"
        return str(self.a) if self.b == 1 else f"{self.a}/{self.b}"


@dataclass(frozen=True)
class Moebius:
    """z -> (a z + b)/(c z + d), acting on lifts by (X, Y) -> (aX + bY, cX + dY)."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det == 0:
            raise ValueError("singular Moebius matrix")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def adjugate(self) -> "Moebius":
        return Moebius(self.d, -self.b, -self.c, self.a)

    def is_unimodular(self) -> bool:
        return abs(self.det) == 1

    def __call__(self, x: ProjPoint) -> ProjPoint:
        return ProjPoint(self.a * x.a + self.b * x.b, self.c * x.a + self.d * x.b)

    def forms(self) -> tuple[BinaryForm, BinaryForm]:
        return BinaryForm.linear(self.a, self.b), BinaryForm.linear(self.c, self.d)


def _normalize_lift(F: BinaryForm, G: BinaryForm) -> tuple[BinaryForm, BinaryForm]:
    g = content_of(F.coeffs + G.coeffs)
    if g == 0:
        raise DegenerateMapError("zero lift")
    lead = next((c for c in reversed(G.coeffs) if c), None)
    if lead is None:
        lead = next(c for c in reversed(F.coeffs) if c)
    if lead < 0:
        g = -g
    return F.map_coeffs(lambda c: c // g), G.map_coeffs(lambda c: c // g)


@dataclass(frozen=True)
class RationalMap:
    """Degree-d endomorphism of P^1 with primitive, sign-normalized lift (F, G)."""

    F: BinaryForm
    G: BinaryForm
    res: int = field(compare=False)
    bad_primes: dict = field(compare=False, hash=False)

    @property
    def degree(self) -> int:
        return self.F.degree

    @cached_property
    def cofactors(self):
        return sylvester_cofactors(self.F, self.G, self.res)

    def numerator(self) -> IntPoly:
        return self.F.dehomogenize()

    def denominator(self) -> IntPoly:
        return self.G.dehomogenize()

    def lift(self, a, b):
        return self.F(a, b), self.G(a, b)

    def __call__(self, x: ProjPoint) -> ProjPoint:
        return ProjPoint(*self.lift(x.a, x.b))

    def __str__(self) -> str:
        return f"({list(self.numerator().coeffs)}) / ({list(self.denominator().coeffs)})"

    def to_json(self) -> dict:
        return {"num": [str(c) for c in self.numerator().coeffs], "den": [str(c) for c in self.denominator().coeffs]}


def map_from_forms(F: BinaryForm, G: BinaryForm) -> RationalMap:
    if F.degree != G.degree:
        raise ValueError("forms must share a degree")
    if F.degree < 2:
        raise ValueError(f"degree {F.degree} < 2")
    F, G = _normalize_lift(F, G)
    res = resultant(F, G)
    if res == 0:
        raise DegenerateMapError("numerator and denominator share a projective root")
    return RationalMap(F, G, res, factor_integer(res))


def build_map(numerator: IntPoly, denominator: IntPoly) -> RationalMap:
    """The map x -> numerator(x)/denominator(x); coefficient lists are accepted."""
    if not isinstance(numerator, IntPoly):
        numerator = IntPoly(tuple(numerator))
    if not isinstance(denominator, IntPoly):
        denominator = IntPoly(tuple(denominator))
    if denominator.is_zero():
        raise ValueError("zero denominator")
    d = max(numerator.degree, denominator.degree)
    if d < 2:
        raise ValueError(f"degree {d} < 2")
    return map_from_forms(BinaryForm.homogenize(numerator, d), BinaryForm.homogenize(denominator, d))


def polynomial_map(coeffs) -> RationalMap:
    """Shorthand for a polynomial map, coefficients lowest degree first."""
    return build_map(IntPoly(tuple(coeffs)), IntPoly((1,)))


def iterate_forms(f: RationalMap, n: int) -> tuple[BinaryForm, BinaryForm]:
    """Exact (unstripped) lift of the n-th iterate."""
    Fn, Gn = BinaryForm((0, 1), 1), BinaryForm((1, 0), 1)
    for _ in range(n):
        Fn, Gn = f.F.compose(Fn, Gn), f.G.compose(Fn, Gn)
    return Fn, Gn


@dataclass(frozen=True)
class OrbitLedger:
    """Normalized orbit plus the contents stripped at each step.

    ``strips`` holds (step, prime, valuation); ``signs[k]`` is the unit removed
    at step ``k`` (``signs[0] = 1``).  The unnormalized iterate satisfies

        Phi^n(x) = prod_k (sign_k * prod_p p**v)**(d**(n-k)) * orbit[n]
    """

    orbit: tuple[ProjPoint, ...]
    strips: tuple[tuple[int, int, int], ...]
    signs: tuple[int, ...]
    degree: int

    def scale_at(self, n: int) -> int:
        d = self.degree
        lam = 1
        for k in range(1, n + 1):
            step_scale = self.signs[k]
            for step, p, v in self.strips:
                if step == k:
                    step_scale *= p**v
            lam = lam**d * step_scale
        return lam


def evaluate_orbit(f: RationalMap, x: ProjPoint, n: int) -> OrbitLedger:
    if n < 0:
        raise ValueError("n must be >= 0")
    orbit = [x]
    strips = []
    signs = [1]
    a, b = x.a, x.b
    for k in range(1, n + 1):
        A, B = f.lift(a, b)
        g = gcd(A, B)
        nxt = ProjPoint(A, B)
        sign = 1 if (nxt.a * g == A and nxt.b * g == B) else -1
        if g > 1:
            for p, v in factor_integer(g).items():
                strips.append((k, p, v))
        signs.append(sign)
        orbit.append(nxt)
        a, b = nxt.a, nxt.b
    return OrbitLedger(tuple(orbit), tuple(strips), tuple(signs), f.degree)


def conjugate(f: RationalMap, g: Moebius) -> RationalMap:
    """Primitive lift of g o f o g^-1."""
    L1, L2 = g.adjugate().forms()
    F1, G1 = f.F.compose(L1, L2), f.G.compose(L1, L2)
    return map_from_forms(F1.scale(g.a) + G1.scale(g.b), F1.scale(g.c) + G1.scale(g.d))


# ---------------------------------------------------------------------------
# factoring binary forms, critical points, exceptional points

def factor_form(W: BinaryForm) -> list[tuple[BinaryForm, int]]:
    """Irreducible primitive factors over Z of a nonzero binary form (constants dropped)."""
    out: list[tuple[BinaryForm, int]] = []
    inf_mult = W.infinity_multiplicity()
    if inf_mult:
        out.append((BinaryForm((1, 0), 1), inf_mult))  # the form Y
    _, parts = W.dehomogenize().factor_list()
    for q, k in parts:
        if q.degree >= 1:
            out.append((BinaryForm.homogenize(q.primitive(), q.degree), k))
    return out


def _form_point(q: BinaryForm):
    """Exact or approximate roots of an irreducible factor."""
    if q.degree == 1:
        y, x = q.coeffs  # q = x*X + y*Y vanishes at (-y : x)
        return ProjPoint(-y, x)
    if q.degree == 2:
        return QuadPoint.from_irreducible(q.dehomogenize())
    return None


@dataclass(frozen=True)
class QuadPoint:
    """A point of P^1 over a quadratic field: finite value or infinity (value None)."""

    value: QuadraticNumber | None
    D: int

    @classmethod
    def from_irreducible(cls, q: IntPoly) -> "QuadPoint":
        r, _ = quadratic_roots(q)
        return cls(r, r.D)

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    def conjugate(self) -> "QuadPoint":
        return self if self.value is None else QuadPoint(self.value.conjugate(), self.D)

    def minimal_polynomial(self) -> IntPoly:
        return self.value.minimal_polynomial()


def apply_quadratic(f: RationalMap, x: QuadPoint) -> QuadPoint:
    if x.is_infinity:
        A, B = f.F.coeffs[-1], f.G.coeffs[-1]
        if B == 0:
            return QuadPoint(None, x.D)
        return QuadPoint(QuadraticNumber(Fraction(A, B), Fraction(0), x.D), x.D)
    num = f.F(x.value, QuadraticNumber(1, 0, x.D))
    den = f.G(x.value, QuadraticNumber(1, 0, x.D))
    if den.is_zero():
        return QuadPoint(None, x.D)
    return QuadPoint(num / den, x.D)


@dataclass(frozen=True)
class CriticalPoint:
    """One Galois orbit of critical points: an irreducible factor of the Wronskian."""

    factor: BinaryForm
    multiplicity: int
    exact: object  # ProjPoint, QuadPoint, or None above degree 2
    approx: tuple[ComplexApprox, ...] = ()

    @property
    def degree(self) -> int:
        return self.factor.degree

    @property
    def count(self) -> int:
        """Critical points in this orbit, counted with multiplicity."""
        return self.degree * self.multiplicity


@dataclass(frozen=True)
class CriticalDivisor:
    wronskian: BinaryForm
    points: tuple[CriticalPoint, ...]

    @property
    def total_multiplicity(self) -> int:
        return sum(c.count for c in self.points)


def wronskian(f: RationalMap) -> BinaryForm:
    """Primitive form F_X G_Y - F_Y G_X of degree 2d - 2."""
    W = f.F.d_dx() * f.G.d_dy() - f.F.d_dy() * f.G.d_dx()
    g = W.content()
    lead = next(c for c in reversed(W.coeffs) if c)
    return W.map_coeffs(lambda c: c // (g if lead > 0 else -g))


def critical_divisor(f: RationalMap, tol=1e-40, prec: int = 256) -> CriticalDivisor:
    W = wronskian(f)
    pts = []
    for q, k in factor_form(W):
        exact = _form_point(q)
        approx = () if q.degree <= 2 else tuple(complex_roots(q.dehomogenize(), tol, prec))
        pts.append(CriticalPoint(q, k, exact, approx))
    return CriticalDivisor(W, tuple(pts))


def _proportional(A: BinaryForm, B: BinaryForm) -> bool:
    if A.degree != B.degree:
        return False
    ia = next((i for i, c in enumerate(A.coeffs) if c), None)
    ib = next((i for i, c in enumerate(B.coeffs) if c), None)
    if ia is None or ib is None or ia != ib:
        return ia is None and ib is None
    la, lb = A.coeffs[ia], B.coeffs[ib]
    return all(a * lb == b * la for a, b in zip(A.coeffs, B.coeffs))


def is_totally_invariant(f: RationalMap, q: BinaryForm) -> bool:
    """True when q(F, G) is a constant multiple of q**d, i.e. f^-1(V(q)) = V(q)."""
    return _proportional(q.compose(f.F, f.G), q ** f.degree)


def exceptional_forms(f: RationalMap) -> list[BinaryForm]:
    """Forms cutting out the exceptional set (points with finite grand orbit).

    Exceptional points are fully ramified, so candidates are Wronskian factors
    of multiplicity d - 1; a candidate set E is accepted when f^-1(E) = E.
    """
    d = f.degree
    cands = [q for q, k in factor_form(wronskian(f)) if k == d - 1 and q.degree <= 2]
    found: list[BinaryForm] = []
    linear = [q for q in cands if q.degree == 1]
    for q in cands:
        if is_totally_invariant(f, q):
            found.append(q)
    for i in range(len(linear)):
        for j in range(i + 1, len(linear)):
            pair = linear[i] * linear[j]
            if linear[i] not in found and linear[j] not in found and is_totally_invariant(f, pair):
                found.append(pair)
    return found


def is_exceptional_point(f: RationalMap, x: ProjPoint) -> bool:
    return any(q(x.a, x.b) == 0 for q in exceptional_forms(f))
