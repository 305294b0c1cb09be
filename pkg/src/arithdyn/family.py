"""One-parameter families x -> F_t/G_t with sections t -> s(t)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .dynmap import DegenerateMapError, ProjPoint, RationalMap, map_from_forms
from .exactnum import BinaryForm, IntPoly, resultant
from .exactnum.precision import DEFAULT_PREC, context
from .globalheight import HeightResult, canonical_height, naive_height, preperiodic_test


class DegenerateFiberError(DegenerateMapError):
    """Res(t0) = 0: the fiber is not a morphism of degree d."""


def _poly(c) -> IntPoly:
    if isinstance(c, IntPoly):
        return c
    if isinstance(c, int):
        return IntPoly((c,))
    return IntPoly(tuple(int(x) for x in c))


def _hom_eval(p: IntPoly, u: int, w: int, m: int) -> int:
    """w**m * p(u/w) for deg p <= m."""
    return sum(c * u**i * w ** (m - i) for i, c in enumerate(p.coeffs))


def _interpolate(xs: list[int], ys: list[int]) -> IntPoly:
    """Exact Lagrange interpolation; the result must be integral."""
    n = len(xs)
    total = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = 1
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        for k in range(n):
            total[k] += ys[i] * basis[k] / denom
    if any(c.denominator != 1 for c in total):
        raise ArithmeticError("interpolated resultant is not integral")
    return IntPoly(tuple(int(c) for c in total))


@dataclass(frozen=True)
class ParamFamily:
    """F_t, G_t as binary forms whose coefficients are integer polynomials in t."""

    F: tuple  # IntPoly per X^i Y^(d-i)
    G: tuple
    degree: int
    res: IntPoly

    @classmethod
    def from_forms(cls, F, G, degree: int) -> "ParamFamily":
        F = tuple(_poly(c) for c in F) + (IntPoly((0,)),) * (degree + 1 - len(F))
        G = tuple(_poly(c) for c in G) + (IntPoly((0,)),) * (degree + 1 - len(G))
        if len(F) != degree + 1 or len(G) != degree + 1:
            raise ValueError("too many coefficients for the degree")
        if degree < 2:
            raise ValueError(f"degree {degree} < 2")
        mF = max(c.degree for c in F if not c.is_zero()) if any(not c.is_zero() for c in F) else 0
        mG = max(c.degree for c in G if not c.is_zero()) if any(not c.is_zero() for c in G) else 0
        n = degree * (mF + mG)
        xs = list(range(n + 1))
        ys = [resultant(BinaryForm(tuple(c(t) for c in F), degree), BinaryForm(tuple(c(t) for c in G), degree)) for t in xs]
        res = _interpolate(xs, ys)
        if res.is_zero():
            raise DegenerateMapError("Res(t) vanishes identically")
        return cls(F, G, degree, res)

    @classmethod
    def from_polys(cls, num, den) -> "ParamFamily":
        """x -> num(x, t)/den(x, t); num[i] is the t-polynomial multiplying x**i."""
        num = [_poly(c) for c in num]
        den = [_poly(c) for c in den]
        while len(num) > 1 and num[-1].is_zero():
            num.pop()
        while len(den) > 1 and den[-1].is_zero():
            den.pop()
        d = max(len(num), len(den)) - 1
        return cls.from_forms(num, den, d)

    @classmethod
    def constant(cls, f: RationalMap) -> "ParamFamily":
        return cls.from_forms(f.F.coeffs, f.G.coeffs, f.degree)

    @property
    def t_degree(self) -> int:
        return max(c.degree for c in self.F + self.G if not c.is_zero())

    def is_degenerate_at(self, t0) -> bool:
        return self.res.eval_fraction(Fraction(t0)) == 0

    def forms_at(self, t0) -> tuple[BinaryForm, BinaryForm]:
        t0 = Fraction(t0)
        u, w, m = t0.numerator, t0.denominator, self.t_degree
        return (
            BinaryForm(tuple(_hom_eval(c, u, w, m) for c in self.F), self.degree),
            BinaryForm(tuple(_hom_eval(c, u, w, m) for c in self.G), self.degree),
        )

    def to_json(self) -> dict:
        return {"F": [list(c.coeffs) for c in self.F], "G": [list(c.coeffs) for c in self.G], "degree": self.degree}

    @classmethod
    def from_json(cls, data: dict) -> "ParamFamily":
        if "num" in data:
            return cls.from_polys(data["num"], data.get("den", [[1]]))
        return cls.from_forms(data["F"], data["G"], int(data["degree"]))


@dataclass(frozen=True)
class Section:
    """t -> (a(t) : b(t)) with coprime integer polynomials."""

    a: IntPoly
    b: IntPoly

    def __post_init__(self):
        a, b = _poly(self.a), _poly(self.b)
        if a.is_zero() and b.is_zero():
            raise ValueError("section is identically zero")
        g = a.gcd(b) if not (a.is_zero() or b.is_zero()) else (b if a.is_zero() else a)
        if g.degree > 0:
            raise ValueError("section coordinates share a factor")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def constant(cls, x) -> "Section":
        p = x if isinstance(x, ProjPoint) else ProjPoint.from_fraction(Fraction(x))
        return cls(IntPoly((p.a,)), IntPoly((p.b,)))

    def at(self, t0) -> ProjPoint:
        t0 = Fraction(t0)
        u, w = t0.numerator, t0.denominator
        m = max(self.a.degree, self.b.degree)
        return ProjPoint(_hom_eval(self.a, u, w, m), _hom_eval(self.b, u, w, m))

    def image(self, fam: ParamFamily) -> "Section":
        """The section t -> f_t(s(t)), with common factors removed."""
        A = BinaryForm(fam.F, fam.degree)(self.a, self.b)
        B = BinaryForm(fam.G, fam.degree)(self.a, self.b)
        if A.is_zero() or B.is_zero():
            return Section(IntPoly((0 if A.is_zero() else 1,)), IntPoly((0 if B.is_zero() else 1,)))
        g = A.gcd(B)
        return Section(A.exact_quo(g), B.exact_quo(g))

    @classmethod
    def from_json(cls, data) -> "Section":
        if isinstance(data, (int, str)):
            return cls.constant(Fraction(str(data)) if str(data) not in ("inf", "infinity") else ProjPoint.infinity())
        return cls(_poly(data.get("num", data.get("a"))), _poly(data.get("den", data.get("b", [1]))))


def specialize(fam: ParamFamily, t0) -> RationalMap:
    t0 = Fraction(t0)
    if fam.is_degenerate_at(t0):
        raise DegenerateFiberError(f"Res(t) vanishes at t = {t0}")
    return map_from_forms(*fam.forms_at(t0))


@dataclass(frozen=True)
class ProfileRow:
    t: Fraction
    naive_t: object | None
    height: HeightResult | None
    flagged: bool
    certified: str | None = None
    error: str | None = None

    def to_json(self) -> dict:
        from .serialize import real_str

        if self.error:
            return {"t": str(self.t), "error": self.error}
        return {
            "t": str(self.t),
            "h": real_str(self.naive_t),
            "hhat": real_str(self.height.value),
            "err": real_str(self.height.error_bound),
            "flag": self.flagged,
            "certified": self.certified,
        }


def specialization_profile(fam: ParamFamily, sec: Section, t_list, tol=1e-10, certify: bool = False, prec: int = DEFAULT_PREC):
    """Rows (t, h(t), canonical height of s(t) on the fiber); degenerate rows are reported."""
    rows = []
    for t in t_list:
        t = Fraction(t)
        try:
            f = specialize(fam, t)
        except DegenerateFiberError as exc:
            rows.append(ProfileRow(t, None, None, False, error=str(exc)))
            continue
        x = sec.at(t)
        r = canonical_height(f, x, tol, prec=prec)
        cert = preperiodic_test(f, x, prec=prec).status if certify else None
        rows.append(ProfileRow(t, naive_height(ProjPoint.from_fraction(t), prec), r, bool(r.value <= tol), cert))
    return rows


@dataclass(frozen=True)
class ScanReport:
    epsilon: object | None
    c: object
    violating_t: tuple
    rows: tuple

    def to_json(self) -> dict:
        from .serialize import real_str

        return {
            "epsilon": None if self.epsilon is None else real_str(self.epsilon),
            "c": real_str(self.c),
            "violating_t": [str(t) for t in self.violating_t],
            "rows": [r.to_json() for r in self.rows],
        }


def height_inequality_scan(fam: ParamFamily, sec: Section, t_range, tol=1e-10, target=None, prec: int = DEFAULT_PREC) -> ScanReport:
    """Empirical constants with h_hat(s(t)) >= eps * h(t) - c on the sample.

    eps is the least h_hat / max(h(t), 1) over unflagged rows (None if all
    rows are flagged) and c the least nonnegative constant making the
    inequality hold at every row, using the certified lower bound
    h_hat - error.  ``target = (eps, c)`` lists the rows violating that
    particular inequality.
    """
    ctx = context(prec)
    rows = tuple(r for r in specialization_profile(fam, sec, t_range, tol, prec=prec) if r.error is None)
    live = [r for r in rows if not r.flagged]
    eps = min(((r.height.value - r.height.error_bound) / max(r.naive_t, ctx.mpf(1)) for r in live), default=None)
    if eps is not None:
        eps = max(eps, ctx.mpf(0))
    c = ctx.mpf(0)
    if eps is not None:
        for r in rows:
            c = max(c, eps * r.naive_t - (r.height.value - r.height.error_bound))
    violating = ()
    if target is not None:
        te, tc = (ctx.mpf(Fraction(v).numerator) / Fraction(v).denominator for v in target)
        violating = tuple(r.t for r in rows if r.height.value + r.height.error_bound < te * r.naive_t - tc)
    return ScanReport(eps, c, violating, rows)
