"""Canonical and naive heights, preperiodicity certificates, small points."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .dynmap import ProjPoint, QuadPoint, RationalMap, apply_quadratic
from .exactnum import ComplexApprox, IntPoly, complex_roots
from .exactnum.precision import DEFAULT_PREC, context
from .exactnum.quadratic import QuadraticNumber, quadratic_roots
from .localheight import (
    LocalGreenValue,
    Place,
    algebraic_bad_prime_correction,
    archimedean_green,
    distortion_bounds,
    local_green,
    places_of,
    strip_bound,
)

METHODS = ("local-sum", "tate-limit", "both")
EXACT_BIT_BUDGET = 1 << 14


@dataclass(frozen=True)
class HeightResult:
    value: object
    error_bound: object
    breakdown: tuple[LocalGreenValue, ...]
    method: str
    companion: "HeightResult | None" = None

    @property
    def method_agreement(self) -> bool | None:
        """Whether the two methods agree within their summed error (method both only)."""
        if self.companion is None:
            return None
        return abs(self.value - self.companion.value) <= self.error_bound + self.companion.error_bound

    def to_json(self) -> dict:
        from .serialize import real_str

        out = {
            "value": real_str(self.value),
            "error": real_str(self.error_bound),
            "method": self.method,
            "breakdown": [b.to_json() for b in self.breakdown],
        }
        if self.companion is not None:
            out["tate_limit"] = {"value": real_str(self.companion.value), "error": real_str(self.companion.error_bound)}
            out["method_agreement"] = self.method_agreement
        return out


@dataclass(frozen=True)
class AlgebraicPoint:
    """An algebraic number given by its minimal polynomial and complex conjugates."""

    minimal_polynomial: IntPoly
    conjugates: tuple[ComplexApprox, ...]

    @property
    def degree(self) -> int:
        return self.minimal_polynomial.degree

    @classmethod
    def from_polynomial(cls, poly, prec: int = DEFAULT_PREC, seed: int = 0) -> "AlgebraicPoint":
        P = poly if isinstance(poly, IntPoly) else IntPoly(tuple(poly))
        if P.degree < 1:
            raise ValueError("constant polynomial")
        P = P.primitive()
        if not P.is_irreducible():
            raise ValueError(f"{list(P.coeffs)} is reducible over Q")
        return cls(P, tuple(complex_roots(P, prec=prec, seed=seed)))

    def exact(self):
        """ProjPoint for degree 1, QuadPoint for degree 2, else None."""
        P = self.minimal_polynomial
        if P.degree == 1:
            return ProjPoint(-P.coeffs[0], P.coeffs[1])
        if P.degree == 2:
            return QuadPoint.from_irreducible(P)
        return None


def _is_rational(x) -> bool:
    return isinstance(x, ProjPoint)


def _as_point(x):
    """Reduce degree-1 algebraic points to ProjPoint."""
    if isinstance(x, AlgebraicPoint) and x.degree == 1:
        return x.exact()
    if isinstance(x, (int, Fraction)):
        return ProjPoint.from_fraction(x)
    return x


def naive_height(x, prec: int = DEFAULT_PREC):
    """Logarithmic Weil height of a rational or algebraic point."""
    ctx = context(prec)
    x = _as_point(x)
    if _is_rational(x):
        return ctx.log(max(abs(x.a), abs(x.b)))
    if isinstance(x, QuadPoint):
        if x.is_infinity:
            return ctx.mpf(0)
        x = AlgebraicPoint.from_polynomial(x.minimal_polynomial(), prec)
    P = x.minimal_polynomial
    total = ctx.log(abs(P.coeffs[-1]))
    for r in x.conjugates:
        total += r.multiplicity * max(ctx.mpf(0), ctx.log(abs(r.value)))
    return total / P.degree


@lru_cache(maxsize=256)
def comparison_constant(f: RationalMap, prec: int = DEFAULT_PREC):
    """C(f) with |h_hat - h| <= C(f) on all of P^1(Qbar)."""
    ctx = context(prec)
    total = ctx.mpf(0)
    for v in places_of(f):
        total += distortion_bounds(f, v, prec).log_spread
    return total / (f.degree - 1)


# ---------------------------------------------------------------------------
# local-sum

def _local_sum_rational(f: RationalMap, x: ProjPoint, tol, prec: int) -> HeightResult:
    ctx = context(prec)
    places = places_of(f)
    share = ctx.mpf(tol) / len(places)
    parts = tuple(local_green(f, x, v, share, prec) for v in places)
    value = ctx.fsum(p.value for p in parts)
    err = ctx.fsum(p.error_bound for p in parts)
    return HeightResult(max(value, ctx.mpf(0)), err, parts, "local-sum")


def _root_displacement(P: IntPoly, r: ComplexApprox, ctx):
    """Heuristic distance from an approximate simple root to the true root."""
    dp = P.derivative()
    der = abs(ctx.polyval([ctx.mpf(c) for c in reversed(dp.coeffs)], r.value))
    return 2 * ctx.mpf(r.residual) / der if der else ctx.inf


def _local_sum_algebraic(f: RationalMap, x: AlgebraicPoint, tol, prec: int) -> HeightResult:
    ctx = context(prec)
    P = x.minimal_polynomial
    D = P.degree
    bad = list(f.bad_primes)
    share = ctx.mpf(tol) / (1 + len(bad))
    arch_val = ctx.log(abs(P.coeffs[-1]))
    arch_err = ctx.mpf(0)
    iters = 0
    for r in x.conjugates:
        val, err, n = archimedean_green(f, r.value, 1, share, prec)
        delta = _root_displacement(P, r, ctx)
        arch_val += val
        arch_err += err + delta * (1 + abs(r.value)) * f.degree
        iters = max(iters, n)
    parts = [LocalGreenValue(Place.infinity(), arch_val / D, arch_err / D, iters)]
    for p in bad:
        parts.append(algebraic_bad_prime_correction(f, P, p, share, prec))
    value = ctx.fsum(p.value for p in parts)
    err = ctx.fsum(p.error_bound for p in parts)
    return HeightResult(max(value, ctx.mpf(0)), err, tuple(parts), "local-sum")


# ---------------------------------------------------------------------------
# Tate limit

def _tate_rational(f: RationalMap, x: ProjPoint, tol, prec: int) -> HeightResult:
    """d**-n h(f^n x) with |h_hat - that| <= C(f)/d**n.

    Exact integer iteration while the coordinates stay small; past the bit
    budget the archimedean norm is carried in floating point and the p-adic
    contents of the unnormalized iterate modulo a power of each bad prime.
    """
    ctx = context(prec + 32)
    d = f.degree
    C = comparison_constant(f, prec + 32)
    n = 0
    while C / ctx.mpf(d) ** n > ctx.mpf(tol) / 2:
        n += 1
    a, b = x.a, x.b
    k = 0
    while k < n and max(abs(a), abs(b)).bit_length() <= EXACT_BIT_BUDGET:
        A, B = f.F(a, b), f.G(a, b)
        g = math.gcd(A, B)
        a, b = A // g, B // g
        k += 1
    h = ctx.log(max(abs(a), abs(b)))
    m = n - k
    rounding = ctx.mpf(0)
    if m:
        # archimedean: log||Phi^m(y)|| = d^m log||y|| + sum_j d^(m-j) log||Phi(y_(j-1))||
        nrm = max(abs(a), abs(b))
        u, w = ctx.mpf(a) / nrm, ctx.mpf(b) / nrm
        acc = ctx.mpf(0)
        for j in range(1, m + 1):
            X, Y = f.F(u, w), f.G(u, w)
            nn = max(abs(X), abs(Y))
            acc += ctx.log(nn) / ctx.mpf(d) ** j
            u, w = X / nn, Y / nn
        log_arch = ctx.mpf(d) ** m * (h + acc)
        # finite: content valuation of Phi^m(y) is sum_j s_j d^(m-j)
        log_content = ctx.mpf(0)
        for p in f.bad_primes:
            s_total = _content_valuation(f, a, b, p, m)
            log_content += s_total * ctx.log(p)
        h = log_arch - log_content
        rounding = ctx.ldexp(ctx.mpf(8 * (m + 2) * (d + 1)), -prec) * (1 + abs(h) / ctx.mpf(d) ** m)
    value = h / ctx.mpf(d) ** n
    err = C / ctx.mpf(d) ** n + rounding / ctx.mpf(d) ** k
    out = context(prec)
    return HeightResult(out.mpf(max(value, 0)), out.mpf(err), (), "tate-limit")


def _content_valuation(f: RationalMap, a: int, b: int, p: int, m: int) -> int:
    """v_p of the content of the unnormalized Phi^m(a, b), for primitive (a, b)."""
    e = strip_bound(f, p)
    if e == 0:
        return 0
    d = f.degree
    digits = e * (m + 1) + 2
    a, b = a % p**digits, b % p**digits
    total = 0
    for j in range(1, m + 1):
        mod = p**digits
        A, B = f.F(a, b) % mod, f.G(a, b) % mod
        s = 0
        while s < e and A % p == 0 and B % p == 0:
            A //= p
            B //= p
            s += 1
        total += s * d ** (m - j)
        digits -= s
        a, b = A % p**digits, B % p**digits
    return total


def _tate_algebraic(f: RationalMap, x: AlgebraicPoint, tol, prec: int) -> HeightResult:
    ctx = context(prec)
    C = comparison_constant(f, prec)
    pt = x.exact()
    if not isinstance(pt, QuadPoint):
        raise ValueError("tate-limit is offered for algebraic points of degree <= 2 only")
    d = f.degree
    k = 0
    while C / ctx.mpf(d) ** k > ctx.mpf(tol) / 2 and _quad_bits(pt) <= EXACT_BIT_BUDGET // 8:
        pt = apply_quadratic(f, pt)
        k += 1
    value = _quad_naive_height(pt, prec) / ctx.mpf(d) ** k
    return HeightResult(max(value, ctx.mpf(0)), C / ctx.mpf(d) ** k + ctx.ldexp(1, 16 - prec), (), "tate-limit")


def _quad_bits(pt: QuadPoint) -> int:
    if pt.is_infinity:
        return 0
    v = pt.value
    return max(abs(c.numerator).bit_length() + c.denominator.bit_length() for c in (v.a, v.b))


def _quad_naive_height(pt: QuadPoint, prec: int):
    """Weil height of a quadratic point, free of cancellation in the small conjugate."""
    ctx = context(prec)
    if pt.is_infinity:
        return ctx.mpf(0)
    v = pt.value
    if v.b == 0:
        return ctx.log(max(abs(v.a.numerator), v.a.denominator))
    P = v.minimal_polynomial()
    total = ctx.log(abs(P.coeffs[-1]))
    N = v.norm()
    nrm = ctx.mpf(abs(N.numerator)) / N.denominator
    if v.D < 0:
        big = small = ctx.sqrt(nrm)
    else:
        big = ctx.mpf(abs(v.a.numerator)) / v.a.denominator + ctx.mpf(abs(v.b.numerator)) / v.b.denominator * ctx.sqrt(v.D)
        small = nrm / big
    for r in (big, small):
        total += max(ctx.mpf(0), ctx.log(r))
    return total / 2


# ---------------------------------------------------------------------------

def canonical_height(f: RationalMap, x, tol=1e-10, method: str = "local-sum", prec: int = DEFAULT_PREC) -> HeightResult:
    """Canonical height of x under f with a certified error bound.

    ``method`` is local-sum, tate-limit, or both (local-sum value with the
    Tate-limit result attached as ``companion``).
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    x = _as_point(x)
    if isinstance(x, QuadPoint):
        x = AlgebraicPoint.from_polynomial(x.minimal_polynomial(), prec) if not x.is_infinity else ProjPoint.infinity()
    rational = _is_rational(x)
    if method == "tate-limit":
        return (_tate_rational if rational else _tate_algebraic)(f, x, tol, prec)
    local = (_local_sum_rational if rational else _local_sum_algebraic)(f, x, tol, prec)
    if method == "both":
        tate = (_tate_rational if rational else _tate_algebraic)(f, x, tol, prec)
        return HeightResult(local.value, local.error_bound, local.breakdown, "local-sum", tate)
    return local


# ---------------------------------------------------------------------------
# preperiodicity

@dataclass(frozen=True)
class PreperiodicResult:
    """status is preperiodic, not-preperiodic, or undetermined."""

    status: str
    tail: tuple = ()
    cycle: tuple = ()
    witness_step: int | None = None
    witness_height: object = None
    bound: object = None
    reason: str = ""

    @property
    def is_preperiodic(self) -> bool | None:
        return {"preperiodic": True, "not-preperiodic": False}.get(self.status)

    def __bool__(self) -> bool:
        return self.status == "preperiodic"

    def to_json(self) -> dict:
        from .serialize import real_str

        out = {"status": self.status}
        if self.status == "preperiodic":
            out["tail"] = [str(p) for p in self.tail]
            out["cycle"] = [str(p) for p in self.cycle]
        elif self.status == "not-preperiodic":
            out["witness_step"] = self.witness_step
            out["witness_height"] = real_str(self.witness_height)
            out["bound"] = real_str(self.bound)
        else:
            out["reason"] = self.reason
        return out


def _quad_key(pt: QuadPoint):
    return None if pt.is_infinity else (pt.value.a, pt.value.b)


def _quad_str(pt: QuadPoint) -> str:
    if pt.is_infinity:
        return "inf"
    v = pt.value
    return str(v.a) if v.b == 0 else f"{v.a}+{v.b}*sqrt({v.D})"


def preperiodic_test(f: RationalMap, x, budget: int = 64, prec: int = DEFAULT_PREC) -> PreperiodicResult:
    """Decide preperiodicity by exact orbit closure or a height witness.

    A preperiodic point has h(f^k x) <= C(f) for every k, so one iterate of
    larger naive height certifies that x is not preperiodic.
    """
    x = _as_point(x)
    if isinstance(x, AlgebraicPoint):
        pt = x.exact()
        if pt is None:
            return PreperiodicResult("undetermined", reason="exact arithmetic unavailable above degree 2")
        x = pt
    ctx = context(prec)
    C = comparison_constant(f, prec)
    margin = ctx.ldexp(1, 32 - prec)
    if isinstance(x, QuadPoint):
        step, key, height, label = (lambda p: apply_quadratic(f, p)), _quad_key, (lambda p: _quad_naive_height(p, prec)), _quad_str
    else:
        step, key, height, label = f, (lambda p: (p.a, p.b)), (lambda p: naive_height(p, prec)), str
    seen: dict = {}
    orbit = []
    pt = x
    for k in range(budget + 1):
        kk = key(pt)
        if kk in seen:
            j = seen[kk]
            return PreperiodicResult("preperiodic", tuple(label(p) for p in orbit[:j]), tuple(label(p) for p in orbit[j:]))
        h = height(pt)
        if h > C + margin:
            return PreperiodicResult("not-preperiodic", witness_step=k, witness_height=h, bound=C)
        seen[kk] = k
        orbit.append(pt)
        pt = step(pt)
    return PreperiodicResult("undetermined", reason=f"no certificate within {budget} steps")


# ---------------------------------------------------------------------------
# small points

@dataclass(frozen=True)
class SmallPoints:
    points: tuple[ProjPoint, ...]
    heights: tuple[HeightResult, ...]
    essential_minimum: object
    search_height: int

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        from .serialize import real_str

        return {
            "points": [{"point": str(p), "height": real_str(h.value), "error": real_str(h.error_bound)} for p, h in zip(self.points, self.heights)],
            "essential_minimum": real_str(self.essential_minimum),
            "search_height": self.search_height,
        }


def rational_points_up_to(H: int):
    """All points of P^1(Q) with naive height max(|a|, |b|) <= H.

    Sorted by naive height, then numerator, then denominator.
    """
    pts = [ProjPoint.infinity(), ProjPoint(0, 1)]
    for b in range(1, H + 1):
        for a in range(1, H + 1):
            if math.gcd(a, b) == 1 and not (a == 0):
                pts.append(ProjPoint(a, b))
                pts.append(ProjPoint(-a, b))
    pts = list(dict.fromkeys(pts))
    pts.sort(key=lambda p: (max(abs(p.a), abs(p.b)), p.a, p.b))
    return pts


def small_points_enumerate(f: RationalMap, bound, tol=1e-10, prec: int = DEFAULT_PREC) -> SmallPoints:
    """Rational points with canonical height at most bound (up to tol)."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    ctx = context(prec)
    C = comparison_constant(f, prec)
    H = int(ctx.floor(ctx.exp(ctx.mpf(bound) + C + ctx.mpf(tol))))
    keep, heights = [], []
    limit = ctx.mpf(bound) + ctx.mpf(tol) * 3 / 2
    for x in rational_points_up_to(max(H, 1)):
        r = canonical_height(f, x, ctx.mpf(tol) / 2, prec=prec)
        if r.value <= limit:
            keep.append(x)
            heights.append(r)
    ess = None
    for x, r in zip(keep, heights):
        if preperiodic_test(f, x, prec=prec).status == "not-preperiodic":
            ess = r.value if ess is None else min(ess, r.value)
    return SmallPoints(tuple(keep), tuple(heights), ctx.mpf(0) if ess is None else ess, H)
