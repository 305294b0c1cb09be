"""Local Green functions of the invariant metric at each place of Q.

For a primitive lift Phi = (F, G) and primitive coordinates x,

    g_v(x) = lim d**-n log ||Phi^n(x)||_v,

computed by the telescoping sum over the normalized orbit.  Individual
values depend on the chosen lift; only their sum over all places (the
canonical height) is intrinsic.  At a prime p not dividing Res(F, G) the
value at primitive coordinates is exactly 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .dynmap import ProjPoint, RationalMap
from .exactnum import BinaryForm, IntPoly, is_probable_prime, valuation
from .exactnum.precision import DEFAULT_PREC, context

ORBIT_CHECK_LIMIT = 20000


@dataclass(frozen=True)
class Place:
    """The archimedean place (p is None) or the p-adic place."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not is_probable_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def infinity(cls) -> "Place":
        return cls(None)

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls(int(p))

    @classmethod
    def parse(cls, text: str) -> "Place":
        t = str(text).strip().lower()
        return cls.infinity() if t in ("inf", "infinity", "oo", "∞") else cls.finite(int(t))

    @property
    def is_archimedean(self) -> bool:
        return self.p is None

    def __str__(self) -> str:
        return "inf" if self.p is None else str(self.p)


@dataclass(frozen=True)
class LocalGreenValue:
    place: Place
    value: object  # mpf
    error_bound: object  # mpf
    iterations_used: int
    # value == log_coefficient * log p exactly, when known
    log_coefficient: Fraction | None = None

    def to_json(self) -> dict:
        from .serialize import real_str

        out = {
            "place": str(self.place),
            "value": real_str(self.value),
            "error": real_str(self.error_bound),
            "iters": self.iterations_used,
        }
        if self.log_coefficient is not None:
            out["log_coefficient"] = str(self.log_coefficient)
        return out


@dataclass(frozen=True)
class DistortionBounds:
    """c_lower ||x||^d <= ||Phi(x)|| <= c_upper ||x||^d at one place; both exact rationals."""

    place: Place
    c_lower: Fraction
    c_upper: Fraction
    prec: int = DEFAULT_PREC

    @property
    def log_spread(self):
        """max(|log c_lower|, |log c_upper|), rounded up slightly."""
        ctx = context(self.prec)
        lo = ctx.log(ctx.mpf(self.c_lower.numerator) / self.c_lower.denominator)
        hi = ctx.log(ctx.mpf(self.c_upper.numerator) / self.c_upper.denominator)
        s = max(abs(lo), abs(hi))
        return s * (1 + ctx.mpf(2) ** (8 - self.prec))


def _abs_sum(form: BinaryForm) -> int:
    return sum(abs(c) for c in form.coeffs)


def _form_content_valuation(forms, p: int) -> int:
    vals = [valuation(c, p) for q in forms for c in q.coeffs if c]
    return min(vals) if vals else 0


def strip_bound(f: RationalMap, p: int) -> int:
    """Largest possible p-adic content of Phi(x) for primitive x.

    From Res X^(2d-1) = A1 F + B1 G and Res Y^(2d-1) = A2 F + B2 G with
    integral cofactors, the content valuation is at most
    v_p(Res) - min_i v_p(content(A_i, B_i)).
    """
    if f.res % p:
        return 0
    A1, B1, A2, B2 = f.cofactors
    t = min(_form_content_valuation((A1, B1), p), _form_content_valuation((A2, B2), p))
    return valuation(f.res, p) - t


def distortion_bounds(f: RationalMap, v: Place, prec: int = DEFAULT_PREC) -> DistortionBounds:
    if v.is_archimedean:
        upper = Fraction(max(_abs_sum(f.F), _abs_sum(f.G)))
        A1, B1, A2, B2 = f.cofactors
        denom = max(_abs_sum(A1) + _abs_sum(B1), _abs_sum(A2) + _abs_sum(B2))
        return DistortionBounds(v, Fraction(abs(f.res), denom), upper, prec)
    e = strip_bound(f, v.p)
    return DistortionBounds(v, Fraction(1, v.p**e), Fraction(1), prec)


def iterations_for(spread, d: int, tol) -> int:
    """Least n with spread / (d**n (d - 1)) <= tol."""
    if spread == 0:
        return 0
    n = 0
    while spread / (d**n * (d - 1)) > tol:
        n += 1
    return n


# ---------------------------------------------------------------------------
# archimedean place

def archimedean_green(f: RationalMap, a, b, tol, prec: int = DEFAULT_PREC, iterations: int | None = None):
    """g_inf at complex coordinates (a, b); returns (value, error, n).

    The truncation error spread / (d**n (d-1)) is rigorous.  Roundoff is
    charged at a few units of 2**-prec per step; it relies on the normalized
    pseudo-orbit staying within roundoff of the true one in the sense that
    matters for the Green function, and is negligible at default precision.
    """
    ctx = context(prec + 32)
    d = f.degree
    spread = distortion_bounds(f, Place.infinity(), prec + 32).log_spread
    n = iterations_for(spread, d, ctx.mpf(tol) / 2) if iterations is None else iterations
    a, b = ctx.mpmathify(a), ctx.mpmathify(b)
    nrm = max(abs(a), abs(b))
    value = ctx.log(nrm)
    x, y = a / nrm, b / nrm
    Fc = [ctx.mpf(c) for c in f.F.coeffs]
    Gc = [ctx.mpf(c) for c in f.G.coeffs]
    Fm, Gm = BinaryForm(tuple(Fc), d), BinaryForm(tuple(Gc), d)
    scale = ctx.mpf(1)
    for _ in range(n):
        X, Y = Fm(x, y), Gm(x, y)
        nrm = max(abs(X), abs(Y))
        scale /= d
        value += scale * ctx.log(nrm)
        x, y = X / nrm, Y / nrm
    tail = spread * scale / (d - 1)
    if spread == 0:
        # ||Phi(x)|| = ||x||**d exactly, so g = log||x|| up to one correct rounding
        out = context(prec)
        return out.log(max(abs(out.mpmathify(a)), abs(out.mpmathify(b)))), out.mpf(0), 0
    rounding = ctx.ldexp(ctx.mpf(8 * (n + 2) * (d + 1)), -prec) * (1 + abs(value))
    out = context(prec)
    return out.mpf(value), out.mpf(tail + rounding), n


# ---------------------------------------------------------------------------
# p-adic place

def _reduce_point(a: int, b: int, p: int) -> tuple[int, int]:
    a, b = a % p, b % p
    if b:
        return (a * pow(b, -1, p) % p, 1)
    return (1, 0)


def safe_residue_orbit(f: RationalMap, a: int, b: int, p: int, memo: dict | None = None) -> bool | None:
    """Whether the reduced orbit of (a:b) in P^1(F_p) avoids the common zeros of F, G mod p.

    True certifies that Phi never strips a factor of p along the p-adic orbit.
    None is returned when the orbit is too long to follow.
    """
    memo = {} if memo is None else memo
    seen = []
    pt = _reduce_point(a, b, p)
    verdict = None
    for _ in range(min(p + 2, ORBIT_CHECK_LIMIT)):
        if pt in memo:
            verdict = memo[pt]
            break
        if pt in seen:
            verdict = True
            break
        seen.append(pt)
        A, B = f.F(*pt) % p, f.G(*pt) % p
        if A == 0 and B == 0:
            verdict = False
            break
        pt = _reduce_point(A, B, p)
    if verdict is None:
        return None
    for q in seen:
        memo.setdefault(q, verdict)
    return verdict


def _vp_mod(x: int, p: int, cap: int) -> int:
    """Valuation of the residue x mod p**cap, capped at cap."""
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def _padic_strips(f: RationalMap, a: int, b: int, p: int, e: int, n_max: int, digits: int, memo=None):
    """Strip sum sum_k s_k d^-k along the orbit of primitive residues (a, b) mod p^digits.

    Returns (Fraction, exact, steps); exact means the orbit provably strips nothing further.
    """
    d = f.degree
    memo = {} if memo is None else memo
    a, b = a % p**digits, b % p**digits
    total = Fraction(0)
    for k in range(1, n_max + 1):
        if safe_residue_orbit(f, a, b, p, memo):
            return total, True, k - 1
        mod = p**digits
        A, B = f.F(a, b) % mod, f.G(a, b) % mod
        s = min(_vp_mod(A, p, digits), _vp_mod(B, p, digits))
        if s > e:
            raise ArithmeticError("content exceeds the resultant bound")
        total += Fraction(s, d**k)
        digits -= s
        a, b = (A // p**s) % p**digits, (B // p**s) % p**digits
    return total, bool(safe_residue_orbit(f, a, b, p, memo)), n_max


def _strip_value(total: Fraction, exact: bool, e: int, d: int, n_max: int):
    """(value coefficient q with g = -q log p, error coefficient)."""
    if exact:
        return total, Fraction(0)
    tail = Fraction(e, d**n_max * (d - 1))
    return total + tail / 2, tail / 2


def padic_green(f: RationalMap, x: ProjPoint, p: int, tol, prec: int = DEFAULT_PREC) -> LocalGreenValue:
    """g_p at primitive coordinates of x, by exact arithmetic modulo a power of p."""
    ctx = context(prec)
    place = Place.finite(p)
    d = f.degree
    e = strip_bound(f, p)
    if e == 0:
        return LocalGreenValue(place, ctx.mpf(0), ctx.mpf(0), 0, Fraction(0))
    logp = ctx.log(p)
    n_max = iterations_for(e * logp, d, ctx.mpf(tol))
    total, exact, steps = _padic_strips(f, x.a, x.b, p, e, n_max, e * (n_max + 2) + 2)
    q, err = _strip_value(total, exact, e, d, n_max)
    return LocalGreenValue(place, -q * logp, ctx.mpf(err.numerator) / err.denominator * logp, steps, -q if exact else None)


def local_green(f: RationalMap, x: ProjPoint, v: Place, tol, prec: int = DEFAULT_PREC) -> LocalGreenValue:
    """Local Green function of f at the primitive coordinates of x."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if v.is_archimedean:
        value, err, n = archimedean_green(f, x.a, x.b, tol, prec)
        return LocalGreenValue(v, value, err, n)
    return padic_green(f, x, v.p, tol, prec)


def places_of(f: RationalMap) -> list[Place]:
    """The archimedean place followed by the bad primes."""
    return [Place.infinity()] + [Place.finite(p) for p in f.bad_primes]


# ---------------------------------------------------------------------------
# algebraic points at a bad prime

def _pmod(c, p):
    c = [x % p for x in c]
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(out, p)


def _prem(a, m, p):
    a = _pmod(a, p)
    inv = pow(m[-1], -1, p)
    while len(a) >= len(m):
        c = a[-1] * inv % p
        shift = len(a) - len(m)
        for i, y in enumerate(m):
            a[shift + i] = (a[shift + i] - c * y) % p
        a = _pmod(a, p)
    return a


def _pgcd(a, b, p):
    a, b = _pmod(a, p), _pmod(b, p)
    while b:
        a, b = b, _prem(a, b, p)
    return a


def _padd(a, b, p):
    n = max(len(a), len(b))
    return _pmod([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)], p)


def _form_eval_mod(coeffs, d, A, B, m, p):
    """sum c_i A^i B^(d-i) in F_p[x]/(m)."""
    acc = []
    apow = [[1]]
    bpow = [[1]]
    for _ in range(d):
        apow.append(_prem(_pmul(apow[-1], A, p), m, p))
        bpow.append(_prem(_pmul(bpow[-1], B, p), m, p))
    for i, c in enumerate(coeffs):
        if c % p:
            acc = _padd(acc, [c * t for t in _prem(_pmul(apow[i], bpow[d - i], p), m, p)], p)
    return acc


def algebraic_prime_safe(f: RationalMap, minpoly: IntPoly, p: int) -> bool | None:
    """Whether no conjugate of a root of ``minpoly`` ever strips a factor of p.

    Works in F_p[x]/(minpoly mod p): a root's orbit is followed through the
    pair (A_k, B_k) = Phi^k(x, 1) and tested against the common zeros of
    (F, G) mod p.  Orbits of reductions live in P^1(F_{p^m}), m <= degree,
    so p**deg + 1 steps decide the question.  None when that is too many.
    """
    D = minpoly.degree
    m = _pmod(list(minpoly.coeffs), p)
    if len(m) - 1 < D:  # some conjugate reduces to infinity
        at_inf = safe_residue_orbit(f, 1, 0, p)
        if at_inf is not True:
            return at_inf
    if len(m) <= 1:
        return True
    Fx, Gx = _pmod(list(f.F.coeffs), p), _pmod(list(f.G.coeffs), p)
    d = f.degree
    common = _pgcd(Fx, Gx, p)
    inf_common = f.F.coeffs[-1] % p == 0 and f.G.coeffs[-1] % p == 0
    if len(common) <= 1 and not inf_common:
        return True
    steps = p**D + 1
    if steps > ORBIT_CHECK_LIMIT:
        return None
    A, B = _prem([0, 1], m, p), [1]
    zc = common if len(common) > 1 else [1]
    zdeg = len(zc) - 1
    for _ in range(steps):
        # Z(A, B) = B^[inf] * common_hom(A, B)
        val = _form_eval_mod(zc, zdeg, A, B, m, p) if zdeg else [1]
        if inf_common:
            val = _prem(_pmul(val, B, p), m, p)
        if len(_pgcd(list(m), val, p)) > 1 or not val:
            return False
        A, B = _form_eval_mod(f.F.coeffs, d, A, B, m, p), _form_eval_mod(f.G.coeffs, d, A, B, m, p)
    return True


# ---------------------------------------------------------------------------
# algebraic points at a bad prime: unramified case

def _pinv(a, m, p):
    """Inverse of a in F_p[x]/(m) (m irreducible), by the extended Euclidean algorithm."""
    r0, r1 = _pmod(list(m), p), _pmod(list(a), p)
    s0, s1 = [], [1]
    while len(r1) > 1:
        q = []
        r = r0[:]
        inv = pow(r1[-1], -1, p)
        qd = [0] * (len(r) - len(r1) + 1)
        while len(r) >= len(r1) and r:
            c = r[-1] * inv % p
            shift = len(r) - len(r1)
            qd[shift] = c
            for i, y in enumerate(r1):
                r[shift + i] = (r[shift + i] - c * y) % p
            r = _pmod(r, p)
        q = _pmod(qd, p)
        r0, r1 = r1, r
        s0, s1 = s1, _padd(s0, [(-c) % p for c in _pmul(q, s1, p)], p)
    c = pow(r1[0], -1, p)
    return _pmod([c * t for t in s1], p)


def _residue_safe(f: RationalMap, A, B, m, p, limit: int) -> bool:
    """Whether the orbit of (A : B) in P^1(F_p[x]/(m)) avoids the common zeros of F, G."""
    d = f.degree
    seen = set()
    A, B = _prem(A, m, p), _prem(B, m, p)
    for _ in range(limit):
        if B:
            state = (tuple(_prem(_pmul(A, _pinv(B, m, p), p), m, p)), (1,))
        else:
            state = ((1,), ())
        if state in seen:
            return True
        seen.add(state)
        A, B = [list(c) for c in state]
        A2 = _form_eval_mod(f.F.coeffs, d, A, B, m, p)
        B2 = _form_eval_mod(f.G.coeffs, d, A, B, m, p)
        if not A2 and not B2:
            return False
        A, B = A2, B2
    return False


def _vp_list(coeffs, p, cap):
    return min((_vp_mod(c, p, cap) for c in coeffs), default=cap) if coeffs else cap


def _unramified_green(f: RationalMap, Q, p: int, e: int, n_max: int, digits: int):
    """g_w at the root x of the monic p-adic factor Q; returns (Fraction strips, exact?)."""
    d = f.degree
    Qbar = _pmod(Q, p)
    q_size = p ** (len(Qbar) - 1) + 1
    limit = min(q_size + 1, ORBIT_CHECK_LIMIT)
    mod = p**digits
    Qm = _pmod(Q, mod)
    A, B = _prem([0, 1], Qm, mod), [1]
    total = Fraction(0)
    for k in range(1, n_max + 1):
        if q_size <= ORBIT_CHECK_LIMIT and _residue_safe(f, A, B, Qbar, p, limit):
            return total, True
        mod = p**digits
        Qm = _pmod(Q, mod)
        A2 = _form_eval_mod(f.F.coeffs, d, A, B, Qm, mod)
        B2 = _form_eval_mod(f.G.coeffs, d, A, B, Qm, mod)
        s = min(_vp_list(A2, p, digits), _vp_list(B2, p, digits))
        if s > e:
            raise ArithmeticError("content exceeds the resultant bound")
        total += Fraction(s, d**k)
        digits -= s
        mod = p**digits
        A = _pmod([c // p**s for c in A2], mod)
        B = _pmod([c // p**s for c in B2], mod)
    return total, False


def algebraic_bad_prime_correction(f: RationalMap, minpoly: IntPoly, p: int, tol, prec: int = DEFAULT_PREC) -> LocalGreenValue:
    """sum over w | p of (n_w / D) g_w at primitive coordinates of a root of minpoly.

    Exact when the reduction of the minimal polynomial is squarefree (all
    w | p unramified, conjugates with distinct reductions): a unimodular
    change of variable makes the conjugates p-integral, the p-adic factors
    are Hensel lifts of the factors mod p, and each residue ring
    (Z/p^N)[x]/(Q) is the valuation ring of K_w.  Otherwise the value is
    only known to lie in [-e log p / (d - 1), 0] and the midpoint is returned.
    """
    from sympy.polys.domains import ZZ
    from sympy.polys.factortools import dup_zz_hensel_lift
    from sympy.polys.galoistools import gf_factor_sqf

    from .dynmap import Moebius, conjugate

    ctx = context(prec)
    place = Place.finite(p)
    logp = ctx.log(p)
    D = minpoly.degree
    e = strip_bound(f, p)
    if e == 0 or algebraic_prime_safe(f, minpoly, p):
        return LocalGreenValue(place, ctx.mpf(0), ctx.mpf(0), 0, Fraction(0))
    if D == 2:
        from .exactnum.quadratic import quadratic_roots

        return quadratic_bad_prime_correction(f, quadratic_roots(minpoly)[0], p, tol, prec)
    d = f.degree
    half = Fraction(e, 2 * (d - 1))
    fallback = LocalGreenValue(place, -half * logp, half * logp, 0)
    P, g = minpoly, None
    if P.coeffs[-1] % p == 0:
        k = next((k for k in range(p) if P(k) % p), None)
        if k is None:
            return fallback
        # x -> 1/(x - k); the new minimal polynomial has leading coefficient P(k)
        g = Moebius(0, 1, 1, -k)
        X = IntPoly((0, 1))
        P = sum((IntPoly((c,)) * IntPoly((1, k)) ** i * X ** (D - i) for i, c in enumerate(P.coeffs)), IntPoly((0,)))
    fp = conjugate(f, g) if g is not None else f
    Pbar = _pmod(list(P.coeffs), p)
    if len(_pgcd(Pbar, _pmod([i * c for i, c in enumerate(P.coeffs)][1:], p), p)) > 1:
        return fallback
    n_max = iterations_for(e * logp, d, ctx.mpf(tol))
    digits = e * (n_max + 2) + 2
    dup = [ZZ(c) for c in reversed(P.coeffs)]
    _, factors = gf_factor_sqf([ZZ(c % p) for c in reversed(P.coeffs)], p, ZZ)
    if len(factors) == 1:
        inv = pow(P.coeffs[-1], -1, p**digits)
        lifts = [[int(c) * inv % p**digits for c in dup]]
    else:
        lifts = dup_zz_hensel_lift(ZZ(p), dup, factors, digits, ZZ)
    total, total_err, exact_all = Fraction(0), Fraction(0), True
    for Q in lifts:
        Q = [int(c) % p**digits for c in reversed(Q)]
        fw = len(Q) - 1
        strips, exact = _unramified_green(fp, Q, p, e, n_max, digits)
        if exact:
            total += Fraction(fw, D) * strips
        else:
            exact_all = False
            tail = Fraction(e, d**n_max * (d - 1))
            total += Fraction(fw, D) * (strips + tail / 2)
            total_err += Fraction(fw, D) * tail / 2
    err = ctx.mpf(total_err.numerator) / total_err.denominator * logp
    return LocalGreenValue(place, -total * logp, err, n_max, -total if exact_all else None)


# ---------------------------------------------------------------------------
# quadratic points at a bad prime: all splitting types

def _vp_frac(q: Fraction, p: int) -> int:
    if q == 0:
        raise ValueError("valuation of 0")
    return valuation(q.numerator, p) - valuation(q.denominator, p)


def _frac_mod(q: Fraction, p: int, digits: int) -> int:
    """q mod p^digits for p-integral q."""
    mod = p**digits
    return q.numerator * pow(q.denominator, -1, mod) % mod


def _split_type(D: int, p: int) -> str:
    disc = D if D % 4 == 1 else 4 * D
    if disc % p == 0:
        return "ramified"
    if p == 2:
        return "split" if D % 8 == 1 else "inert"
    return "split" if pow(D % p, (p - 1) // 2, p) == 1 else "inert"


def _quad_split(f: RationalMap, alpha, p: int, e: int, n_max: int, digits: int):
    """Two places of degree 1: embed sqrt(D) in Z_p and run the rational algorithm."""
    from sympy.ntheory.residue_ntheory import sqrt_mod

    a0, b0, D = Fraction(alpha.a), Fraction(alpha.b), alpha.D
    j = max(0, -min(_vp_frac(c, p) for c in (a0, b0) if c) if (a0 or b0) else 0)
    work = digits + j + 4
    mod = p**work
    s = sqrt_mod(D % mod, mod)
    roots = []
    for sgn in (1, -1):
        # x = p^j alpha_i is p-integral
        x = (_frac_mod(a0 * p**j, p, work) + _frac_mod(b0 * p**j, p, work) * sgn * s) % mod
        y = p**j % mod
        c = min(_vp_mod(x, p, work), _vp_mod(y, p, work))
        roots.append(((x // p**c) % p ** (work - c), (y // p**c) % p ** (work - c), work - c))
    out = []
    for x, y, dig in roots:
        out.append(_padic_strips(f, x, y, p, e, n_max, min(dig, digits)))
    return out


class _LocalQuadRing:
    """O_K tensor Z/p^M in the basis (1, omega), omega^2 = t omega - n."""

    def __init__(self, D: int, p: int, digits: int):
        self.p, self.digits = p, digits
        if D % 4 == 1:
            self.t, self.n = 1, (1 - D) // 4
        else:
            self.t, self.n = 0, -D
        self.D = D

    def coords(self, q) -> tuple[Fraction, Fraction]:
        """Coordinates of a + b sqrt(D) in the basis (1, omega)."""
        a, b = Fraction(q.a), Fraction(q.b)
        if self.t == 1:  # sqrt(D) = 2 omega - 1
            return a - b, 2 * b
        return a, b

    def mul(self, x, y, mod):
        u1, v1 = x
        u2, v2 = y
        # (u1 + v1 w)(u2 + v2 w) = u1u2 - n v1v2 + (u1v2 + u2v1 + t v1v2) w
        return ((u1 * u2 - self.n * v1 * v2) % mod, (u1 * v2 + u2 * v1 + self.t * v1 * v2) % mod)

    def norm(self, x, mod):
        u, v = x
        return (u * u + self.t * u * v + self.n * v * v) % mod

    def form(self, coeffs, d, A, B, mod):
        apow, bpow = [(1, 0)], [(1, 0)]
        for _ in range(d):
            apow.append(self.mul(apow[-1], A, mod))
            bpow.append(self.mul(bpow[-1], B, mod))
        u = v = 0
        for i, c in enumerate(coeffs):
            if c:
                m = self.mul(apow[i], bpow[d - i], mod)
                u, v = (u + c * m[0]) % mod, (v + c * m[1]) % mod
        return (u, v)


def _quad_nonsplit(f: RationalMap, alpha, p: int, e: int, n_max: int, digits: int, kind: str):
    """One place above p: the valuation is v_p(norm)/2, and contents may be half-integral."""
    d = f.degree
    R = _LocalQuadRing(alpha.D, p, digits)
    u0, v0 = R.coords(alpha)
    j = max([0] + [-_vp_frac(c, p) for c in (u0, v0) if c])
    work = 2 * digits + 2 * j + 8
    mod = p**work
    A = (_frac_mod(u0 * p**j, p, work), _frac_mod(v0 * p**j, p, work))
    B = (p**j % mod, 0)

    def nu2(x, prec_digits):
        # twice the normalized valuation, capped by the known precision
        return _vp_mod(R.norm(x, p ** (2 * prec_digits)), p, 2 * prec_digits) if any(x) else 2 * prec_digits

    def content2(A, B, prec_digits):
        return min(nu2(A, prec_digits), nu2(B, prec_digits))

    def reduce(A, B, prec_digits):
        c2 = content2(A, B, prec_digits)
        k = c2 // 2
        mod = p ** (prec_digits - k)
        return tuple(a // p**k % mod for a in A), tuple(b // p**k % mod for b in B), c2 - 2 * k, prec_digits - k

    A, B, r2, known = reduce(A, B, work)
    if kind == "inert":
        m = _pmod([R.n, -R.t, 1], p)
    else:
        wbar = next(w for w in range(p) if (w * w - R.t * w + R.n) % p == 0)
        m = [(-wbar) % p, 1]
    limit = min(p ** (len(m) - 1) + 2, ORBIT_CHECK_LIMIT)
    total = Fraction(0)
    for k in range(1, n_max + 1):
        if r2 == 0:
            Ared = _pmod([A[0] % p, A[1] % p], p)
            Bred = _pmod([B[0] % p, B[1] % p], p)
            Ared, Bred = _prem(Ared or [], m, p) if Ared else [], _prem(Bred, m, p) if Bred else []
            if (Ared or Bred) and _residue_safe(f, Ared, Bred, m, p, limit):
                return total, True, k - 1
        mod = p**known
        A2, B2 = R.form(f.F.coeffs, d, A, B, mod), R.form(f.G.coeffs, d, A, B, mod)
        c2 = content2(A2, B2, known)
        strip2 = c2 - d * r2
        if strip2 < 0 or strip2 > 2 * e:
            raise ArithmeticError("content outside the resultant bound; precision exhausted")
        total += Fraction(strip2, 2 * d**k)
        A, B, r2, known = reduce(A2, B2, known)
        if known <= 2 * e + 2:
            raise ArithmeticError("p-adic precision exhausted")
    return total, False, n_max


def quadratic_bad_prime_correction(f: RationalMap, alpha, p: int, tol, prec: int = DEFAULT_PREC) -> LocalGreenValue:
    """Exact averaged g_w over w | p at primitive coordinates of a quadratic irrationality."""
    ctx = context(prec)
    place = Place.finite(p)
    logp = ctx.log(p)
    d = f.degree
    e = strip_bound(f, p)
    if e == 0:
        return LocalGreenValue(place, ctx.mpf(0), ctx.mpf(0), 0, Fraction(0))
    n_max = iterations_for(e * logp, d, ctx.mpf(tol))
    digits = e * (n_max + 2) + 4
    kind = _split_type(alpha.D, p)
    if kind == "split":
        results = [(Fraction(1, 2), r) for r in _quad_split(f, alpha, p, e, n_max, digits)]
    else:
        results = [(Fraction(1), _quad_nonsplit(f, alpha, p, e, n_max, digits, kind))]
    q_total, err_total, exact_all, steps = Fraction(0), Fraction(0), True, 0
    for w, (total, exact, k) in results:
        q, err = _strip_value(total, exact, e, d, n_max)
        q_total += w * q
        err_total += w * err
        exact_all = exact_all and exact
        steps = max(steps, k)
    err = ctx.mpf(err_total.numerator) / err_total.denominator * logp
    return LocalGreenValue(place, -q_total * logp, err, steps, -q_total if exact_all else None)
