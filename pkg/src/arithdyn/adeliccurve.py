"""Adelic divisors on open subschemes of Spec Z and their Picard classes.

All quantities are exact.  Real numbers live in ``LogReal``: a rational
constant plus a finite rational combination of logarithms of primes.  Since
1, log 2, log 3, log 5, ... are linearly independent over Q (Baker), a
LogReal is zero exactly when every coefficient is zero; its sign is then
settled by evaluating at increasing precision.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import NumericError, factor_integer, is_probable_prime
from .exactnum.precision import context

SIGN_PREC_CAP = 1 << 16


def to_fraction(x) -> Fraction:
    """Exact rational from int, Fraction, decimal string, or float (read as its repr)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("boolean is not a coefficient")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite coefficient {x}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as a rational")


class LogReal:
    """c + sum_p q_p log p with rational c, q_p over primes p."""

    __slots__ = ("const", "logs")

    def __init__(self, const=0, logs=None):
        self.const = to_fraction(const)
        acc: dict[int, Fraction] = {}
        for p, q in (logs or {}).items():
            q = to_fraction(q)
            p = int(p)
            if p < 1:
                raise ValueError("log of a non-positive number")
            for r, e in factor_integer(p).items() if p > 1 else ():
                acc[r] = acc.get(r, Fraction(0)) + e * q
        self.logs = tuple(sorted((p, q) for p, q in acc.items() if q))

    @classmethod
    def log(cls, n, coeff=1) -> "LogReal":
        """coeff * log(n) for a positive rational n."""
        n = to_fraction(n)
        if n <= 0:
            raise ValueError("log of a non-positive number")
        out = cls(0, {n.numerator: coeff}) if n.numerator > 1 else cls()
        if n.denominator > 1:
            out = out - cls(0, {n.denominator: coeff})
        return out

    @classmethod
    def coerce(cls, x) -> "LogReal":
        if isinstance(x, LogReal):
            return x
        if isinstance(x, str):
            return cls.parse(x)
        return cls(x)

    @classmethod
    def parse(cls, text: str) -> "LogReal":
        """Parse sums like ``1/2 - 3*log(2) + log(6)/4``."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty expression")
        term = re.compile(r"([+-]?)(?:(\d+(?:/\d+)?(?:\.\d*)?(?:[eE][+-]?\d+)?)\*?)?(?:log\((\d+(?:/\d+)?)\))?(?:/(\d+))?")
        out = cls()
        pos = 0
        while pos < len(s):
            m = term.match(s, pos)
            if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
                raise ValueError(f"cannot parse {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            q = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            if m.group(4):
                q /= int(m.group(4))
            q *= sign
            out = out + (cls.log(Fraction(m.group(3)), q) if m.group(3) else cls(q))
            pos = m.end()
        return out

    # arithmetic
    def __add__(self, other):
        o = LogReal.coerce(other)
        d = dict(self.logs)
        for p, q in o.logs:
            d[p] = d.get(p, Fraction(0)) + q
        return LogReal(self.const + o.const, d)

    __radd__ = __add__

    def __neg__(self):
        return LogReal(-self.const, {p: -q for p, q in self.logs})

    def __sub__(self, other):
        return self + (-LogReal.coerce(other))

    def __rsub__(self, other):
        return LogReal.coerce(other) - self

    def __mul__(self, k):
        if isinstance(k, LogReal):
            if k.logs and self.logs:
                raise TypeError("product of two transcendental LogReals is not a LogReal")
            if k.logs:
                return k * self.const
            k = k.const
        k = to_fraction(k)
        return LogReal(self.const * k, {p: q * k for p, q in self.logs})

    __rmul__ = __mul__

    def __truediv__(self, k):
        k = to_fraction(k.const if isinstance(k, LogReal) and not k.logs else k)
        return self * (1 / k)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # exact structure
    def is_zero(self) -> bool:
        return self.const == 0 and not self.logs

    def is_rational(self) -> bool:
        return not self.logs

    def coefficients(self) -> dict:
        """{1: const, p: q_p}."""
        out = {1: self.const}
        out.update(dict(self.logs))
        return out

    def to_mpf(self, prec: int = 256):
        ctx = context(prec)
        return ctx.mpf(self.const.numerator) / self.const.denominator + ctx.fsum(
            ctx.mpf(q.numerator) / q.denominator * ctx.log(p) for p, q in self.logs
        )

    def sign(self) -> int:
        if self.is_zero():
            return 0
        if not self.logs:
            return (self.const > 0) - (self.const < 0)
        prec = 64
        scale = abs(self.const) + sum(abs(q) for _, q in self.logs) * max(p for p, _ in self.logs).bit_length()
        while prec <= SIGN_PREC_CAP:
            ctx = context(prec)
            v = self.to_mpf(prec)
            bound = ctx.ldexp(ctx.mpf(scale.numerator) / scale.denominator + 1, 8 - prec) * (len(self.logs) + 2)
            if abs(v) > bound:
                return 1 if v > 0 else -1
            prec *= 2
        raise NumericError("sign undetermined at the precision cap")

    def __float__(self):
        return float(self.to_mpf(64))

    # comparisons
    def _cmp(self, other) -> int:
        if isinstance(other, float) and math.isinf(other):
            return -1 if other > 0 else 1
        return (self - LogReal.coerce(other)).sign()

    def __eq__(self, other):
        if isinstance(other, float) and math.isinf(other):
            return False
        try:
            o = LogReal.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.const == o.const and self.logs == o.logs

    def __hash__(self):
        return hash((self.const, self.logs))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __str__(self):
        parts = []
        if self.const or not self.logs:
            parts.append(str(self.const))
        for p, q in self.logs:
            parts.append(f"{q}*log({p})")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"LogReal({self})"


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OpenModel:
    """U = Spec Z minus finitely many boundary primes."""

    boundary_primes: frozenset = frozenset()

    def __post_init__(self):
        bp = frozenset(int(p) for p in self.boundary_primes)
        for p in bp:
            if not is_probable_prime(p):
                raise ValueError(f"{p} is not prime")
        object.__setattr__(self, "boundary_primes", bp)

    def __str__(self):
        return "Spec Z" if not self.boundary_primes else "Spec Z[1/" + ",".join(map(str, sorted(self.boundary_primes))) + "]"


def _clean(d: dict, conv) -> tuple:
    out = {}
    for p, v in d.items():
        p = int(p)
        v = conv(v)
        if v:
            out[p] = v
    return tuple(sorted(out.items()))


def _int_coeff(v) -> int:
    q = to_fraction(v)
    if q.denominator != 1:
        raise ValueError(f"interior coefficient {q} is not an integer")
    return int(q)


@dataclass(frozen=True, init=False)
class ArithDivisor:
    """Integral interior part, rational boundary part, and an archimedean constant."""

    model: OpenModel
    interior: tuple  # ((p, int), ...)
    boundary: tuple  # ((p, Fraction), ...)
    arch: LogReal

    def __init__(self, model: OpenModel, interior=None, boundary=None, arch=0):
        interior = _clean(dict(interior or {}), _int_coeff)
        boundary = _clean(dict(boundary or {}), to_fraction)
        for p, _ in interior:
            if p in model.boundary_primes:
                raise ValueError(f"{p} is a boundary prime, not an interior one")
            if not is_probable_prime(p):
                raise ValueError(f"{p} is not prime")
        for p, _ in boundary:
            if p not in model.boundary_primes:
                raise ValueError(f"{p} is not a boundary prime of {model}")
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "interior", interior)
        object.__setattr__(self, "boundary", boundary)
        object.__setattr__(self, "arch", LogReal.coerce(arch))

    @classmethod
    def zero(cls, model: OpenModel) -> "ArithDivisor":
        return cls(model)

    def coefficient(self, p: int) -> Fraction:
        return Fraction(dict(self.interior).get(p, 0)) + dict(self.boundary).get(p, Fraction(0))

    def interior_dict(self) -> dict:
        return dict(self.interior)

    def boundary_dict(self) -> dict:
        return dict(self.boundary)

    def _check(self, other: "ArithDivisor"):
        if not isinstance(other, ArithDivisor):
            raise TypeError("expected an ArithDivisor")
        if other.model != self.model:
            raise ValueError("divisors live on different open models")

    def __add__(self, other: "ArithDivisor") -> "ArithDivisor":
        self._check(other)
        i = self.interior_dict()
        for p, v in other.interior:
            i[p] = i.get(p, 0) + v
        b = self.boundary_dict()
        for p, v in other.boundary:
            b[p] = b.get(p, Fraction(0)) + v
        return ArithDivisor(self.model, i, b, self.arch + other.arch)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        k = to_fraction(k)
        return ArithDivisor(
            self.model,
            {p: v * k for p, v in self.interior},
            {p: v * k for p, v in self.boundary},
            self.arch * k,
        )

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.interior and not self.boundary and self.arch.is_zero()

    def to_json(self) -> dict:
        return {
            "boundary_primes": sorted(self.model.boundary_primes),
            "interior": {str(p): v for p, v in self.interior},
            "boundary": {str(p): str(v) for p, v in self.boundary},
            "arch": str(self.arch),
        }

    @classmethod
    def from_json(cls, data: dict, model: OpenModel | None = None) -> "ArithDivisor":
        if model is None:
            model = OpenModel(frozenset(data.get("boundary_primes", [int(p) for p in data.get("boundary", {})])))
        return cls(model, data.get("interior", {}), data.get("boundary", {}), data.get("arch", 0))


@dataclass(frozen=True, init=False)
class BoundaryDivisor:
    """Strictly effective divisor supported on the boundary primes and infinity."""

    divisor: ArithDivisor

    def __init__(self, model: OpenModel, boundary=None, arch=1):
        boundary = dict(boundary or {})
        D = ArithDivisor(model, {}, boundary, arch)
        for p in model.boundary_primes:
            if D.coefficient(p) <= 0:
                raise ValueError(f"boundary coefficient at {p} must be positive")
        if not D.arch.is_rational() or D.arch.const <= 0:
            raise ValueError("archimedean coefficient must be a positive rational")
        object.__setattr__(self, "divisor", D)

    @property
    def model(self) -> OpenModel:
        return self.divisor.model

    def weight(self, v) -> Fraction:
        """Coefficient at a boundary prime, or at infinity for v=None."""
        return self.divisor.arch.const if v is None else self.divisor.coefficient(v)

    @classmethod
    def standard(cls, model: OpenModel) -> "BoundaryDivisor":
        return cls(model, {p: 1 for p in model.boundary_primes}, 1)

    @classmethod
    def from_json(cls, data: dict, model: OpenModel | None = None) -> "BoundaryDivisor":
        if model is None:
            model = OpenModel(frozenset(int(p) for p in data.get("boundary", {})))
        return cls(model, data.get("boundary", {}), data.get("arch", 1))


def is_effective(E: ArithDivisor) -> bool:
    return all(v >= 0 for _, v in E.interior) and all(v >= 0 for _, v in E.boundary) and E.arch.sign() >= 0


INFINITY = math.inf


def boundary_norm(E: ArithDivisor, D0: BoundaryDivisor):
    """inf{eps : -eps D0 <= E <= eps D0}: a LogReal, or math.inf."""
    if E.model != D0.model:
        raise ValueError("divisor and boundary divisor live on different models")
    if E.interior:
        return INFINITY
    best = abs(E.arch) / D0.weight(None)
    for p, v in E.boundary:
        r = LogReal(abs(v) / D0.weight(p))
        if r > best:
            best = r
    return best


def norm_equivalence_constant(D0: BoundaryDivisor, D1: BoundaryDivisor) -> Fraction:
    """Least r >= 1 with ||.||_D0 / r <= ||.||_D1 <= r ||.||_D0."""
    if D0.model != D1.model:
        raise ValueError("boundary divisors on different models")
    r = Fraction(1)
    for v in [None, *D0.model.boundary_primes]:
        a, b = D0.weight(v), D1.weight(v)
        r = max(r, a / b, b / a)
    return r


def arithmetic_degree(E: ArithDivisor) -> LogReal:
    """sum_p e_p log p + arch/2."""
    logs = {p: Fraction(v) for p, v in E.interior}
    for p, v in E.boundary:
        logs[p] = logs.get(p, Fraction(0)) + v
    return LogReal(0, logs) + E.arch / 2


def principal_divisor(f, model: OpenModel) -> ArithDivisor:
    """(div f, -2 log|f|) for a nonzero rational f."""
    q = to_fraction(f)
    if q == 0:
        raise ValueError("principal divisor of 0")
    vals: dict = {}
    for n, s in ((abs(q.numerator), 1), (q.denominator, -1)):
        if n > 1:
            for p, e in factor_integer(n).items():
                vals[p] = vals.get(p, 0) + s * e
    interior = {p: e for p, e in vals.items() if p not in model.boundary_primes}
    boundary = {p: e for p, e in vals.items() if p in model.boundary_primes}
    return ArithDivisor(model, interior, boundary, LogReal.log(abs(q), -2))


@dataclass(frozen=True)
class PicClass:
    """Canonical representative: boundary coefficients in [0, 1), no interior part."""

    model: OpenModel
    boundary: tuple
    arch: LogReal

    def divisor(self) -> ArithDivisor:
        return ArithDivisor(self.model, {}, dict(self.boundary), self.arch)

    def to_json(self) -> dict:
        return {"boundary": {str(p): str(v) for p, v in self.boundary}, "arch": str(self.arch)}


def pic_reduce(E: ArithDivisor) -> PicClass:
    arch = E.arch
    for p, n in E.interior:
        arch = arch + LogReal.log(p, 2 * n)
    boundary = {}
    for p, t in E.boundary:
        k = math.floor(t)
        boundary[p] = t - k
        arch = arch + LogReal.log(p, 2 * k)
    return PicClass(E.model, _clean(boundary, to_fraction), arch)


# ---------------------------------------------------------------------------
# Cauchy sequences in the boundary topology

def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational of least denominator (then least |numerator|) in [lo, hi]."""
    if lo > hi:
        lo, hi = hi, lo
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_between(-hi, -lo)
    fl = math.floor(lo)
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    # lo, hi in (fl, fl+1): recurse on reciprocals of the fractional parts
    inner = simplest_between(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / inner


@dataclass(frozen=True)
class CauchyResult:
    is_cauchy: bool
    limit: ArithDivisor | None = None
    radius: object = None
    violating_pair: tuple[int, int] | None = None
    distance: object = None

    def to_json(self) -> dict:
        out = {"cauchy": self.is_cauchy}
        if self.is_cauchy:
            out["limit"] = self.limit.to_json()
            out["radius"] = str(self.radius)
        else:
            out["violating_pair"] = list(self.violating_pair)
            out["distance"] = str(self.distance)
        return out


def _diameter(seq, D0, start):
    best, pair = LogReal(0), (start, start)
    for i in range(start, len(seq)):
        for j in range(i + 1, len(seq)):
            d = boundary_norm(seq[i] - seq[j], D0)
            if d == INFINITY:
                return d, (i, j)
            if d > best:
                best, pair = d, (i, j)
    return best, pair


def _snap(values: list[Fraction]) -> Fraction:
    half = values[len(values) // 2 :]
    last = values[-1]
    rad = max(abs(v - last) for v in half)
    return simplest_between(last - rad, last + rad)


def cauchy_limit(seq, D0: BoundaryDivisor) -> CauchyResult:
    """Limit of a finite sample of a sequence in the boundary topology.

    A finite list is accepted as Cauchy when the diameter of its second half
    is at most a quarter of the diameter of the whole list (or zero).  The
    limit is read off coefficientwise: each exact coefficient is replaced by
    the simplest rational within its tail spread of the last term.
    """
    seq = list(seq)
    if not seq:
        raise ValueError("empty sequence")
    for E in seq:
        if E.model != D0.model:
            raise ValueError("mixed open models")
    if len(seq) == 1:
        return CauchyResult(True, seq[0], LogReal(0))
    whole, _ = _diameter(seq, D0, 0)
    half_start = len(seq) // 2
    tail, pair = _diameter(seq, D0, half_start)
    if whole == INFINITY:
        _, pair = _diameter(seq, D0, 0)
        return CauchyResult(False, violating_pair=pair, distance=INFINITY)
    if not (tail.is_zero() or tail * 4 <= whole):
        return CauchyResult(False, violating_pair=pair, distance=tail)
    model = D0.model
    boundary = {p: _snap([E.boundary_dict().get(p, Fraction(0)) for E in seq]) for p in model.boundary_primes}
    keys = sorted({k for E in seq for k in E.arch.coefficients()})
    arch_coeffs = {k: _snap([E.arch.coefficients().get(k, Fraction(0)) for E in seq]) for k in keys}
    arch = LogReal(arch_coeffs.pop(1, 0), arch_coeffs)
    limit = ArithDivisor(model, seq[-1].interior_dict(), boundary, arch)
    if all(is_effective(E) for E in seq) and not is_effective(limit):
        limit = seq[-1]
    return CauchyResult(True, limit, tail)
