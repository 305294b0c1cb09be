import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from arithdyn.adeliccurve import (
    ArithDivisor,
    BoundaryDivisor,
    LogReal,
    OpenModel,
    arithmetic_degree,
    boundary_norm,
    cauchy_limit,
    is_effective,
    norm_equivalence_constant,
    pic_reduce,
    principal_divisor,
    simplest_between,
)

U2 = OpenModel(frozenset({2}))
U23 = OpenModel(frozenset({2, 3}))
D0 = BoundaryDivisor.standard(U2)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def divisors(draw, model=U23, interior=True, logs=True):
    inner = {}
    if interior:
        for p in draw(st.lists(st.sampled_from([5, 7, 11]), max_size=2, unique=True)):
            inner[p] = draw(st.integers(-3, 3))
    boundary = {p: draw(fractions) for p in model.boundary_primes}
    arch = LogReal(draw(fractions))
    if logs:
        for p in draw(st.lists(st.sampled_from([2, 3, 5]), max_size=2, unique=True)):
            arch = arch + LogReal.log(p, draw(fractions))
    return ArithDivisor(model, inner, boundary, arch)


@st.composite
def boundary_divisors(draw, model=U23):
    pos = st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=10)
    return BoundaryDivisor(model, {p: draw(pos) for p in model.boundary_primes}, draw(pos))


def test_effectivity_examples():
    assert is_effective(ArithDivisor.zero(U2))
    assert not is_effective(ArithDivisor(U2, arch=Fraction(-1, 2)))
    assert is_effective(ArithDivisor(U2, {3: 1}))
    # signs decided exactly: log 3 - log 2 > 0 and 3 log 2 - 2 log 3 < 0
    assert is_effective(ArithDivisor(U2, arch=LogReal.log(3) - LogReal.log(2)))
    assert not is_effective(ArithDivisor(U2, arch=LogReal.log(2, 3) - LogReal.log(3, 2)))


def test_norm_examples():
    assert boundary_norm(ArithDivisor(U2, {}, {2: 0.5}, 0.25), D0) == Fraction(1, 2)
    assert boundary_norm(ArithDivisor(U2, {3: 1}), D0) == math.inf
    assert boundary_norm(ArithDivisor(U2, {}, {2: -2}), D0) == 2


@given(divisors(interior=False))
def test_norm_definiteness(E):
    D = BoundaryDivisor.standard(U23)
    assert (boundary_norm(E, D) == 0) == E.is_zero()


@given(divisors(), st.integers(-5, 5).filter(bool))
def test_norm_homogeneity(E, a):
    D = BoundaryDivisor.standard(U23)
    n, na = boundary_norm(E, D), boundary_norm(E * a, D)
    if n == math.inf:
        assert na == math.inf
    else:
        assert na == n * abs(a)


@given(divisors(), divisors(), boundary_divisors())
def test_norm_triangle(E, F, D):
    n = boundary_norm(E + F, D)
    a, b = boundary_norm(E, D), boundary_norm(F, D)
    if a == math.inf or b == math.inf:
        return
    assert n <= a + b


@given(divisors(interior=False), boundary_divisors(), boundary_divisors())
def test_norm_equivalence(E, D, Dp):
    r = norm_equivalence_constant(D, Dp)
    assert r >= 1
    n, m = boundary_norm(E, D), boundary_norm(E, Dp)
    assert n / r <= m <= n * r


@given(divisors(interior=False), boundary_divisors())
def test_norm_is_infimum(E, D):
    # -eps D0 <= E <= eps D0 holds at eps = ||E|| and fails just below it
    eps = boundary_norm(E, D)
    for v in [None, *E.model.boundary_primes]:
        e = E.arch if v is None else LogReal(E.coefficient(v))
        w = D.weight(v)
        assert abs(e) <= eps * w
    if not eps.is_zero():
        smaller = eps * Fraction(999, 1000)
        assert any(abs(E.arch if v is None else LogReal(E.coefficient(v))) > smaller * D.weight(v) for v in [None, *E.model.boundary_primes])


def test_degree_examples():
    assert arithmetic_degree(principal_divisor(2, U2)).is_zero()
    assert arithmetic_degree(ArithDivisor(U2, arch=2)) == 1
    assert arithmetic_degree(ArithDivisor(U2, {3: 1})) == LogReal.log(3)


@given(st.fractions(max_denominator=10**6).filter(bool), st.sampled_from([OpenModel(), U2, U23]))
def test_product_formula(q, model):
    E = principal_divisor(q, model)
    assert arithmetic_degree(E).is_zero()
    # and numerically, independent of the exact bookkeeping
    with mpmath.workdps(50):
        val = sum(mpmath.mpf(v) * mpmath.log(p) for p, v in E.interior) + sum(mpmath.mpf(v.numerator) / v.denominator * mpmath.log(p) for p, v in E.boundary)
        val += E.arch.to_mpf() / 2
        assert abs(val) < 1e-40


def test_pic_examples():
    c = pic_reduce(principal_divisor(2, U2))
    assert c.boundary == () and c.arch.is_zero()
    t = Fraction(7, 3)
    c = pic_reduce(ArithDivisor(U2, {}, {2: t}, LogReal.log(2, -2 * t)))
    assert dict(c.boundary) == {2: Fraction(1, 3)} and c.arch == LogReal.log(2, Fraction(-2, 3))
    c = pic_reduce(ArithDivisor(U2, {3: 1}))
    assert c.boundary == () and c.arch == LogReal.log(3, 2)


@given(divisors())
def test_pic_reduce_idempotent_and_degree_preserving(E):
    c = pic_reduce(E)
    assert pic_reduce(c.divisor()) == c
    assert arithmetic_degree(c.divisor()) == arithmetic_degree(E)
    assert all(0 <= v < 1 for _, v in c.boundary)


@given(st.fractions(min_value=-10, max_value=10, max_denominator=50), st.integers(-5, 5))
def test_circle_period(t, k):
    cls = lambda s: pic_reduce(ArithDivisor(U2, {}, {2: s}, LogReal.log(2, -2 * s)))
    assert cls(t) == cls(t + k)
    assert cls(t) != cls(t + Fraction(1, 2))


def test_cauchy_examples():
    inf_seq = [ArithDivisor(U2, arch=1 - Fraction(1, 2**i)) for i in range(1, 13)]
    r = cauchy_limit(inf_seq, D0)
    assert r.is_cauchy and r.limit == ArithDivisor(U2, arch=1)
    r = cauchy_limit([ArithDivisor(U2, arch=i) for i in range(1, 13)], D0)
    assert not r.is_cauchy and r.violating_pair is not None
    seq = [ArithDivisor(U2, {}, {2: 1}, Fraction(1, 2**i)) for i in range(1, 13)]
    r = cauchy_limit(seq, D0)
    assert r.is_cauchy and r.limit == ArithDivisor(U2, {}, {2: 1}, 0)


@given(st.lists(st.fractions(min_value=0, max_value=5, max_denominator=9), min_size=1, max_size=3))
def test_effective_limits_stay_effective(targets):
    seq = [ArithDivisor(U2, {}, {2: targets[0] + Fraction(1, 3**i)}, targets[-1] + Fraction(1, 2**i)) for i in range(1, 14)]
    r = cauchy_limit(seq, D0)
    assert r.is_cauchy and is_effective(r.limit)
    assert r.limit.coefficient(2) == targets[0] and r.limit.arch == targets[-1]


def test_mixed_models_rejected():
    with pytest.raises(ValueError):
        cauchy_limit([ArithDivisor(U2), ArithDivisor(U23)], D0)
    with pytest.raises(ValueError):
        OpenModel(frozenset({4}))
    with pytest.raises(ValueError):
        BoundaryDivisor(U2, {2: 0}, 1)


@given(st.fractions(max_denominator=100), st.fractions(max_denominator=100))
def test_simplest_between(a, b):
    lo, hi = min(a, b), max(a, b)
    s = simplest_between(lo, hi)
    assert lo <= s <= hi
    # nothing with a smaller denominator fits
    for q in range(1, s.denominator):
        assert math.floor(hi * q) < math.ceil(lo * q)


def test_logreal_parse_roundtrip():
    x = LogReal.parse("1/2 - 3*log(2) + log(6)/4")
    assert x == Fraction(1, 2) + LogReal.log(2, Fraction(-11, 4)) + LogReal.log(3, Fraction(1, 4))
    assert LogReal.parse(str(x)) == x
    assert LogReal.log(4) == LogReal.log(2, 2)
