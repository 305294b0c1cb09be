from fractions import Fraction
from math import gcd

import mpmath
from hypothesis import given, settings, strategies as st

from arithdyn.dynmap import ProjPoint, build_map, evaluate_orbit, polynomial_map
from arithdyn.exactnum import factor_integer, valuation
from arithdyn.localheight import (
    Place,
    archimedean_green,
    distortion_bounds,
    local_green,
    padic_green,
    places_of,
    strip_bound,
)

from _strategies import points, rational_maps

INF = Place.infinity()


def ledger_oracle(f, x, p, n):
    """Truncated sum of ledger strips at p, straight from exact orbit evaluation."""
    led = evaluate_orbit(f, x, n)
    return sum(Fraction(v, f.degree**k) for k, q, v in led.strips if q == p)


def test_distortion_examples():
    b = distortion_bounds(polynomial_map([0, 0, 1]), INF)
    assert b.c_lower == b.c_upper == 1
    b = distortion_bounds(polynomial_map([1, 0, 1]), INF)
    assert b.c_upper == 2 and b.c_lower >= Fraction(1, 2)
    b = distortion_bounds(polynomial_map([1, 0, 1]), Place.finite(3))
    assert b.c_lower == b.c_upper == 1


@given(rational_maps(), points())
def test_distortion_brackets_lift(f, x):
    # c_lower ||x||^d <= ||F(x)|| <= c_upper ||x||^d at the archimedean place
    b = distortion_bounds(f, INF)
    A, B = f.lift(x.a, x.b)
    nx = max(abs(x.a), abs(x.b)) ** f.degree
    assert b.c_lower * nx <= max(abs(A), abs(B)) <= b.c_upper * nx
    assert 0 < b.c_lower <= b.c_upper


@given(rational_maps(), points())
def test_padic_distortion_brackets_lift(f, x):
    for p in f.bad_primes:
        b = distortion_bounds(f, Place.finite(p))
        A, B = f.lift(x.a, x.b)
        v = min(valuation(A, p) if A else 10**9, valuation(B, p) if B else 10**9)
        assert Fraction(1, p**v) >= b.c_lower
        assert strip_bound(f, p) <= valuation(f.res, p)


def test_local_green_examples():
    ctx = mpmath.mp.clone() if hasattr(mpmath.mp, "clone") else None
    r = local_green(polynomial_map([0, 0, 1]), ProjPoint(3, 1), INF, 1e-10)
    with mpmath.workdps(80):
        assert r.error_bound == 0 and abs(r.value - mpmath.log(3)) < 1e-70
    r = local_green(polynomial_map([5, 0, 1]), ProjPoint(3, 1), Place.finite(3), 1e-10)
    assert r.value == 0 and r.error_bound == 0
    f = build_map([2, 0, 1], [2])
    r = local_green(f, ProjPoint(0, 1), Place.finite(2), 1e-10)
    assert r.log_coefficient == Fraction(-1, 2) and r.error_bound == 0
    assert ledger_oracle(f, ProjPoint(0, 1), 2, 20) == Fraction(1, 2)


@given(rational_maps(), points(), st.integers(2, 50))
def test_good_primes_vanish(f, x, p):
    if not all(p % q for q in range(2, p)) or p in f.bad_primes:
        return
    r = local_green(f, x, Place.finite(p), 1e-10)
    assert r.value == 0 and r.error_bound == 0


@given(rational_maps(), points())
@mpmath.workdps(80)
def test_padic_matches_ledger(f, x):
    tol = 1e-12
    for p in f.bad_primes:
        r = padic_green(f, x, p, tol)
        e = strip_bound(f, p)
        n = 12 if f.degree == 2 else 7
        trunc = ledger_oracle(f, x, p, n)
        tail = Fraction(e, f.degree**n * (f.degree - 1))
        lp = mpmath.log(p)
        if r.log_coefficient is not None:
            assert r.error_bound == 0 and trunc <= -r.log_coefficient <= trunc + tail
            continue
        # true value lies in [-(trunc + tail) log p, -trunc log p]
        assert r.value <= 0
        assert r.value + r.error_bound >= -(trunc + tail) * lp - 1e-60
        assert r.value - r.error_bound <= -trunc * lp + 1e-60
        assert r.error_bound <= tol


def exact_escape(f, x, n):
    """(1/d^n) log ||Phi^n(x)|| of the unnormalized iterate, from exact integers."""
    a, b = x.a, x.b
    total = mpmath.mpf(0)
    for k in range(1, n + 1):
        A, B = f.lift(a, b)
        g = gcd(A, B)
        total += mpmath.log(g) / f.degree**k if g > 1 else 0
        a, b = A // g, B // g
    return mpmath.log(max(abs(a), abs(b))) / f.degree**n + total


@settings(max_examples=40)
@given(rational_maps(max_degree=2, max_coeff=5), points(max_coeff=5))
def test_archimedean_against_exact_escape(f, x):
    with mpmath.workdps(60):
        n = 9
        ref = exact_escape(f, x, n)
        spread = distortion_bounds(f, INF).log_spread
        tail = spread / (f.degree**n * (f.degree - 1))
        val, err, _ = archimedean_green(f, x.a, x.b, 1e-12)
        assert abs(val - ref) <= tail + err + 1e-50


@given(rational_maps(max_degree=2), points())
def test_precision_doubling(f, x):
    r1 = local_green(f, x, INF, 1e-10, prec=128)
    r2 = local_green(f, x, INF, 1e-10, prec=256)
    # an error bound of 0 means exact up to the final rounding at that precision
    rounding = mpmath.mpf(2) ** -127 * (1 + abs(r1.value))
    assert abs(r1.value - r2.value) <= r1.error_bound + r2.error_bound + rounding
    assert r1.error_bound <= 1e-10 and r2.error_bound <= 1e-10


def test_error_monotone_in_iterations():
    f = polynomial_map([1, 0, 1])
    errs = [archimedean_green(f, 1, 3, 1e-10, iterations=n)[1] for n in (5, 10, 20, 40)]
    assert all(a >= b for a, b in zip(errs, errs[1:]))


def test_places_and_parse():
    f = build_map([1, 0, 3], [0, 2])
    assert [str(v) for v in places_of(f)] == ["inf", "2", "3"]
    assert Place.parse("inf").is_archimedean and Place.parse("7").p == 7
