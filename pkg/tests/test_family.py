from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, strategies as st

from arithdyn.dynmap import ProjPoint, build_map, polynomial_map
from arithdyn.exactnum import IntPoly
from arithdyn.family import (
    DegenerateFiberError,
    ParamFamily,
    Section,
    height_inequality_scan,
    specialization_profile,
    specialize,
)
from arithdyn.globalheight import preperiodic_test

# x^2 + t: numerator coefficients are polynomials in t
QUAD = ParamFamily.from_polys([[0, 1], [0], [1]], [[1]])
ZERO = Section.constant(0)

t, x = sympy.symbols("t x")


def test_specialize_examples():
    assert specialize(QUAD, -1) == polynomial_map([-1, 0, 1])
    f = specialize(QUAD, Fraction(1, 2))
    assert f.F.coeffs == (1, 0, 2) and f.G.coeffs == (2, 0, 0)
    assert f.res == 16 and set(f.bad_primes) == {2}
    fam = ParamFamily.from_polys([[1], [0], [0, 1]], [[1]])  # t x^2 + 1
    assert fam.res.coeffs == (0, 0, 1)
    with pytest.raises(DegenerateFiberError):
        specialize(fam, 0)


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=3), st.lists(st.integers(-3, 3), min_size=1, max_size=2))
def test_family_resultant_matches_sympy(a, b):
    # (x^2 + a(t)) / (b(t) x + 1) with polynomial coefficients
    num = [[*a], [0], [1]]
    den = [[1], [*b]]
    try:
        fam = ParamFamily.from_polys(num, den)
    except ValueError:
        return
    A = sum(c * t**i for i, c in enumerate(a))
    B = sum(c * t**i for i, c in enumerate(b))
    ref = sympy.resultant(x**2 + A, B * x + 1, x)
    mine = sum(c * t**i for i, c in enumerate(fam.res.coeffs))
    assert sympy.expand(mine - ref) == 0 or sympy.expand(mine + ref) == 0


@given(st.fractions(min_value=-5, max_value=5, max_denominator=6))
def test_commutation(t0):
    sec = Section(IntPoly((1, 1)), IntPoly((1,)))  # s(t) = t + 1
    f = specialize(QUAD, t0)
    image = sec.image(QUAD)
    assert f(sec.at(t0)) == image.at(t0)


def test_profile_examples():
    rows = specialization_profile(QUAD, ZERO, [-1, -2, 100], 1e-10)
    assert rows[0].flagged and rows[1].flagged and not rows[2].flagged
    assert abs(rows[2].height.value - mpmath.log(100) / 2) < 0.02
    for r in rows:
        assert r.height.error_bound <= 1e-10


def test_profile_reports_degenerate_rows():
    fam = ParamFamily.from_polys([[1], [0], [0, 1]], [[1]])
    rows = specialization_profile(fam, ZERO, [0, 1], 1e-10)
    assert rows[0].error and rows[1].error is None


def test_flagged_equals_certified():
    ts = [Fraction(k, 4) for k in range(-8, 9)]
    rows = specialization_profile(QUAD, ZERO, ts, 1e-9, certify=True)
    flagged = {r.t for r in rows if r.flagged}
    certified = {r.t for r in rows if r.certified == "preperiodic"}
    assert flagged == certified == {Fraction(-2), Fraction(-1), Fraction(0)}
    assert all(r.certified in ("preperiodic", "not-preperiodic") for r in rows)


def test_fiberwise_functional_equation():
    for t0 in (Fraction(1, 3), Fraction(-3, 2), Fraction(5)):
        f = specialize(QUAD, t0)
        x = ZERO.at(t0)
        r1, r2 = specialization_profile(QUAD, ZERO, [t0], 1e-10)[0], None
        from arithdyn.globalheight import canonical_height

        r2 = canonical_height(f, f(x), 1e-10)
        assert abs(r2.value - 2 * r1.height.value) <= 3e-10


def test_scan_examples():
    rep = height_inequality_scan(QUAD, ZERO, range(10, 201), 1e-9, target=(Fraction(2, 5), 1))
    assert rep.epsilon >= 0.4 and rep.c <= 1
    assert rep.violating_t == ()
    rep = height_inequality_scan(QUAD, ZERO, [-1, -2], 1e-9)
    assert rep.epsilon is None and all(r.flagged for r in rep.rows)
    const = ParamFamily.constant(polynomial_map([0, 0, 1]))
    rep = height_inequality_scan(const, Section.constant(2), [1, 5, 50], 1e-10)
    assert rep.c == 0
    for r in rep.rows:
        assert abs(r.height.value - mpmath.log(2)) <= r.height.error_bound + 1e-60


def test_json_roundtrip():
    fam = ParamFamily.from_json(QUAD.to_json())
    assert fam == QUAD
    assert Section.from_json({"num": [0, 1], "den": [1]}).at(3) == ProjPoint(3, 1)
    assert Section.from_json("inf").at(5).is_infinity
