from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, strategies as st

from arithdyn.exactnum import (
    BinaryForm,
    IntPoly,
    complex_roots,
    factor_integer,
    is_probable_prime,
    resultant,
    sylvester_cofactors,
    valuation,
)
from arithdyn.exactnum.quadratic import QuadraticNumber, quadratic_roots, squarefree_decompose

X = sympy.Symbol("x")


def sym(p: IntPoly):
    return sum(c * X**i for i, c in enumerate(p.coeffs))


@given(st.integers(min_value=-10**12, max_value=10**12))
def test_primality_matches_sympy(n):
    assert is_probable_prime(n) == bool(sympy.isprime(n))


def test_large_primes():
    assert is_probable_prime(2**127 - 1)
    assert not is_probable_prime(2**128 + 1)
    assert not is_probable_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


@given(st.integers(min_value=1, max_value=10**15))
def test_factorization_matches_sympy(n):
    assert factor_integer(n) == {int(p): int(e) for p, e in sympy.factorint(n).items()}


@given(st.integers(min_value=1, max_value=10**9), st.sampled_from([2, 3, 5, 7, 11]))
def test_valuation(n, p):
    k = valuation(n, p)
    assert n % p**k == 0 and n % p ** (k + 1) != 0


coeffs = st.lists(st.integers(-20, 20), min_size=2, max_size=5)


@given(coeffs, coeffs)
def test_resultant_matches_sympy(a, b):
    a[-1] = a[-1] or 1
    b[-1] = b[-1] or 1
    d = max(len(a), len(b)) - 1
    a += [0] * (d + 1 - len(a))
    b += [0] * (d + 1 - len(b))
    a[-1], b[-1] = a[-1] or 1, b[-1] or 1
    F, G = BinaryForm(tuple(a), d), BinaryForm(tuple(b), d)
    # both forms have full degree, so the binary and affine resultants agree
    assert resultant(F, G) == int(sympy.resultant(sym(IntPoly(tuple(a))), sym(IntPoly(tuple(b))), X))


@given(coeffs, coeffs)
def test_cofactor_identity(a, b):
    d = max(len(a), len(b)) - 1
    F = BinaryForm(tuple(a) + (0,) * (d + 1 - len(a)), d)
    G = BinaryForm(tuple(b) + (0,) * (d + 1 - len(b)), d)
    R = resultant(F, G)
    if R == 0:
        with pytest.raises(ValueError):
            sylvester_cofactors(F, G, R)
        return
    A1, B1, A2, B2 = sylvester_cofactors(F, G, R)
    assert A1 * F + B1 * G == BinaryForm.monomial(2 * d - 1, 2 * d - 1, R)
    assert A2 * F + B2 * G == BinaryForm.monomial(0, 2 * d - 1, R)


def test_resultant_degree_drop():
    # Res(X^2, Y^2) = 1; x^2 and the constant 1 share no root on P^1
    assert abs(resultant(BinaryForm((0, 0, 1), 2), BinaryForm((1,), 2))) == 1
    # both vanish at infinity
    assert resultant(BinaryForm((1, 0), 2), BinaryForm((0, 1), 2)) == 0


@given(st.lists(st.integers(-30, 30), min_size=3, max_size=8))
def test_roots_against_mpmath(c):
    c[-1] = c[-1] or 1
    p = IntPoly(tuple(c))
    if p.coeffs[0] == 0 and all(x == 0 for x in p.coeffs[:-1]):
        return
    roots = complex_roots(p, tol=1e-30)
    assert sum(r.multiplicity for r in roots) == p.degree
    ref = mpmath.polyroots(list(reversed(p.coeffs)), maxsteps=400, extraprec=400)
    for r in roots:
        assert r.residual <= 1e-30
        # every computed root is near some reference root
        assert min(abs(complex(r.value) - complex(z)) for z in ref) < 1e-4


def test_roots_multiplicity():
    p = IntPoly.from_roots([1, 1, 1, -2])
    roots = complex_roots(p)
    mult = sorted((round(float(r.value.real)), r.multiplicity) for r in roots)
    assert mult == [(-2, 1), (1, 3)]


def test_factor_and_sqf_match_sympy():
    p = IntPoly.from_roots([1, 1, 2]) * IntPoly((1, 0, 1))
    _, parts = p.factor_list()
    ref = sympy.factor_list(sym(p))[1]
    assert sorted((q.degree, k) for q, k in parts) == sorted((sympy.degree(q, X), k) for q, k in ref)
    assert p.squarefree_part() == (IntPoly.from_roots([1, 2]) * IntPoly((1, 0, 1))).primitive()


@given(st.integers(-500, 500).filter(lambda n: n != 0))
def test_squarefree_decompose(n):
    s, D = squarefree_decompose(n)
    assert s * s * D == n
    assert sympy.factorint(abs(D)) == {} or max(sympy.factorint(abs(D)).values()) == 1


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 50).filter(lambda c: c))
def test_quadratic_roots_exact(b, c, a):
    q = IntPoly((c, b, a))
    if not q.is_irreducible():
        return
    r1, r2 = quadratic_roots(q)
    for r in (r1, r2):
        val = r * r * a + r * b + c
        assert val.is_zero()
    assert r1.minimal_polynomial() == q.primitive()
    assert r1 * r2 == QuadraticNumber(Fraction(c, a), 0, r1.D)


def test_quadratic_field_arithmetic():
    x = QuadraticNumber(Fraction(1, 2), Fraction(1, 2), 5)
    assert (x * x - x - 1).is_zero()
    assert x.norm() == -1
    assert (x / x) == QuadraticNumber(1, 0, 5)
