from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from arithdyn.dynmap import Moebius, ProjPoint, build_map, conjugate, critical_divisor, polynomial_map
from arithdyn.globalheight import canonical_height
from arithdyn.pcf import critical_height, is_pcf

from _strategies import rational_maps


@pytest.mark.parametrize("c", [0, -1, -2])
def test_pcf_quadratics(c):
    f = polynomial_map([c, 0, 1])
    cert = is_pcf(f)
    assert cert.status == "PCF"
    assert all(res.status == "preperiodic" and res.cycle for _, _, res in cert.evidence)
    ch = critical_height(f, 1e-10)
    assert ch.value <= 1e-9


def test_pcf_cycles():
    cert = is_pcf(polynomial_map([-2, 0, 1]))
    finite = {lab: res for lab, _, res in cert.evidence}
    assert finite["0"].tail == ("0", "-2") and finite["0"].cycle == ("2",)
    assert finite["inf"].cycle == ("inf",)


@pytest.mark.parametrize("c", [1, 2])
def test_not_pcf(c):
    f = polynomial_map([c, 0, 1])
    cert = is_pcf(f)
    assert cert.status == "NotPCF"
    assert any(res.status == "not-preperiodic" and res.witness_height > res.bound for _, _, res in cert.evidence)
    ch = critical_height(f, 1e-10)
    # only the finite critical point 0 moves; infinity is fixed
    h0 = canonical_height(f, ProjPoint(0, 1), 1e-10)
    assert abs(ch.value - h0.value) <= 2e-10
    assert ch.value > 1e-9


@given(st.fractions(min_value=-3, max_value=3, max_denominator=4))
def test_certificate_matches_critical_height(c):
    f = build_map([c.numerator, 0, c.denominator], [c.denominator])
    cert = is_pcf(f)
    ch = critical_height(f, 1e-10)
    assert ch.value >= -ch.error_bound
    if cert.status == "PCF":
        assert ch.value <= 1e-10
    elif cert.status == "NotPCF":
        assert ch.value > 1e-10


@given(rational_maps(max_coeff=6))
def test_critical_count_and_nonnegativity(f):
    assert critical_divisor(f).total_multiplicity == 2 * f.degree - 2
    ch = critical_height(f, 1e-8)
    assert ch.value >= -ch.error_bound
    assert sum(w for _, w, _ in ch.terms) == 2 * f.degree - 2


@given(st.sampled_from([[0, 0, 1], [-1, 0, 1], [-2, 0, 1], [1, 0, 1], [2, 0, 1], [-1, 0, 0, 1]]),
       st.sampled_from([Moebius(1, 1, 0, 1), Moebius(0, 1, 1, 0), Moebius(2, 1, 1, 1), Moebius(1, -3, 0, 1)]))
def test_conjugation_invariance(coeffs, g):
    f = polynomial_map(coeffs)
    assert is_pcf(f).status == is_pcf(conjugate(f, g)).status


def test_quadratic_critical_points():
    # (x^2 + 3)/(2x) is Newton's method for x^2 - 3; its critical points are the fixed points +-sqrt 3
    cert = is_pcf(build_map([3, 0, 1], [0, 2]))
    assert cert.status == "PCF"
    ((lab, k, res),) = cert.evidence
    assert lab == "root of [-3, 0, 1]" and res.tail == () and len(res.cycle) == 1
