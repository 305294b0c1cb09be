from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from arithdyn.dynmap import build_map, polynomial_map
from arithdyn.equidist import (
    WeightedPointCloud,
    angular_star_discrepancy,
    cloud_to_csv,
    cloud_to_ppm,
    discrepancy,
    equilibrium_cloud,
    pcf_parameter_cloud,
    pcf_polynomials,
    preperiodic_cloud,
    pushforward,
)

SQ = polynomial_map([0, 0, 1])
CHEB = polynomial_map([-2, 0, 1])
BASILICA = polynomial_map([-1, 0, 1])

c, z = sympy.symbols("c z")


def circle(n):
    return WeightedPointCloud.uniform(np.exp(2j * np.pi * np.arange(n) / n))


def test_power_map_level():
    cloud = preperiodic_cloud(SQ, 3, 1)
    assert len(cloud) == 6
    for p in cloud.points:
        assert abs(p.value**6 - 1) < 1e-25


@pytest.mark.parametrize("n", [4, 5, 6])
def test_power_map_star_discrepancy(n):
    cloud = preperiodic_cloud(SQ, n, 1)
    assert len(cloud) == 2**n - 2
    assert abs(angular_star_discrepancy(cloud) - 1 / (2**n - 2)) < 1e-12


def test_chebyshev_and_basilica_clouds():
    cloud = preperiodic_cloud(CHEB, 4, 2)
    for p in cloud.points:
        assert abs(p.imag) < 1e-25 and abs(p.real) <= 2 + mpmath.mpf(10) ** -25
    for p in preperiodic_cloud(BASILICA, 4, 2).points:
        assert abs(p.value) <= 2


@given(st.integers(2, 5), st.integers(0, 3), st.sampled_from([[1, 0, 1], [-1, 0, 1], [0, 1, 1]]))
def test_cloud_points_solve_level_equation(n, m, coeffs):
    if m >= n:
        return
    f = polynomial_map(coeffs)
    cloud = preperiodic_cloud(f, n, m)
    assert cloud.total_weight == 1
    P = sum(k * z**i for i, k in enumerate(coeffs))
    fn, fm = z, z
    for _ in range(n):
        fn = sympy.expand(P.subs(z, fn))
    for _ in range(m):
        fm = sympy.expand(P.subs(z, fm))
    # distinct roots of f^n - f^m, with the fixed points counted once
    ref = sympy.Poly(fn - fm, z)
    sqf = sympy.Poly(sympy.quo(ref, sympy.gcd(ref, ref.diff(z))), z)
    assert len(cloud) == sqf.degree()
    vals = np.polyval([complex(a) for a in ref.all_coeffs()], cloud.array)
    assert np.max(np.abs(vals)) < 1e-6 * max(1.0, float(max(abs(a) for a in ref.all_coeffs())))


def test_equilibrium_examples():
    cloud = equilibrium_cloud(SQ, 15, 1000, seed=7)
    assert np.max(np.abs(np.abs(cloud.array) - 1)) < 0.01
    cheb = equilibrium_cloud(CHEB, 15, 1000, seed=7)
    assert np.max(np.abs(cheb.array.imag)) < 1e-8 and np.max(np.abs(cheb.array.real)) <= 2 + 1e-8
    again = equilibrium_cloud(CHEB, 15, 1000, seed=7)
    assert np.array_equal(cheb.array, again.array)
    assert not np.array_equal(cheb.array, equilibrium_cloud(CHEB, 15, 1000, seed=8).array)


def test_equilibrium_rejects_exceptional_start():
    with pytest.raises(ValueError):
        equilibrium_cloud(SQ, 10, 10, start=0)


def test_discrepancy_examples():
    a = circle(60)
    assert discrepancy(a, a).moment_distance == 0
    eq = equilibrium_cloud(SQ)
    assert discrepancy(a, eq, 4).moment_distance < 0.05
    seg = equilibrium_cloud(CHEB)
    assert discrepancy(a, seg, 4).moment_distance > 0.3


@given(st.integers(5, 40), st.integers(3, 30))
def test_discrepancy_symmetric(n, m):
    a, b = circle(n), WeightedPointCloud.uniform(np.linspace(-1, 1, m))
    assert discrepancy(a, b).moment_distance == discrepancy(b, a).moment_distance


# the degree-4 moments of the arcsine law on [-2, 2] have standard deviation
# near 6, so the Chebyshev map needs a larger sample to resolve 0.05
@pytest.mark.parametrize("f, count", [(SQ, 10000), (BASILICA, 10000), (build_map([1, 0, 3], [0, 2]), 10000), (CHEB, 40000)])
def test_pushforward_invariance(f, count):
    mu = equilibrium_cloud(f, count=count)
    assert discrepancy(mu, pushforward(f, mu), 4).moment_distance <= 0.05


def test_level_cauchy_property_on_corpus():
    for f in [SQ, polynomial_map([1, 0, 1]), polynomial_map([2, 0, 1])]:
        dists = [discrepancy(preperiodic_cloud(f, n, m), preperiodic_cloud(f, n + 1, m + 1)).moment_distance for n, m in [(3, 1), (4, 2), (5, 3)]]
        assert all(a >= b for a, b in zip(dists, dists[1:]))


def test_pcf_parameter_examples():
    assert sorted(round(float(p.real)) for p in pcf_parameter_cloud(2, 0).points) == [-1, 0]
    vals = [complex(p.value) for p in pcf_parameter_cloud(3, 2).points]
    assert any(abs(v + 2) < 1e-20 for v in vals)
    for n, m in [(4, 1), (5, 3), (6, 2)]:
        assert np.max(np.abs(pcf_parameter_cloud(n, m).array)) <= 2


@given(st.integers(1, 6), st.integers(0, 4))
def test_pcf_parameters_solve_orbit_relation(n, m):
    if m >= n:
        return
    cloud = pcf_parameter_cloud(n, m)
    P = pcf_polynomials(n)
    for p in cloud.points:
        assert abs(P[n](p.value) - P[m](p.value)) < 1e-20


def test_weights_and_output():
    cloud = preperiodic_cloud(SQ, 4, 1)
    assert cloud.total_weight == 1 and all(w == Fraction(1, 14) for w in cloud.weights)
    text = cloud_to_csv(cloud)
    assert text.splitlines()[0] == "re,im,weight" and len(text.splitlines()) == 15
    ppm = cloud_to_ppm(cloud, size=16)
    assert ppm.startswith("P3\n16 16\n255")
    with pytest.raises(ValueError):
        WeightedPointCloud.uniform([])
