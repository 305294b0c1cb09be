"""Shared hypothesis strategies: small maps and points."""

from math import gcd

from hypothesis import strategies as st

from arithdyn.dynmap import DegenerateMapError, ProjPoint, build_map


@st.composite
def rational_maps(draw, max_coeff=10, max_degree=3):
    d = draw(st.integers(2, max_degree))
    num = draw(st.lists(st.integers(-max_coeff, max_coeff), min_size=d + 1, max_size=d + 1))
    den = draw(st.lists(st.integers(-max_coeff, max_coeff), min_size=1, max_size=d + 1))
    if num[-1] == 0 and (len(den) < d + 1 or den[-1] == 0):
        num[-1] = 1
    try:
        return build_map(num, den if any(den) else [1])
    except (DegenerateMapError, ValueError):
        return build_map([c if i < d else (c or 1) for i, c in enumerate(num)], [1])


@st.composite
def points(draw, max_coeff=10):
    a = draw(st.integers(-max_coeff, max_coeff))
    b = draw(st.integers(0, max_coeff))
    if a == 0 and b == 0:
        b = 1
    if b == 0:
        return ProjPoint.infinity()
    g = gcd(a, b)
    return ProjPoint(a // g, b // g)
