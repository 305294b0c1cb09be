"""Equidistribution experiments at the archimedean place."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .dynmap import ProjPoint, RationalMap, exceptional_forms, is_exceptional_point, iterate_forms
from .exactnum import BinaryForm, ComplexApprox, IntPoly, complex_roots
from .exactnum.precision import DEFAULT_PREC, context
from .serialize import atomic_write, real_str


@dataclass(frozen=True)
class WeightedPointCloud:
    """A finitely supported probability measure on C with exact rational weights."""

    points: tuple[ComplexApprox, ...]
    weights: tuple[Fraction, ...]
    label: str = ""

    def __post_init__(self):
        if len(self.points) != len(self.weights):
            raise ValueError("points and weights differ in length")
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")

    @classmethod
    def uniform(cls, values, label: str = "", residual=0) -> "WeightedPointCloud":
        values = list(values)
        if not values:
            raise ValueError("empty cloud")
        ctx = context(DEFAULT_PREC)
        pts = tuple(v if isinstance(v, ComplexApprox) else ComplexApprox(ctx.mpc(v), ctx.mpf(residual)) for v in values)
        w = Fraction(1, len(pts))
        return cls(pts, (w,) * len(pts), label)

    @property
    def total_weight(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array([complex(p.value) for p in self.points], dtype=np.complex128)

    @cached_property
    def weight_array(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights])

    def max_residual(self):
        return max((p.residual for p in self.points), default=0)


# ---------------------------------------------------------------------------
# clouds

def _strip_exceptional(h: IntPoly, f: RationalMap) -> IntPoly:
    for q in exceptional_forms(f):
        qd = q.dehomogenize()
        if qd.degree < 1:
            continue  # infinity only; already dropped by dehomogenizing
        g = h.gcd(qd)
        if g.degree > 0:
            h = h.exact_quo(g)
    return h


def _level_form(f: RationalMap, n: int, m: int) -> IntPoly:
    Fn, Gn = iterate_forms(f, n)
    Fm, Gm = iterate_forms(f, m)
    h = (Fn * Gm - Fm * Gn).dehomogenize()
    if h.is_zero():
        raise ValueError("f^n = f^m identically")
    return h


def preperiodic_cloud(
    f: RationalMap, n: int, m: int, tol=1e-30, prec: int = DEFAULT_PREC, seed: int = 0, exact_level: bool = False
) -> WeightedPointCloud:
    """Equal-weight cloud on the distinct finite solutions of f^n(x) = f^m(x).

    Repeated roots are counted once, and exceptional points and infinity are
    removed, all by exact polynomial arithmetic.  With ``exact_level`` the
    solutions of the lower level f^(n-1) = f^(m-1) are divided out first.
    """
    if not (n > m >= 0):
        raise ValueError("need n > m >= 0")
    h = _level_form(f, n, m)
    if exact_level and m >= 1:
        h = h.exact_quo(_level_form(f, n - 1, m - 1))
    h = _strip_exceptional(h.squarefree_part(), f)
    if h.degree < 1:
        raise ValueError("no non-exceptional finite points at this level")
    roots = complex_roots(h.primitive(), tol=tol, prec=prec, seed=seed)
    return WeightedPointCloud.uniform(roots, f"preperiodic({n},{m})")


def _preimage_polys(f: RationalMap, w: np.ndarray) -> np.ndarray:
    """Rows of coefficients (highest first) of F(z) - w G(z)."""
    Fc = np.array(f.F.coeffs[::-1], dtype=np.complex128)
    Gc = np.array(f.G.coeffs[::-1], dtype=np.complex128)
    return Fc[None, :] - w[:, None] * Gc[None, :]


def _batched_roots(coeffs: np.ndarray) -> np.ndarray:
    """Roots of each row via companion-matrix eigenvalues."""
    lead = coeffs[:, 0]
    if np.any(np.abs(lead) < 1e-300):
        raise ArithmeticError("preimage at infinity during backward iteration")
    norm = coeffs[:, 1:] / lead[:, None]
    k = norm.shape[1]
    comp = np.zeros((coeffs.shape[0], k, k), dtype=np.complex128)
    comp[:, 0, :] = -norm
    if k > 1:
        comp[:, np.arange(1, k), np.arange(0, k - 1)] = 1
    return np.linalg.eigvals(comp)


def equilibrium_cloud(f: RationalMap, depth: int = 15, count: int = 10000, seed: int = 0, start=Fraction(1, 2)) -> WeightedPointCloud:
    """Backward-iteration sample of the equilibrium measure.

    Each sample follows ``depth`` uniformly chosen inverse branches from
    ``start``; sample i draws from its own generator seeded by (seed, i).
    """
    if depth < 1 or count < 1:
        raise ValueError("depth and count must be positive")
    x0 = start if isinstance(start, ProjPoint) else ProjPoint.from_fraction(Fraction(start))
    if is_exceptional_point(f, x0):
        raise ValueError(f"start point {x0} is exceptional; choose a point outside the exceptional set, e.g. 1/3 or 2/7")
    if x0.is_infinity:
        raise ValueError("start point must be finite")
    d = f.degree
    choices = np.stack([np.random.default_rng([seed, i]).integers(0, d, size=depth) for i in range(count)])
    z = np.full(count, complex(x0.to_fraction()), dtype=np.complex128)
    rows = np.arange(count)
    for step in range(depth):
        roots = _batched_roots(_preimage_polys(f, z))
        # fix an order of the branches before choosing
        order = np.argsort(roots.real + 1e-3 * roots.imag, axis=1, kind="stable")
        roots = np.take_along_axis(roots, order, axis=1)
        z = roots[rows, choices[:, step]]
    return WeightedPointCloud.uniform(z.tolist(), f"equilibrium(depth={depth},seed={seed})", residual=2.0**-40)


def pushforward(f: RationalMap, cloud: WeightedPointCloud) -> WeightedPointCloud:
    """f_* of the cloud, evaluated in double precision; points sent to infinity are dropped."""
    z = cloud.array
    num = np.polyval(np.array(f.F.coeffs[::-1], dtype=np.complex128), z)
    den = np.polyval(np.array(f.G.coeffs[::-1], dtype=np.complex128), z)
    keep = np.abs(den) > 0
    if not keep.all():
        raise ArithmeticError("cloud point mapped to infinity")
    ctx = context(DEFAULT_PREC)
    pts = tuple(ComplexApprox(ctx.mpc(complex(v)), ctx.mpf(2.0**-40)) for v in num / den)
    return WeightedPointCloud(pts, cloud.weights, f"push({cloud.label})")


def pcf_polynomials(n: int) -> list[IntPoly]:
    """P_k(c) = f_c^k(0) for f_c = x^2 + c, k = 0..n."""
    c = IntPoly((0, 1))
    out = [IntPoly((0,))]
    for _ in range(n):
        out.append(out[-1] * out[-1] + c)
    return out


def pcf_parameter_cloud(
    n: int, m: int, tol=1e-30, prec: int = DEFAULT_PREC, seed: int = 0, exact_level: bool = True
) -> WeightedPointCloud:
    """Equal-weight cloud on distinct parameters c with f_c^n(0) = f_c^m(0), f_c = x^2 + c.

    By default (``exact_level``) the parameters of the lower level
    f_c^(n-1)(0) = f_c^(m-1)(0) are divided out: for m >= 1 this leaves the
    roots of P_(n-1) + P_(m-1), since P_n - P_m = P_(n-1)^2 - P_(m-1)^2.
    """
    if not (n > m >= 0):
        raise ValueError("need n > m >= 0")
    P = pcf_polynomials(n)
    h = P[n] - P[m]
    if exact_level and m >= 1:
        h = h.exact_quo(P[n - 1] - P[m - 1])
    h = h.squarefree_part().primitive()
    roots = complex_roots(h, tol=tol, prec=prec, seed=seed)
    return WeightedPointCloud.uniform(roots, f"pcf({n},{m})")


# ---------------------------------------------------------------------------
# discrepancy

@dataclass(frozen=True)
class DiscrepancyReport:
    moment_distance: float
    J: int
    worst_monomial: tuple[int, int]
    angular: float | None = None

    def to_json(self) -> dict:
        out = {"moment_distance": self.moment_distance, "J": self.J, "worst_monomial": list(self.worst_monomial)}
        if self.angular is not None:
            out["angular_discrepancy"] = self.angular
        return out


def moments(cloud: WeightedPointCloud, J: int) -> dict[tuple[int, int], complex]:
    z, w = cloud.array, cloud.weight_array
    zc = np.conj(z)
    out = {}
    for j in range(J + 1):
        for k in range(J + 1 - j):
            if j + k >= 1:
                out[(j, k)] = complex(np.sum(w * z**j * zc**k))
    return out


def _angles(cloud: WeightedPointCloud) -> np.ndarray:
    t = np.angle(cloud.array) / (2 * np.pi)
    return np.mod(t, 1.0)


def angular_star_discrepancy(cloud: WeightedPointCloud) -> float:
    """sup_t |mu(arg/2pi in [0, t)) - t| for the angular projection of the cloud."""
    t = _angles(cloud)
    order = np.argsort(t, kind="stable")
    t, w = t[order], cloud.weight_array[order]
    C = np.cumsum(w)
    Cprev = np.concatenate(([0.0], C[:-1]))
    return float(max(np.max(C - t), np.max(t - Cprev)))


def _two_sample_angular(a: WeightedPointCloud, b: WeightedPointCloud) -> float:
    ta, tb = _angles(a), _angles(b)
    grid = np.unique(np.concatenate((ta, tb)))
    Fa = np.array([a.weight_array[ta <= g].sum() for g in grid])
    Fb = np.array([b.weight_array[tb <= g].sum() for g in grid])
    return float(np.max(np.abs(Fa - Fb))) if len(grid) else 0.0


def discrepancy(mu1: WeightedPointCloud, mu2: WeightedPointCloud, J: int = 4, angular: bool = False) -> DiscrepancyReport:
    """Max over monomials z^j conj(z)^k, 1 <= j + k <= J, of the difference of integrals."""
    if J < 1:
        raise ValueError("J must be at least 1")
    m1, m2 = moments(mu1, J), moments(mu2, J)
    worst, key = 0.0, (1, 0)
    for jk in m1:
        dv = abs(m1[jk] - m2[jk])
        if dv > worst:
            worst, key = dv, jk
    ang = _two_sample_angular(mu1, mu2) if angular else None
    return DiscrepancyReport(float(worst), J, key, ang)


# ---------------------------------------------------------------------------
# output

def cloud_to_csv(cloud: WeightedPointCloud) -> str:
    lines = ["re,im,weight"]
    for p, w in zip(cloud.points, cloud.weights):
        lines.append(f"{real_str(p.value.real)},{real_str(p.value.imag)},{w}")
    return "\n".join(lines) + "\n"


def write_csv(cloud: WeightedPointCloud, path: str) -> None:
    atomic_write(path, cloud_to_csv(cloud))


def cloud_to_ppm(cloud: WeightedPointCloud, size: int = 256, bounds=None) -> str:
    """Plain (P3) pixmap of the weighted density, brighter where heavier."""
    z, w = cloud.array, cloud.weight_array
    if bounds is None:
        r = max(float(np.max(np.abs(z.real))), float(np.max(np.abs(z.imag))), 1e-9) * 1.05
        bounds = (-r, r, -r, r)
    x0, x1, y0, y1 = bounds
    img = np.zeros((size, size))
    ix = np.clip(((z.real - x0) / (x1 - x0) * size).astype(int), 0, size - 1)
    iy = np.clip(((y1 - z.imag) / (y1 - y0) * size).astype(int), 0, size - 1)
    np.add.at(img, (iy, ix), w)
    peak = img.max() or 1.0
    level = np.sqrt(img / peak) * 255
    lines = ["P3", f"{size} {size}", "255"]
    for row in level.astype(int):
        lines.append(" ".join(f"{v} {v} {v}" for v in row))
    return "\n".join(lines) + "\n"


def write_ppm(cloud: WeightedPointCloud, path: str, size: int = 256) -> None:
    atomic_write(path, cloud_to_ppm(cloud, size))
