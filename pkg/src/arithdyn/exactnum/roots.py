"""Simultaneous (Aberth-Ehrlich) complex root finding with residual bounds.

Roots of the square-free parts are found by a full simultaneous solve (no
deflation): a double-precision Aberth pass supplies starting values, then
iterations at the working precision polish them.  The high-precision stage
uses gmpy2 scalars in numpy object arrays; its precision is set through a
gmpy2 context manager, which is thread-local.  Multiplicities come
from the exact square-free decomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2
import numpy as np

from .poly import IntPoly
from .precision import DEFAULT_PREC, context


class NumericError(ArithmeticError):
    """Root finding failed to meet its tolerance; carries the best residuals."""

    def __init__(self, message: str, residuals=()):
        super().__init__(message)
        self.residuals = list(residuals)


@dataclass(frozen=True)
class ComplexApprox:
    value: object  # mpc
    residual: object  # mpf, bound on |p(value)|
    multiplicity: int = 1

    @property
    def real(self):
        return self.value.real

    @property
    def imag(self):
        return self.value.imag

    def __complex__(self) -> complex:
        return complex(self.value)


def root_radius_bound(coeffs: tuple[int, ...]) -> float:
    """Fujiwara bound ``2 max |a_{n-k}/a_n|^(1/k)``, computed in log space."""
    n = len(coeffs) - 1
    lead = abs(coeffs[-1])
    best = -math.inf
    for k in range(1, n + 1):
        c = abs(coeffs[n - k])
        if c == 0:
            continue
        if k == n:
            c = c / 2  # Fujiwara uses half the constant term
            if c == 0:
                continue
        best = max(best, (math.log(c) - math.log(lead)) / k)
    return 2.0 * math.exp(best) if best > -math.inf else 1.0


def _float_coeffs(coeffs: tuple[int, ...]) -> np.ndarray:
    shift = max(0, max(abs(c).bit_length() for c in coeffs) - 900)
    return np.array([float(c >> shift) if c >= 0 else -float((-c) >> shift) for c in coeffs])


def _newton_ratio_double(a: np.ndarray, z: np.ndarray) -> np.ndarray:
    """p(z)/p'(z) for polynomial ``a`` (low first), stable for |z| > 1 via reversal."""
    n = len(a) - 1
    out = np.empty_like(z)
    inside = np.abs(z) <= 1
    if inside.any():
        zi = z[inside]
        p = np.full_like(zi, a[-1])
        dp = np.zeros_like(zi)
        for c in a[-2::-1]:
            dp = dp * zi + p
            p = p * zi + c
        out[inside] = p / dp
    if (~inside).any():
        w = 1.0 / z[~inside]
        # q(w) = w^n p(1/w) has coefficients a reversed
        q = np.full_like(w, a[0])
        dq = np.zeros_like(w)
        for c in a[1:]:
            dq = dq * w + q
            q = q * w + c
        # p(z)/p'(z) = z / (n - w q'(w)/q(w))
        out[~inside] = (1.0 / w) / (n - w * dq / q)
    return out


def _aberth_correction(ratio, z):
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    inv = 1.0 / diff
    np.fill_diagonal(inv, 0.0)
    s = inv.sum(axis=1)
    return ratio / (1.0 - ratio * s)


def _double_stage(coeffs: tuple[int, ...], seed: int, max_iter: int = 800) -> np.ndarray:
    n = len(coeffs) - 1
    a = _float_coeffs(coeffs)
    rng = np.random.default_rng(seed)
    radius = root_radius_bound(coeffs)
    phase = rng.uniform(0, 2 * np.pi)
    jitter = rng.uniform(-0.25, 0.25, size=n) * (2 * np.pi / n)
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + phase + jitter))
    with np.errstate(all="ignore"):
        for _ in range(max_iter):
            w = _aberth_correction(_newton_ratio_double(a, z), z)
            bad = ~np.isfinite(w)
            if bad.any():
                w[bad] = 0.0
            z = z - w
            if np.max(np.abs(w) / np.maximum(1.0, np.abs(z))) < 1e-13:
                break
    z[~np.isfinite(z)] = radius
    return z


def _horner(coeffs, z):
    p = np.full(len(z), coeffs[-1], dtype=object)
    dp = np.full(len(z), gmpy2.mpc(0), dtype=object)
    for c in coeffs[-2::-1]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _sparse_eval(terms, z):
    p = np.full(len(z), gmpy2.mpc(0), dtype=object)
    dp = np.full(len(z), gmpy2.mpc(0), dtype=object)
    for k, c in terms:
        if k == 0:
            p = p + c
        else:
            zk1 = z ** (k - 1)
            p = p + c * zk1 * z
            dp = dp + (k * c) * zk1
    return p, dp


def _evaluator(coeffs):
    """Vectorized (p, p') over an object array of gmpy2 mpc values."""
    terms = [(k, c) for k, c in enumerate(coeffs) if c != 0]
    if len(terms) * 4 < len(coeffs):
        return lambda z: _sparse_eval(terms, z)
    return lambda z: _horner(coeffs, z)


def _well_separated(z, rel=1e-9) -> bool:
    arr = np.array([complex(x) for x in z])
    if len(arr) < 2:
        return True
    diff = np.abs(arr[:, None] - arr[None, :])
    np.fill_diagonal(diff, np.inf)
    return bool(np.all(diff.min(axis=1) > rel * np.maximum(1.0, np.abs(arr))))


def _max_rel(w, z) -> object:
    return max(abs(wi) / max(1, abs(zi)) for wi, zi in zip(w, z))


def _polish(coeffs: tuple[int, ...], z0, prec: int, target_bits: int, max_iter: int = 500):
    """High-precision refinement: Newton if the roots stay apart, else Aberth."""
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        ev = _evaluator([gmpy2.mpfr(c) for c in coeffs])
        z = np.array([gmpy2.mpc(x) for x in z0], dtype=object)
        eps = gmpy2.mpfr(2) ** (-target_bits)
        if _well_separated(z):
            zn = z.copy()
            for _ in range(80):
                p, dp = ev(zn)
                if any(d == 0 for d in dp):
                    break
                w = p / dp
                zn = zn - w
                if _max_rel(w, zn) <= eps:
                    if _well_separated(zn):
                        return zn
                    break
        history = []
        for _ in range(max_iter):
            p, dp = ev(z)
            ratio = np.array([pi / di if di != 0 else gmpy2.mpc(0) for pi, di in zip(p, dp)], dtype=object)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, gmpy2.mpc(1))
            inv = np.array([[1 / x if x != 0 else gmpy2.mpc(0) for x in row] for row in diff], dtype=object)
            np.fill_diagonal(inv, gmpy2.mpc(0))
            s = inv.sum(axis=1)
            w = ratio / (1 - ratio * s)
            z = z - w
            worst = _max_rel(w, z)
            if worst <= eps:
                break
            history.append(worst)
            # stalled at the precision floor: hand back for a precision increase
            if len(history) > 12 and worst < 1e-20 and worst > min(history[-6:-1]) / 2:
                break
        return z


def _residuals(coeffs: tuple[int, ...], z, prec: int):
    """``|p~(z)| + gamma_{2n+2} * sum |a_i| |z|^i``: a bound on the exact ``|p(z)|``."""
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        ev = _evaluator([gmpy2.mpfr(c) for c in coeffs])
        p, _ = ev(z)
        n = len(coeffs) - 1
        gamma = gmpy2.mpfr(2 * n + 2) * gmpy2.mpfr(2) ** (1 - prec) * gmpy2.mpfr("1.01")
        out = []
        for zi, pi in zip(z, p):
            r = abs(zi)
            mag = gmpy2.mpfr(abs(coeffs[-1]))
            for c in coeffs[-2::-1]:
                mag = mag * r + abs(c)
            out.append(abs(pi) + gamma * mag)
        return out


def _to_mp(ctx, x):
    if isinstance(x, type(gmpy2.mpc(0))):
        return ctx.mpc(_to_mp(ctx, x.real), _to_mp(ctx, x.imag))
    man, exp = x.as_mantissa_exp()
    return ctx.ldexp(ctx.mpf(int(man)), int(exp))


def _simple_roots(q: IntPoly, tol, prec: int, seed: int):
    """Roots of a square-free primitive polynomial, with residual bounds."""
    coeffs = q.coeffs
    n = q.degree
    ctx = context(prec)
    if n == 1:
        root = ctx.mpc(ctx.mpf(-coeffs[0]) / coeffs[1])
        return [ComplexApprox(root, ctx.mpf(0))]
    coeff_bits = max(abs(c).bit_length() for c in coeffs)
    work = prec + coeff_bits + n + 32
    z = _double_stage(coeffs, seed)
    best = None
    for _ in range(4):
        z = _polish(coeffs, z, work, prec + 8)
        res = _residuals(coeffs, z, work)
        best = [float(r) for r in res]
        if max(res) <= tol:
            out_ctx = context(max(prec, work))
            return [ComplexApprox(_to_mp(out_ctx, zi), _to_mp(out_ctx, ri)) for zi, ri in zip(z, res)]
        work *= 2
    raise NumericError(f"root residuals above tolerance {tol}", best)


def _sort_key(c: ComplexApprox, prec: int):
    scale = 2 ** max(8, prec // 2)
    return (int(c.value.real * scale), int(c.value.imag * scale))


def complex_roots(p: IntPoly, tol=1e-30, prec: int = DEFAULT_PREC, seed: int = 0) -> list[ComplexApprox]:
    """All complex roots of ``p`` with multiplicities.

    Returns one ``ComplexApprox`` per distinct root; multiplicities sum to
    ``deg p``.  Every residual bound is ``<= tol``.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has no finite root set")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if p.degree == 0:
        return []
    _, parts = p.sqf_list()
    found: list[ComplexApprox] = []
    for idx, (q, k) in enumerate(parts):
        if q.degree == 0:
            continue
        for r in _simple_roots(q, tol, prec, seed + 1009 * idx):
            found.append(ComplexApprox(r.value, r.residual, k))
    merged = _merge_close(found, prec)
    return sorted(merged, key=lambda c: _sort_key(c, prec))


def _merge_close(roots: list[ComplexApprox], prec: int) -> list[ComplexApprox]:
    ctx = context(prec)
    thresh = ctx.ldexp(ctx.mpf(1), -(prec // 4))
    out: list[ComplexApprox] = []
    for r in roots:
        for i, o in enumerate(out):
            if abs(o.value - r.value) < thresh:
                out[i] = ComplexApprox(o.value, max(o.residual, r.residual), o.multiplicity + r.multiplicity)
                break
        else:
            out.append(r)
    return out
