"""Critical heights and post-critically finite certification."""

from __future__ import annotations

from dataclasses import dataclass

from .dynmap import CriticalPoint, ProjPoint, QuadPoint, RationalMap, critical_divisor
from .exactnum.precision import DEFAULT_PREC, context
from .globalheight import AlgebraicPoint, HeightResult, PreperiodicResult, canonical_height, preperiodic_test


def _critical_label(cp: CriticalPoint) -> str:
    e = cp.exact
    if isinstance(e, ProjPoint):
        return str(e)
    if isinstance(e, QuadPoint):
        return f"root of {list(e.minimal_polynomial().coeffs)}"
    return f"root of {list(cp.factor.dehomogenize().coeffs)}"


def _height_point(cp: CriticalPoint, prec: int):
    if isinstance(cp.exact, ProjPoint):
        return cp.exact
    return AlgebraicPoint.from_polynomial(cp.factor.dehomogenize(), prec)


@dataclass(frozen=True)
class CriticalHeight:
    """sum over critical points, with Wronskian multiplicity, of their canonical heights."""

    value: object
    error_bound: object
    terms: tuple  # (label, multiplicity * degree, HeightResult)

    def as_height_result(self) -> HeightResult:
        return HeightResult(self.value, self.error_bound, (), "local-sum")

    def to_json(self) -> dict:
        from .serialize import real_str

        return {
            "value": real_str(self.value),
            "error": real_str(self.error_bound),
            "terms": [{"critical_point": lab, "weight": w, "height": real_str(r.value), "error": real_str(r.error_bound)} for lab, w, r in self.terms],
        }


def critical_height(f: RationalMap, tol=1e-10, prec: int = DEFAULT_PREC) -> CriticalHeight:
    """Each critical point's height is computed to tol / (2d - 2)."""
    ctx = context(prec)
    share = ctx.mpf(tol) / (2 * f.degree - 2)
    value, err, terms = ctx.mpf(0), ctx.mpf(0), []
    for cp in critical_divisor(f, prec=prec).points:
        r = canonical_height(f, _height_point(cp, prec), share, prec=prec)
        value += cp.count * r.value
        err += cp.count * r.error_bound
        terms.append((_critical_label(cp), cp.count, r))
    return CriticalHeight(value, err, tuple(terms))


@dataclass(frozen=True)
class PcfCertificate:
    status: str  # PCF, NotPCF, Undetermined
    evidence: tuple  # (label, multiplicity, PreperiodicResult)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "critical_points": [{"point": lab, "multiplicity": k, **res.to_json()} for lab, k, res in self.evidence],
        }


def is_pcf(f: RationalMap, budget: int = 64, prec: int = DEFAULT_PREC) -> PcfCertificate:
    """PCF iff every critical orbit closes up exactly; NotPCF on any height witness."""
    evidence = []
    for cp in critical_divisor(f, prec=prec).points:
        if cp.exact is None:
            res = PreperiodicResult("undetermined", reason="critical point of degree > 2")
        else:
            res = preperiodic_test(f, cp.exact, budget=budget, prec=prec)
        evidence.append((_critical_label(cp), cp.multiplicity, res))
    statuses = [r.status for _, _, r in evidence]
    if "not-preperiodic" in statuses:
        status = "NotPCF"
    elif all(s == "preperiodic" for s in statuses):
        status = "PCF"
    else:
        status = "Undetermined"
    return PcfCertificate(status, tuple(evidence))
