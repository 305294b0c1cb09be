"""Command-line front end.

Every subcommand reads maps, families and divisors as inline JSON or as a
path to a JSON file, and writes one JSON document (or CSV where noted) to
stdout or, atomically, to ``--out``.  Exit status: 0 on success, 2 on bad
input, 3 when a numeric computation could not be certified.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .adeliccurve import (
    ArithDivisor,
    BoundaryDivisor,
    OpenModel,
    arithmetic_degree,
    boundary_norm,
    cauchy_limit,
    pic_reduce,
)
from .dynmap import ProjPoint, RationalMap, build_map
from .equidist import (
    cloud_to_csv,
    cloud_to_ppm,
    discrepancy,
    equilibrium_cloud,
    pcf_parameter_cloud,
    preperiodic_cloud,
)
from .exactnum import DEFAULT_PREC, IntPoly, NumericError
from .family import ParamFamily, Section, height_inequality_scan, specialization_profile
from .globalheight import METHODS, AlgebraicPoint, canonical_height, small_points_enumerate
from .localheight import Place, local_green
from .pcf import critical_height, is_pcf
from .serialize import atomic_write, dumps, real_str, to_jsonable


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# input parsing

def load_json(text: str):
    """Inline JSON, or the contents of a JSON file when text names one."""
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    # accept the typographic minus sign that sneaks in from copied text
    text = text.replace("−", "-")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON: {exc}") from exc


def _int_list(values, what: str) -> list[int]:
    if not isinstance(values, list) or not values:
        raise InputError(f"{what} must be a nonempty coefficient array")
    out = []
    for v in values:
        q = Fraction(str(v))
        if q.denominator != 1:
            raise InputError(f"{what} coefficient {v} is not an integer")
        out.append(int(q))
    return out


def parse_map(text: str) -> RationalMap:
    data = load_json(text)
    if not isinstance(data, dict) or "num" not in data:
        raise InputError('a map is {"num": [c0, ...], "den": [c0, ...]}')
    num = _int_list(data["num"], "num")
    den = _int_list(data.get("den", [1]), "den")
    return build_map(IntPoly(tuple(num)), IntPoly(tuple(den)))


def parse_point(args):
    if args.minpoly is not None:
        return AlgebraicPoint.from_polynomial(_int_list(load_json(args.minpoly), "minpoly"), prec=args.prec, seed=args.seed)
    if args.point is None:
        raise InputError("give --point a/b or --minpoly [c0, ...]")
    try:
        return ProjPoint.parse(args.point.replace("−", "-"))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad point {args.point!r}") from exc


def parse_model(text: str | None, fallback=()) -> OpenModel:
    if text is None:
        return OpenModel(frozenset(int(p) for p in fallback))
    primes = load_json(text)
    if not isinstance(primes, list):
        raise InputError("--model is a JSON list of boundary primes")
    return OpenModel(frozenset(int(p) for p in primes))


def _divisor(data, model: OpenModel | None) -> ArithDivisor:
    if not isinstance(data, dict):
        raise InputError("a divisor is {interior: {...}, boundary: {...}, arch: ...}")
    if model is None:
        model = parse_model(None, data.get("boundary_primes", list(data.get("boundary", {}))))
    return ArithDivisor.from_json(data, model)


def _boundary(text: str | None, model: OpenModel) -> BoundaryDivisor:
    if text is None:
        return BoundaryDivisor.standard(model)
    return BoundaryDivisor.from_json(load_json(text), model)


def parse_levels(text: str) -> list[tuple[int, int]]:
    out = []
    for item in text.split(","):
        try:
            n, m = item.split(":")
            out.append((int(n), int(m)))
        except ValueError as exc:
            raise InputError(f"bad level {item!r}; expected n:m") from exc
    return out


def parse_t_values(text: str) -> list[Fraction]:
    try:
        return [Fraction(s.strip().replace("−", "-")) for s in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad parameter list {text!r}") from exc


def parse_range(text: str) -> list[Fraction]:
    parts = text.replace("−", "-").split(":")
    if len(parts) not in (2, 3):
        raise InputError("--range is lo:hi or lo:hi:step")
    try:
        lo, hi = Fraction(parts[0]), Fraction(parts[1])
        step = Fraction(parts[2]) if len(parts) == 3 else Fraction(1)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad range {text!r}") from exc
    if step <= 0 or hi < lo:
        raise InputError("range needs lo <= hi and a positive step")
    out, t = [], lo
    while t <= hi:
        out.append(t)
        t += step
    return out


def _family_section(args):
    fam = ParamFamily.from_json(load_json(args.family))
    sec = Section.from_json(load_json(args.section)) if args.section else Section.constant(0)
    return fam, sec


# ---------------------------------------------------------------------------
# subcommands: each returns (json-able result, optional csv text)

def cmd_height(args):
    f = parse_map(args.map)
    x = parse_point(args)
    r = canonical_height(f, x, args.tol, method=args.method, prec=args.prec)
    return r.to_json(), None


def cmd_local(args):
    f = parse_map(args.map)
    x = parse_point(args)
    if not isinstance(x, ProjPoint):
        raise InputError("local Green values are for rational points")
    v = Place.parse(args.place)
    return local_green(f, x, v, args.tol, prec=args.prec).to_json(), None


def cmd_pcf(args):
    f = parse_map(args.map)
    cert = is_pcf(f, budget=args.budget, prec=args.prec)
    out = cert.to_json()
    ch = critical_height(f, args.tol, prec=args.prec)
    out["critical_height"] = {"value": real_str(ch.value), "error": real_str(ch.error_bound)}
    out["evidence"] = ch.to_json()["terms"]
    return out, None


def cmd_enumerate(args):
    f = parse_map(args.map)
    sp = small_points_enumerate(f, args.bound, args.tol, prec=args.prec)
    csv = None
    if args.format == "csv":
        lines = ["point,height,error"] + [f"{p},{real_str(h.value)},{real_str(h.error_bound)}" for p, h in zip(sp.points, sp.heights)]
        csv = "\n".join(lines) + "\n"
    return sp.to_json(), csv


def cmd_adelic(args):
    model = parse_model(args.model) if args.model is not None else None
    if args.action == "limit":
        seq = load_json(args.sequence)
        if not isinstance(seq, list) or not seq:
            raise InputError("--sequence is a JSON list of divisors")
        if model is None:
            model = parse_model(None, sorted({int(p) for E in seq for p in E.get("boundary", {})}))
        divisors = [_divisor(E, model) for E in seq]
        return cauchy_limit(divisors, _boundary(args.d0, model)).to_json(), None
    if args.divisor is None:
        raise InputError("--divisor is required")
    E = _divisor(load_json(args.divisor), model)
    if args.action == "norm":
        n = boundary_norm(E, _boundary(args.d0, E.model))
        return {"norm": "inf" if n == float("inf") else str(n)}, None
    if args.action == "deg":
        return {"degree": str(arithmetic_degree(E))}, None
    return pic_reduce(E).to_json(), None


def cmd_specialize(args):
    fam, sec = _family_section(args)
    rows = specialization_profile(fam, sec, parse_t_values(args.t), args.tol, certify=args.certify, prec=args.prec)
    return {"rows": [r.to_json() for r in rows]}, _rows_csv(rows)


def _rows_csv(rows) -> str:
    lines = ["t,h,hhat,err,flag"]
    for r in rows:
        if r.error:
            lines.append(f"{r.t},,,,degenerate")
        else:
            lines.append(f"{r.t},{real_str(r.naive_t)},{real_str(r.height.value)},{real_str(r.height.error_bound)},{int(r.flagged)}")
    return "\n".join(lines) + "\n"


def cmd_scan(args):
    fam, sec = _family_section(args)
    target = None
    if args.target:
        try:
            eps, c = args.target.split(",")
            target = (Fraction(eps), Fraction(c))
        except ValueError as exc:
            raise InputError("--target is eps,c") from exc
    rep = height_inequality_scan(fam, sec, parse_range(args.range), args.tol, target=target, prec=args.prec)
    return rep.to_json(), _rows_csv(rep.rows)


def _cloud_summary(cloud, reference, J: int, angular: bool):
    rep = discrepancy(cloud, reference, J, angular=angular) if reference is not None else None
    out = {"label": cloud.label, "size": len(cloud), "total_weight": str(cloud.total_weight), "max_residual": real_str(cloud.max_residual())}
    if rep is not None:
        out.update(rep.to_json())
    return out


def _dump(cloud, prefix: str | None, ppm: str | None, tag: str):
    if prefix:
        atomic_write(f"{prefix}_{tag}.csv", cloud_to_csv(cloud))
    if ppm:
        atomic_write(f"{ppm}_{tag}.ppm", cloud_to_ppm(cloud))


def cmd_equidist(args):
    f = parse_map(args.map)
    ref = equilibrium_cloud(f, depth=args.depth, count=args.count, seed=args.seed)
    _dump(ref, args.dump, args.ppm, "equilibrium")
    levels = []
    for n, m in parse_levels(args.levels):
        cloud = preperiodic_cloud(f, n, m, prec=args.prec, seed=args.seed)
        _dump(cloud, args.dump, args.ppm, f"{n}_{m}")
        levels.append({"level": [n, m], **_cloud_summary(cloud, ref, args.moments, args.angular)})
    csv = None
    if args.format == "csv":
        lines = ["n,m,size,moment_distance"] + [f"{r['level'][0]},{r['level'][1]},{r['size']},{r['moment_distance']}" for r in levels]
        csv = "\n".join(lines) + "\n"
    return {"equilibrium": _cloud_summary(ref, None, args.moments, False), "levels": levels}, csv


def cmd_pcf_params(args):
    clouds = []
    for n, m in parse_levels(args.levels):
        cloud = pcf_parameter_cloud(n, m, prec=args.prec, seed=args.seed)
        _dump(cloud, args.dump, args.ppm, f"{n}_{m}")
        clouds.append(((n, m), cloud))
    rows = []
    for i, (lvl, cloud) in enumerate(clouds):
        row = {"level": list(lvl), "size": len(cloud), "total_weight": str(cloud.total_weight), "max_abs": float(max(abs(cloud.array)))}
        if i + 1 < len(clouds):
            row["distance_to_next"] = discrepancy(cloud, clouds[i + 1][1], args.moments).to_json()["moment_distance"]
        rows.append(row)
    return {"levels": rows}, None


COMMANDS = {
    "height": cmd_height,
    "local": cmd_local,
    "pcf": cmd_pcf,
    "enumerate": cmd_enumerate,
    "adelic": cmd_adelic,
    "specialize": cmd_specialize,
    "scan": cmd_scan,
    "equidist": cmd_equidist,
    "pcf-params": cmd_pcf_params,
}


# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--prec", type=int, default=DEFAULT_PREC, help="working precision in bits")
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the result here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    parser = _Parser(prog="arithdyn", description="Canonical heights and adelic divisors on P^1 over Q.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def point_args(p):
        p.add_argument("--point", help="a/b, a:b or inf")
        p.add_argument("--minpoly", help="minimal polynomial of an algebraic point, lowest degree first")

    p = sub.add_parser("height", parents=[common], help="canonical height of a point")
    p.add_argument("--map", required=True)
    point_args(p)
    p.add_argument("--method", choices=METHODS, default="local-sum")

    p = sub.add_parser("local", parents=[common], help="local Green value at one place")
    p.add_argument("--map", required=True)
    point_args(p)
    p.add_argument("--place", default="inf", help="inf or a prime")

    p = sub.add_parser("pcf", parents=[common], help="post-critical finiteness certificate")
    p.add_argument("--map", required=True)
    p.add_argument("--budget", type=int, default=64)

    p = sub.add_parser("enumerate", parents=[common], help="rational points of small canonical height")
    p.add_argument("--map", required=True)
    p.add_argument("--bound", type=float, required=True)

    p = sub.add_parser("adelic", parents=[common], help="divisors on an open subscheme of Spec Z")
    p.add_argument("action", choices=("norm", "deg", "reduce", "limit"))
    p.add_argument("--model", help="JSON list of boundary primes")
    p.add_argument("--divisor")
    p.add_argument("--sequence", help="JSON list of divisors (limit)")
    p.add_argument("--d0", help="boundary divisor; default is the standard one")

    for name, helptext in (("specialize", "heights along a section at given parameters"), ("scan", "height inequality scan")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--family", required=True)
        p.add_argument("--section", help="JSON section; default the constant 0")
        if name == "specialize":
            p.add_argument("--t", required=True, help="comma-separated parameters")
            p.add_argument("--certify", action="store_true")
        else:
            p.add_argument("--range", required=True, help="lo:hi[:step]")
            p.add_argument("--target", help="eps,c to check h_hat >= eps h(t) - c")

    p = sub.add_parser("equidist", parents=[common], help="preperiodic clouds against the equilibrium measure")
    p.add_argument("--map", required=True)
    p.add_argument("--levels", required=True, help="n:m,n:m,...")
    p.add_argument("--moments", type=int, default=4)
    p.add_argument("--depth", type=int, default=15)
    p.add_argument("--count", type=int, default=10000)
    p.add_argument("--angular", action="store_true")
    p.add_argument("--dump", help="write clouds to PREFIX_n_m.csv")
    p.add_argument("--ppm", help="write density pixmaps to PREFIX_n_m.ppm")

    p = sub.add_parser("pcf-params", parents=[common], help="PCF parameters of x^2 + c level by level")
    p.add_argument("--levels", required=True, help="n:m,n:m,...")
    p.add_argument("--moments", type=int, default=4)
    p.add_argument("--dump")
    p.add_argument("--ppm")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.prec < 53 or args.tol <= 0:
        print("arithdyn: error: need --prec >= 53 and --tol > 0", file=sys.stderr)
        return 2
    try:
        result, csv = COMMANDS[args.command](args)
    except (NumericError, ArithmeticError) as exc:
        # ArithmeticError also covers ZeroDivisionError, which is bad input
        if isinstance(exc, ZeroDivisionError):
            print(f"arithdyn: input error: {exc}", file=sys.stderr)
            return 2
        print(f"arithdyn: numeric failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, TypeError, KeyError, OSError) as exc:
        print(f"arithdyn: input error: {exc}", file=sys.stderr)
        return 2
    spec = {k: v for k, v in vars(args).items() if k not in ("out",)}
    if args.format == "csv" and csv is not None:
        text = csv
    else:
        payload = dict(to_jsonable(result)) if isinstance(result, dict) else {"result": to_jsonable(result)}
        payload["command"] = spec
        text = dumps(payload) + "\n"
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> None:
    raise SystemExit(run(argv))


if __name__ == "__main__":
    main()
