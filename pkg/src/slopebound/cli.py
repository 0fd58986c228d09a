"""Command-line front end: ``slopebound <command> [options]``.

Exit status is 0 on success, 1 on usage or input errors and 2 when a result
is not certified and ``--require-certified`` was given.
"""
from __future__ import annotations

import argparse
import csv
import functools
import io
import json
import os
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import bounds, counting, seifert
from .errors import PrecisionExhausted, SlopeboundError
from .lattice import LatticeBasis, normalize
from .precise import (DEFAULT_PRECISION, MAX_PRECISION, Ordering, PreciseReal,
                      parse_rational)

FORMAT_VERSION = 1
DIGITS = 15

PROVENANCE = {
    "ngd": "N(g,d) = 1/2 max over 0<=x<=1/2 of #{coprime (a,b): (a+bx)^2+3b^2 <= R^2}, R = 2g*pi/d or 6g/d",
    "table": "N(g,d) for g = 1..g_max by breakpoint sweep",
    "slopes": "primitive lattice vectors of the normalized cusp lattice with length <= 2g*pi, 6g or the given maximum",
    "density": "share of coprime pairs among nonzero integer pairs in a disk; tends to 6/pi^2",
    "seifert-verify": "sum_j u_ij = u on each torus; u*sum(beta/alpha) + sum(v_ij/u_ij) = 0",
    "seifert-solve": "v0/u0 = -(u/n)*sum(beta/alpha) for n parallel boundary curves",
    "length": bounds.PROVENANCE["length"],
    "intersect": bounds.PROVENANCE["intersect"],
    "count": bounds.PROVENANCE["count"],
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _real(value: PreciseReal) -> str:
    return value.to_decimal(DIGITS)


def _exact(value: PreciseReal) -> str:
    q = value.rational()
    if q is not None:
        return str(q)
    return str(value.exact) if value.exact is not None else ""


def _record(command: str, inputs: dict, result: dict, certified: bool = True,
            provenance: str | None = None) -> dict:
    return {"command": command, "inputs": inputs, "result": result,
            "certified": certified, "provenance": provenance or PROVENANCE[command]}


def _spec(args, g: Fraction, d: Fraction) -> counting.CountSpec:
    return counting.CountSpec(g, d, counting.RadiusMode.parse(args.radius_constant),
                              args.precision, args.max_precision,
                              getattr(args, "open_disk", False))


def _check_g(g: Fraction) -> None:
    if g <= 0:
        raise UsageError("--g must be positive")


def cmd_ngd(args) -> list[dict]:
    _check_g(args.g)
    spec = _spec(args, args.g, args.d)
    r = counting.n_gd(spec)
    inputs = {"g": str(args.g), "d": str(args.d), "radius_constant": args.radius_constant}
    result = {
        "value": r.value_hi if r.certified else None,
        "value_lo": r.value_lo,
        "value_hi": r.value_hi,
        "witness_x": _real(r.witness_x),
        "breakpoints": r.breakpoint_count,
        "samples": r.samples_evaluated,
    }
    if args.open_disk:
        inputs["open_disk"] = True
    return [_record("ngd", inputs, result, r.certified)]


def cmd_table(args) -> list[dict]:
    if args.g_max < 1:
        raise UsageError("--g-max must be at least 1")
    inputs = {"g_max": args.g_max, "d": str(args.d), "radius_constant": args.radius_constant}
    out = []
    for g in range(1, args.g_max + 1):
        r = counting.n_gd(_spec(args, Fraction(g), args.d))
        out.append(_record("table", inputs, {"g": g, "N": r.value_hi if r.certified else None,
                                             "N_lo": r.value_lo, "N_hi": r.value_hi},
                           r.certified))
    return out


def _length_order(torus: bounds.CuspTorus, prec: int, max_prec: int):
    def compare(s1, s2):
        r = torus.basis.norm2(s1.p, s1.q).cmp(torus.basis.norm2(s2.p, s2.q), prec, max_prec)
        if r is Ordering.LESS:
            return -1
        if r is Ordering.GREATER:
            return 1
        a, b = (s1.p, s1.q), (s2.p, s2.q)
        return (a > b) - (a < b)
    return functools.cmp_to_key(compare)


def cmd_slopes(args) -> list[dict]:
    basis = LatticeBasis.parse(args.basis)
    nb = normalize(basis, args.precision, args.max_precision)
    torus = bounds.CuspTorus(nb)
    inputs: dict[str, Any] = {"basis": args.basis}
    if args.g is not None:
        _check_g(args.g)
        mode = counting.RadiusMode.parse(args.radius_constant)
        found = bounds.short_slopes(torus, args.g, mode, args.precision, args.max_precision)
        inputs.update(g=str(args.g), radius_constant=args.radius_constant)
    else:
        lmax = PreciseReal.of(args.max_length)
        found = bounds.slopes_up_to(torus, lmax, args.precision, args.max_precision)
        inputs["max_length"] = args.max_length
    found.sort(key=_length_order(torus, args.precision, args.max_precision))
    return [_record("slopes", inputs, {"p": s.p, "q": s.q,
                                       "length": _real(bounds.slope_length(torus, s))})
            for s in found]


def cmd_density(args) -> list[dict]:
    if args.radius < 1:
        raise UsageError("--radius must be at least 1")
    value = counting.coprime_density(args.radius)
    target = 6 / PreciseReal.pi().square()
    deviation = abs(float(PreciseReal.of(value) - target))
    return [_record("density", {"radius": args.radius},
                    {"value": str(value), "decimal": PreciseReal.of(value).to_decimal(DIGITS),
                     "deviation": f"{deviation:.6g}"})]


def cmd_bounds_length(args) -> list[dict]:
    value = bounds.length_bound(args.g, args.n)
    return [_record("length", {"g": args.g, "n": args.n},
                    {"value": _real(value), "exact": _exact(value)})]


def cmd_bounds_intersect(args) -> list[dict]:
    mode = counting.RadiusMode.parse(args.radius_constant)
    nh = bounds.NullHomologous(args.null_homologous)
    area = PreciseReal.of(args.area)
    value = bounds.intersection_bound(args.g1, args.g2, area, nh, mode,
                                      args.precision, args.max_precision)
    return [_record("intersect",
                    {"g1": args.g1, "g2": args.g2, "area": args.area,
                     "null_homologous": args.null_homologous,
                     "radius_constant": args.radius_constant},
                    {"value": _real(value), "per_g1g2": _real(value / (args.g1 * args.g2))})]


def cmd_bounds_count(args) -> list[dict]:
    mode = counting.RadiusMode.parse(args.radius_constant)
    bound, exceptions = bounds.boundary_count_bound(args.g, args.k, args.d, mode)
    return [_record("count", {"g": args.g, "k": str(args.k), "d": str(args.d),
                              "radius_constant": args.radius_constant},
                    {"bound": str(bound), "exceptions": exceptions})]


def cmd_bounds_slope_count(args) -> list[dict]:
    mode = counting.RadiusMode.parse(args.radius_constant)
    report = bounds.slope_count_bound(args.g, args.d, mode)
    return [_record("slope-count", {"g": args.g, "d": str(args.d),
                                    "radius_constant": args.radius_constant},
                    {"value": report.value}, report.certified, report.provenance)]


def _parse_fibers(text: str) -> list[tuple[int, int]]:
    fibers = []
    for item in filter(None, (t.strip() for t in text.split(","))):
        try:
            alpha, beta = item.split("/")
            fibers.append((int(alpha), int(beta)))
        except ValueError:
            raise UsageError(f"fiber must look like alpha/beta, got {item!r}") from None
    return fibers


def _parse_curves(text: str) -> list[list[seifert.Curve]]:
    tori = []
    for torus in text.split("|"):
        curves = []
        for item in filter(None, (t.strip() for t in torus.split(";"))):
            try:
                u, v = item.split(",")
                curves.append(seifert.Curve(int(u), int(v)))
            except ValueError:
                raise UsageError(f"curve must look like u,v, got {item!r}") from None
        if not curves:
            raise UsageError("every boundary torus needs at least one curve")
        tori.append(curves)
    return tori


def cmd_seifert_verify(args) -> list[dict]:
    tori = _parse_curves(args.curves)
    pres = seifert.SeifertPresentation(args.genus, len(tori), _parse_fibers(args.fibers))
    system = seifert.BoundarySystem(tuple(map(tuple, tori)), args.u)
    eq21 = seifert.verify_eq21(system)
    value = seifert.eq22_value(pres, system)
    failed = [f"fiber sum on torus {i + 1}" for i, ok in enumerate(eq21) if not ok]
    if value != 0:
        failed.append("slope sum")
    return [_record("seifert-verify",
                    {"genus": args.genus, "fibers": args.fibers, "u": args.u, "curves": args.curves},
                    {"eq21": ";".join("pass" if ok else "fail" for ok in eq21),
                     "eq22": "pass" if value == 0 else "fail",
                     "eq22_value": str(value),
                     "failed": ";".join(failed)})]


def cmd_seifert_solve(args) -> list[dict]:
    pres = seifert.SeifertPresentation(args.genus, 1, _parse_fibers(args.fibers))
    slope = seifert.solve_slope(pres, args.u, args.n)
    return [_record("seifert-solve",
                    {"genus": args.genus, "fibers": args.fibers, "u": args.u, "n": args.n},
                    {"slope": f"{slope.u},{slope.v}", "euler_sum": str(pres.euler_sum)})]


def _scalar(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def render(records: list[dict], emit: str) -> str:
    if emit == "json":
        return json.dumps({"format_version": FORMAT_VERSION, "records": records}, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if records:
        first = records[0]
        writer.writerow([*first["inputs"], *first["result"], "certified", "provenance"])
        for rec in records:
            writer.writerow([_scalar(v) for v in (*rec["inputs"].values(), *rec["result"].values(),
                                                   rec["certified"], rec["provenance"])])
    return buf.getvalue()


def _default_precision() -> int:
    raw = os.environ.get("SLOPEBOUND_PRECISION")
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"SLOPEBOUND_PRECISION must be an integer, got {raw!r}") from None


def build_parser(default_precision: int = DEFAULT_PRECISION) -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--emit", choices=("csv", "json"), default="csv")
    common.add_argument("--precision", type=int, default=default_precision,
                        help="working precision in bits (env SLOPEBOUND_PRECISION)")
    common.add_argument("--max-precision", type=int, default=MAX_PRECISION)
    common.add_argument("--require-certified", action="store_true",
                        help="exit with status 2 if any result is not certified")
    radius = _Parser(add_help=False)
    radius.add_argument("--radius-constant", choices=("2pi", "6"), default="2pi")

    parser = _Parser(prog="slopebound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ngd", parents=[common, radius], help="compute N(g, d)")
    p.add_argument("--g", type=_rational, required=True)
    p.add_argument("--d", type=_rational, default=Fraction(1))
    p.add_argument("--open-disk", action="store_true",
                   help="count points strictly inside the circle")
    p.set_defaults(func=cmd_ngd)

    p = sub.add_parser("table", parents=[common, radius], help="N(g, d) for g = 1..g-max")
    p.add_argument("--g-max", type=int, required=True)
    p.add_argument("--d", type=_rational, default=Fraction(1))
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("slopes", parents=[common, radius], help="short slopes of a cusp lattice")
    p.add_argument("--basis", required=True, help='"x1,y1;x2,y2" (decimals, pi, sqrt3)')
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--g", type=_rational)
    which.add_argument("--max-length")
    p.set_defaults(func=cmd_slopes)

    p = sub.add_parser("bounds", help="closed-form bounds")
    bsub = p.add_subparsers(dest="bound", required=True)
    q = bsub.add_parser("length", parents=[common])
    q.add_argument("--g", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.set_defaults(func=cmd_bounds_length)
    q = bsub.add_parser("intersect", parents=[common, radius])
    q.add_argument("--g1", type=int, required=True)
    q.add_argument("--g2", type=int, required=True)
    q.add_argument("--area", required=True)
    q.add_argument("--null-homologous", choices=("none", "one"), default="none")
    q.set_defaults(func=cmd_bounds_intersect)
    q = bsub.add_parser("count", parents=[common, radius])
    q.add_argument("--g", type=int, required=True)
    q.add_argument("--k", type=_rational, required=True)
    q.add_argument("--d", type=_rational, default=Fraction(1))
    q.set_defaults(func=cmd_bounds_count)
    q = bsub.add_parser("slope-count", parents=[common, radius])
    q.add_argument("--g", type=int, required=True)
    q.add_argument("--d", type=_rational, default=Fraction(1))
    q.set_defaults(func=cmd_bounds_slope_count)

    p = sub.add_parser("seifert", help="Seifert boundary-slope equations")
    ssub = p.add_subparsers(dest="action", required=True)
    q = ssub.add_parser("verify", parents=[common])
    q.add_argument("--fibers", default="", help="alpha/beta pairs, comma separated")
    q.add_argument("--genus", type=int, default=0)
    q.add_argument("--u", type=int, required=True)
    q.add_argument("--curves", required=True,
                   help='"u,v;u,v|u,v": curves separated by ";", tori by "|"')
    q.set_defaults(func=cmd_seifert_verify)
    q = ssub.add_parser("solve", parents=[common])
    q.add_argument("--fibers", default="")
    q.add_argument("--genus", type=int, default=0)
    q.add_argument("--u", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.set_defaults(func=cmd_seifert_solve)

    p = sub.add_parser("density", parents=[common], help="coprime pair density in a disk")
    p.add_argument("--radius", type=int, required=True)
    p.set_defaults(func=cmd_density)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        parser = build_parser(_default_precision())
    except UsageError as exc:
        print(f"slopebound: error: {exc}", file=sys.stderr)
        return 1
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not 2 <= args.precision <= args.max_precision:
        print("slopebound: error: need 2 <= --precision <= --max-precision", file=sys.stderr)
        return 1
    try:
        records = args.func(args)
    except PrecisionExhausted as exc:
        print(f"slopebound: uncertified: {exc}", file=sys.stderr)
        return 2
    except (UsageError, SlopeboundError, ValueError, TypeError, ZeroDivisionError) as exc:
        print(f"slopebound: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(render(records, args.emit))
    if args.require_certified and not all(r["certified"] for r in records):
        print("slopebound: result is not certified", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
