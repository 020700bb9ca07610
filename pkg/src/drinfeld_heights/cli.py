"""Command-line interface: one binary, one subcommand per pipeline stage.

Exit codes: 0 success, 2 precondition violation (bad flags, parse errors,
out-of-contract inputs), 3 resource ceiling, 1 internal contract violation.
Reports are deterministic for fixed inputs; heights are emitted as exact
fractions `num/den` together with a decimal rendering.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import re
import sys
from fractions import Fraction

from .errors import (
    ContractViolationError,
    ParseError,
    PreconditionError,
    ResourceCeilingError,
)
from . import bounds as bounds_mod
from .fqarith import (
    APoly,
    FiniteField,
    RationalFn,
    count_irreducibles,
    parse_apoly,
    render_apoly,
)
from .heights import (
    AlgebraicPoint,
    canonical_height,
    gamma_bound,
    northcott_enumerate,
    point_height,
    torsion_status,
)
from .lab import (
    aux_row_height_bounds,
    build_aux_polynomial,
    make_siegel_system,
    siegel_solve,
    supersingular_vanishing_check,
)
from .ore import DrinfeldModule, load_module_file
from .supersingular import density_report


def frac_str(f):
    f = Fraction(f)
    return f"{f.numerator}/{f.denominator}"


def frac_pair(f):
    f = Fraction(f)
    return {"exact": frac_str(f), "decimal": float(f)}


def _field_from_args(args):
    if getattr(args, "field_modulus", None):
        mod = tuple(int(c) for c in args.field_modulus.split(","))
        p = args.p
        if p is None:
            raise PreconditionError("--p required with --field-modulus")
        return FiniteField(p, len(mod) - 1, modulus=mod)
    q = args.q
    return FiniteField(q)


_CARLITZ_RE = re.compile(r"^carlitz\(q=(\d+)\)$")


def _load_module(spec):
    m = _CARLITZ_RE.match(spec.strip())
    if m:
        return DrinfeldModule.carlitz(FiniteField(int(m.group(1))))
    return load_module_file(spec)


def _load_point(field, spec):
    if spec.endswith(".toml"):
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib
        with open(spec, "rb") as fh:
            cfg = tomllib.load(fh)
        text = cfg.get("minpoly")
        if not text:
            raise PreconditionError("point file must define minpoly")
        return AlgebraicPoint.from_text(field, text)
    return AlgebraicPoint.from_text(field, spec)


def _emit(args, record, rows=None):
    fmt = args.format
    out = sys.stdout
    close = False
    if getattr(args, "out", None):
        out = open(args.out, "w", encoding="utf-8", newline="")
        close = True
    try:
        if fmt == "json":
            payload = dict(record)
            if rows is not None:
                payload["rows"] = rows
            json.dump(payload, out, sort_keys=False)
            out.write("\n")
        elif fmt == "jsonl":
            if rows is None:
                raise PreconditionError("jsonl requires a row-producing command")
            for row in rows:
                json.dump(row, out, sort_keys=False)
                out.write("\n")
        elif fmt == "csv":
            if rows is None:
                raise PreconditionError("csv requires a row-producing command")
            writer = csv.DictWriter(out, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _csv_cell(v) for k, v in row.items()})
        else:
            _pretty(out, record, rows)
    finally:
        if close:
            out.close()


def _csv_cell(v):
    if isinstance(v, (list, tuple)):
        return ";".join(str(x) for x in v)
    return v


def _pretty(out, record, rows):
    for key, value in record.items():
        out.write(f"{key}: {_pretty_value(value)}\n")
    if rows:
        keys = list(rows[0].keys())
        out.write("\t".join(keys) + "\n")
        for row in rows:
            out.write("\t".join(str(_csv_cell(row[k])) for k in keys) + "\n")


def _pretty_value(v):
    if isinstance(v, dict):
        return json.dumps(v)
    return v


# -- subcommands ----------------------------------------------------------------

def _cmd_count_irreducibles(args):
    count = count_irreducibles(args.q, args.n)
    _emit(args, {"q": args.q, "n": args.n, "count": count})
    return 0


def _cmd_height(args):
    field = _field_from_args(args)
    x = AlgebraicPoint.from_text(field, args.point)
    h = point_height(x)
    _emit(args, {
        "point": args.point,
        "degree": x.degree,
        "d_sep": x.d_sep,
        "d_pi": x.d_pi,
        "height": frac_pair(h),
    })
    return 0


def _cmd_canonical_height(args):
    phi = _load_module(args.module)
    x = _load_point(phi.field, args.point)
    iv = canonical_height(x, phi, args.depth, ceiling=args.ceiling)
    _emit(args, {
        "module": phi.describe(),
        "point": args.point,
        "depth": iv.depth,
        "estimate": frac_pair(iv.estimate),
        "error": frac_pair(iv.error),
        "lower": frac_pair(iv.lower),
        "upper": frac_pair(iv.upper),
        "gamma_bound": frac_pair(gamma_bound(phi)),
    })
    return 0


def _cmd_torsion(args):
    phi = _load_module(args.module)
    x = _load_point(phi.field, args.point)
    status = torsion_status(x, phi, args.search, args.depth,
                            ceiling=args.ceiling)
    record = {
        "module": phi.describe(),
        "point": args.point,
        "search_bound": args.search,
        "status": status.kind,
    }
    if status.witness is not None:
        record["witness"] = render_apoly(status.witness)
    if status.interval is not None:
        record["estimate"] = frac_pair(status.interval.estimate)
        record["error"] = frac_pair(status.interval.error)
        record["lower"] = frac_pair(status.interval.lower)
    _emit(args, record)
    return 0


def _scan_rows(args):
    phi = _load_module(args.module)
    report = density_report(phi, args.n_max, r=Fraction(args.r),
                            c1=Fraction(args.c1), eta=args.eta,
                            workers=args.workers)
    return phi, report


def _cmd_ss_scan(args):
    phi, report = _scan_rows(args)
    _emit(args, report.config, rows=report.as_records())
    return 0


def _cmd_rv_report(args):
    phi, report = _scan_rows(args)
    _emit(args, report.config, rows=report.as_records())
    return 0


def _cmd_enumerate_points(args):
    field = _field_from_args(args)
    pts = northcott_enumerate(field, args.d_max, args.chi,
                              ceiling=args.ceiling)
    nb = bounds_mod.northcott_bound(field.q, args.d_max, args.chi)
    rows = []
    for x in pts:
        rows.append({
            "minpoly": _render_xpoly(x.minpoly),
            "degree": x.degree,
            "height": frac_str(point_height(x)),
        })
    _emit(args, {
        "q": field.q,
        "d_max": args.d_max,
        "chi": args.chi,
        "count": len(pts),
        "count_bound_log_q": str(nb.exponent),
    }, rows=rows)
    return 0


def _render_xpoly(f):
    """Monomial-by-monomial rendering that round-trips through the parser."""
    field = f.ring.field
    parts = []
    for i in range(f.deg, -1, -1):
        c = f.coeff(i)
        if c.is_zero:
            continue
        for j in range(len(c.coeffs) - 1, -1, -1):
            cf = c.coeffs[j]
            if field.is_zero(cf):
                continue
            factors = []
            cs = field.element_str(cf)
            if field.e > 1 and ("+" in cs or "*" in cs):
                cs = f"({cs})"
            if cs != "1":
                factors.append(cs)
            if j == 1:
                factors.append("T")
            elif j > 1:
                factors.append(f"T^{j}")
            if i == 1:
                factors.append("X")
            elif i > 1:
                factors.append(f"X^{i}")
            parts.append("*".join(factors) if factors else cs)
    return "+".join(parts) if parts else "0"


def _cmd_aux_poly(args):
    phi = _load_module(args.module)
    x = _load_point(phi.field, args.point)
    aux = build_aux_polynomial(phi, x, args.L, args.t, stride=args.stride)
    record = {
        "module": phi.describe(),
        "point": args.point,
        "L": aux.big_l,
        "t": aux.t,
        "stride": aux.stride,
        "N": render_apoly(aux.n_poly),
        "p": [[render_apoly(c) for c in row] for row in aux.p],
        "g_n": _render_xpoly(aux.g_n_primitive),
        "multiplicity": aux.multiplicity,
        "coefficient_degree": aux.coefficient_degree,
        "degree_bound": frac_str(aux.system.degree_bound())
        if aux.t else "0/1",
        "row_heights": [frac_str(h) for h in aux.system.row_heights],
        "row_height_bounds": [frac_str(b)
                              for b in aux_row_height_bounds(aux, phi, x)],
    }
    if args.check_ss_vanishing:
        spec = args.check_ss_vanishing
        if not spec.startswith("l="):
            raise PreconditionError("--check-ss-vanishing expects l=<poly>")
        l = parse_apoly(phi.field, spec[2:])
        result = supersingular_vanishing_check(aux, args.h_prime, phi, l, x)
        record["vanishing"] = {
            "l": render_apoly(l),
            "h_prime": args.h_prime,
            "zeta_is_zero": result.zeta_is_zero,
            "valuation": result.valuation,
            "required": result.required,
            "claim_holds": result.claim_holds,
        }
    _emit(args, record)
    return 0


def _cmd_siegel(args):
    field = FiniteField(args.q)
    rng = random.Random(args.seed)
    dens = [APoly.one(field), APoly.gen(field),
            parse_apoly(field, "T+1")]
    rows = []
    for _ in range(args.m):
        row = []
        for _ in range(args.n_unk):
            entry = []
            for _ in range(args.d):
                num = APoly(field, [field.element_from_index(
                    rng.randrange(field.q))
                    for _ in range(args.entry_height + 1)])
                entry.append(RationalFn(num, dens[rng.randrange(len(dens))]))
            row.append(tuple(entry))
        rows.append(row)
    system = make_siegel_system(rows, args.d, field)
    solution = siegel_solve(system)
    _emit(args, {
        "seed": args.seed,
        "m": args.m,
        "n_unk": args.n_unk,
        "d": args.d,
        "sigma": frac_str(system.sigma),
        "degree_bound": frac_str(system.degree_bound()),
        "solution": [render_apoly(a) for a in solution],
        "max_degree": max([a.deg for a in solution if not a.is_zero]),
        "residual_zero": True,  # verified inside the solver
    })
    return 0


def _logq_record(v):
    rec = {"q": v.q}
    if v.is_exact:
        rec["log_q"] = str(v.exponent)
    else:
        rec["log_q_lo"] = str(v.lo)
        rec["log_q_hi"] = str(v.hi)
    rec["approx_log10"] = v.approx_log10()
    return rec


def _cmd_bounds(args):
    fn = (bounds_mod.theorem1_constants if args.theorem == 1
          else bounds_mod.theorem2_constants)
    consts = fn(args.d, Fraction(args.h_phi), Fraction(args.c_phi),
                Fraction(args.r), q=args.q, n_phi=args.n_phi)
    record = {
        "theorem": consts.theorem,
        "q": consts.q,
        "d": consts.d,
        "h_phi": frac_str(consts.h_phi),
        "c_phi": frac_str(consts.c_phi),
        "r": frac_str(consts.r),
        "alpha": frac_str(consts.alpha),
        "c0": consts.c0.render(),
        "kappa": str(consts.kappa),
        "mu": str(consts.mu),
        "lambda": str(consts.lam) if consts.lam is not None else None,
        "c2": _logq_record(consts.c2),
        "c3": str(consts.c3),
        "c4": consts.c4,
        "C0": _logq_record(consts.C0),
        "C0_branch1_log_q": str(consts.C0_branch1_exponent),
    }
    if consts.rv_star_C is not None:
        record["rv_star_C"] = _logq_record(consts.rv_star_C)
    elif consts.rv_star_marker:
        record["rv_star_C"] = consts.rv_star_marker
    if args.D is not None:
        lb = bounds_mod.lower_bound(args.D, consts, d_pi=args.D_pi)
        record["D"] = args.D
        record["D_pi"] = args.D_pi
        record["lower_bound"] = _logq_record(lb)
        if args.params:
            variant = "inseparable" if args.D_pi > 1 else "separable"
            p_insep = args.D_pi if args.D_pi > 1 else 1
            params = bounds_mod.parameter_select(
                args.D, consts, variant=variant, p_insep=p_insep)
            record["parameters"] = {
                "L": params.big_l,
                "t": params.t,
                "h": params.h_order,
                "deg_l": params.deg_l,
                "deg_N": params.deg_n,
                "variant": params.variant,
            }
    _emit(args, record)
    return 0


# -- argument parsing -------------------------------------------------------------

def _add_common(p):
    p.add_argument("--format", choices=["json", "jsonl", "csv", "pretty"],
                   default="pretty")
    p.add_argument("--json", action="store_const", const="json",
                   dest="format", help="shorthand for --format json")
    p.add_argument("--out", default=None, help="output path (default stdout)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="drinfeld-heights",
        description="Exact heights, supersingular censuses, and explicit "
                    "constants for Drinfeld modules over F_q(T).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count-irreducibles",
                       help="count monic irreducibles of one degree")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(fn=_cmd_count_irreducibles)

    p = sub.add_parser("height", help="Weil height of an algebraic point")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--field-modulus", default=None,
                   help="comma-separated F_p coefficients, low to high")
    p.add_argument("--point", required=True,
                   help="minimal polynomial in X and T")
    _add_common(p)
    p.set_defaults(fn=_cmd_height)

    p = sub.add_parser("canonical-height",
                       help="canonical-height interval at a given depth")
    p.add_argument("--module", required=True,
                   help="module file or carlitz(q=N)")
    p.add_argument("--point", required=True)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--ceiling", type=int, default=4096)
    _add_common(p)
    p.set_defaults(fn=_cmd_canonical_height)

    p = sub.add_parser("torsion", help="torsion witness search/certification")
    p.add_argument("--module", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--search", type=int, default=2)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--ceiling", type=int, default=4096)
    _add_common(p)
    p.set_defaults(fn=_cmd_torsion)

    for name, fn in (("ss-scan", _cmd_ss_scan), ("rv-report", _cmd_rv_report)):
        p = sub.add_parser(name, help="supersingular census by degree")
        p.add_argument("--module", required=True)
        p.add_argument("--n-max", type=int, required=True)
        p.add_argument("--r", default="1")
        p.add_argument("--c1", default="0.5")
        p.add_argument("--eta", type=int, default=1)
        p.add_argument("--workers", type=int, default=1)
        _add_common(p)
        p.set_defaults(fn=fn)
        if name == "ss-scan":
            p.set_defaults(format="jsonl")  # machine rows by default

    p = sub.add_parser("enumerate-points",
                       help="all points of bounded degree and height")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--field-modulus", default=None)
    p.add_argument("--d-max", type=int, required=True)
    p.add_argument("--chi", type=int, required=True)
    p.add_argument("--ceiling", type=int, default=1_000_000)
    _add_common(p)
    p.set_defaults(fn=_cmd_enumerate_points)

    p = sub.add_parser("aux-poly", help="auxiliary polynomial pipeline")
    p.add_argument("--module", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--check-ss-vanishing", default=None,
                   help="l=<monic irreducible> to run the vanishing check")
    p.add_argument("--h-prime", type=int, default=0)
    _add_common(p)
    p.set_defaults(fn=_cmd_aux_poly)

    p = sub.add_parser("siegel",
                       help="solve a seeded random small-solution instance")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--seed", type=int, default=20260810)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n-unk", type=int, default=6)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--entry-height", type=int, default=2)
    _add_common(p)
    p.set_defaults(fn=_cmd_siegel)

    p = sub.add_parser("bounds", help="explicit theorem constants and bounds")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--h-phi", default="1")
    p.add_argument("--c-phi", default="1")
    p.add_argument("--r", default="1")
    p.add_argument("--theorem", type=int, choices=[1, 2], default=1)
    p.add_argument("--D", type=int, default=None)
    p.add_argument("--D-pi", type=int, default=1)
    p.add_argument("--n-phi", type=int, default=None)
    p.add_argument("--params", action="store_true",
                   help="also select the auxiliary-polynomial parameters")
    _add_common(p)
    p.set_defaults(fn=_cmd_bounds)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ParseError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ResourceCeilingError,) as exc:
        print(f"resource ceiling: {exc}", file=sys.stderr)
        return 3
    except ContractViolationError as exc:
        print(f"internal contract violation: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
