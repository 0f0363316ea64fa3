r"""
Command-line driver for the verification suites and table generators.

Every subcommand prints a deterministic report and exits with ``0`` when
all requested checks pass, ``1`` when a check fails and ``2`` on a usage
error.  ``--format json`` switches to a versioned JSON document in which
every rational is the string ``"p/q"``.

EXAMPLES::

    >>> from kwfeynman.cli import main
    >>> main(["gd", "--n", "2"])
    R_0 = 1
    R_1 = u
    R_2 = 1/2*u^2 + 1/12*u''
    PASS
    0
    >>> main(["kmi", "--g", "0", "--n", "9"])
    2
"""
import argparse
import json
import sys
from fractions import Fraction

from .algebra import GaussianRational

SCHEMA_VERSION = 1
MAX_WEIGHT = 10
MAX_VMAX = 3
MAX_SPECTRUM = 3
MAX_VERTICES = 6


class UsageError(Exception):
    pass


def rational_str(x):
    """``"p/q"`` rendering of an exact rational (``q`` always present).

    >>> rational_str(Fraction(-3, 4)), rational_str(2)
    ('-3/4', '2/1')
    """
    x = Fraction(x)
    return "%d/%d" % (x.numerator, x.denominator)


def number_json(z):
    if isinstance(z, GaussianRational):
        if z.im == 0:
            return rational_str(z.re)
        return {"re": rational_str(z.re), "im": rational_str(z.im)}
    return rational_str(z)


def _spectrum(text):
    try:
        vals = [Fraction(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError("spectrum must be a comma separated list of rationals")
    if not vals or len(vals) > MAX_SPECTRUM:
        raise UsageError("spectrum needs between 1 and %d values" % MAX_SPECTRUM)
    if any(v <= 0 for v in vals):
        raise UsageError("spectrum values must be positive")
    return vals


def _bounded(name, value, lo, hi):
    if not lo <= value <= hi:
        raise UsageError("%s must lie in [%d, %d]" % (name, lo, hi))
    return value


# -- subcommands ----------------------------------------------------------------------
# each returns (ok, text lines, json payload)


def cmd_gd(args):
    from .kdv import gelfand_dikii
    n = _bounded("--n", args.n, 0, 8)
    polys = [gelfand_dikii(k) for k in range(n + 1)]
    lines = ["R_%d = %r" % (k, p) for k, p in enumerate(polys)]
    return True, lines, {"R": [repr(p) for p in polys]}


def cmd_correlators(args):
    from .kdv import kdv_residual, solve_correlators
    w = _bounded("--max-weight", args.max_weight, 0, MAX_WEIGHT)
    table = solve_correlators(w)
    rows = sorted(dict.items(table), key=lambda kv: (sum(kv[0]), len(kv[0]), kv[0]))
    residuals = {i: kdv_residual(table, i) for i in range(3)}
    ok = not any(residuals.values())
    lines = ["<%s> = %s" % (" ".join("tau_%d" % a for a in nu), rational_str(v)) for nu, v in rows]
    lines += ["KdV flow %d residual: %s" % (i, "0" if not r else "%d nonzero" % len(r)) for i, r in residuals.items()]
    payload = {
        "correlators": [{"indices": list(nu), "value": rational_str(v)} for nu, v in rows],
        "kdv_residual_nonzero": {str(i): len(r) for i, r in residuals.items()},
    }
    return ok, lines, payload


def cmd_kmi(args):
    from .ribbon import kmi_check
    g, n = args.g, args.n
    if g < 0 or n < 1 or 2 * g - 2 + n <= 0:
        raise UsageError("need g >= 0, n >= 1 and 2g - 2 + n > 0")
    v = 2 * (2 * g - 2 + n)
    if v > MAX_VERTICES:
        raise UsageError("enumeration needs %d trivalent vertices, at most %d supported" % (v, MAX_VERTICES))
    ok, lhs, rhs = kmi_check(g, n)
    lines = ["correlator side: %s" % lhs, "graph side:      %s" % rhs]
    return ok, lines, {"g": g, "n": n, "correlator_side": str(lhs), "graph_side": str(rhs)}


def cmd_virasoro_check(args):
    from .kdv import solve_correlators
    from .virasoro import kw_residual, monomials_up_to, virasoro_relation_defect
    w = _bounded("--max-weight", args.max_weight, 1, 8)
    monos = monomials_up_to(w)
    lines, payload, ok = [], {"commutators": {}, "constraints": {}}, True
    for m in range(-1, 3):
        for n in range(-1, 3):
            bad = virasoro_relation_defect(m, n, monos)
            ok &= not bad
            lines.append("[L_%d, L_%d] relation: %d monomials, %d defects" % (m, n, len(monos), len(bad)))
            payload["commutators"]["%d,%d" % (m, n)] = len(bad)
    table = solve_correlators(w)
    for n in range(-1, 3):
        res = kw_residual(n, table)
        ok &= not res
        lines.append("L_%d Z residual: %d nonzero" % (n, len(res)))
        payload["constraints"][str(n)] = len(res)
    return ok, lines, payload


def cmd_miwa_check(args):
    from .virasoro import miwa_derivative_identity
    spec = _spectrum(args.spectrum)
    lines, rows, ok = [], [], True
    for k in range(-1, 3):
        for i in range(max(k, 0), 5):
            lhs, rhs = miwa_derivative_identity(k, i, spec)
            ok &= lhs == rhs
            lines.append("k=%d i=%d: %s %s %s" % (k, i, rational_str(lhs), "==" if lhs == rhs else "!=", rational_str(rhs)))
            rows.append({"k": k, "i": i, "lhs": rational_str(lhs), "rhs": rational_str(rhs)})
    return ok, lines, {"spectrum": [rational_str(x) for x in spec], "checks": rows}


def _equation(name, t1=1, t3=1):
    from .contraction import build_equation_I, build_equation_II
    if name == "I":
        return build_equation_I()
    return build_equation_II({"t1": t1, "t3": t3})


def cmd_prove(args):
    from .contraction import reduce, ungraft
    expr = _equation(args.equation, args.t1_sign, args.t3_sign)
    steps, grafts = [], []
    ungraft(expr, grafts)
    result = reduce(expr, steps)
    ok = not result
    lines = ["equation %s: %d terms" % (args.equation, sum(len(c.terms) for c in expr.terms.values()))]
    if args.trace:
        for _, lhs, rhs in grafts:
            lines.append("ungraft: %r -> %r" % (lhs, rhs))
        for k, s in enumerate(steps):
            d = s.to_dict()
            lines.append("step %d: degree %d, valence %d, trace %s, rest %s" % (k, s.degree, s.valence, d["trace"], d["rest"]))
            lines.append("  phibar = %s" % d["phibar"])
            lines.append("  psi    = %s" % d["psi"])
            for rule, piece in d["outputs"]:
                lines.append("  %-4s -> %s" % (rule, piece))
    lines.append("normal form: %r" % result)
    payload = {"equation": args.equation, "normal_form": repr(result), "steps": len(steps)}
    if args.trace:
        payload["ungraft"] = [[repr(lhs), repr(rhs)] for _, lhs, rhs in grafts]
        payload["trace"] = [s.to_dict() for s in steps]
    return ok, lines, payload


def _buckets(values):
    return {rational_str(d): number_json(v) for d, v in values.items()}


def cmd_oracle(args):
    from .contraction import truncated_expectation
    v = _bounded("--vmax", args.vmax, 0, MAX_VMAX)
    spec = _spectrum(args.spectrum)
    expr = _equation(args.equation, args.t1_sign, args.t3_sign)
    vals = truncated_expectation(expr, v, spec)
    ok = not any(vals.values())
    lines = ["degree %s: %s" % (rational_str(d), val) for d, val in vals.items()]
    return ok, lines, {"equation": args.equation, "vmax": v, "spectrum": [rational_str(x) for x in spec],
                       "residual_by_degree": _buckets(vals)}


def cmd_appendix_check(args):
    from .contraction import appendix_expression, truncated_expectation, witten_derivative
    from .triangular import D0, D1_at_base, compose_then_evaluate
    v = _bounded("--vmax", args.vmax, 0, MAX_VMAX)
    spec = _spectrum(args.spectrum)
    op = compose_then_evaluate(D1_at_base(), D0())
    expected = "13/24*ds0 + 1/2*ds0*ds1"
    vals = truncated_expectation(witten_derivative((0, 1)) - appendix_expression(), v, spec)
    ok = repr(op) == expected and not any(vals.values())
    lines = ["D_1 o D_0 at base point = %r" % op]
    lines += ["cluster residual, degree %s: %s" % (rational_str(d), val) for d, val in vals.items()]
    return ok, lines, {"composed": repr(op), "residual_by_degree": _buckets(vals)}


def build_parser():
    p = argparse.ArgumentParser(prog="kwfeynman", description=__doc__.strip().splitlines()[0])
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gd", help="Gel'fand-Dikii polynomials R_0..R_n")
    s.add_argument("--n", type=int, default=2)
    s.set_defaults(func=cmd_gd)

    s = sub.add_parser("correlators", help="intersection numbers from the string and KdV equations")
    s.add_argument("--max-weight", type=int, default=6)
    s.set_defaults(func=cmd_correlators)

    s = sub.add_parser("kmi", help="graph sum against correlators for one (g, n)")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_kmi)

    s = sub.add_parser("virasoro-check", help="commutation relations and the constraints L_n Z = 0")
    s.add_argument("--max-weight", type=int, default=6)
    s.set_defaults(func=cmd_virasoro_check)

    s = sub.add_parser("miwa-check", help="derivative identity of the trace coordinates")
    s.add_argument("--spectrum", default="1,2")
    s.set_defaults(func=cmd_miwa_check)

    for name, func, hlp in (("prove", cmd_prove, "reduce an equation to its normal form"),
                            ("oracle", cmd_oracle, "brute-force expectation of an unreduced equation")):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("--equation", choices=("I", "II"), required=True)
        s.add_argument("--t1-sign", type=int, choices=(1, -1), default=1)
        s.add_argument("--t3-sign", type=int, choices=(1, -1), default=1)
        if name == "prove":
            s.add_argument("--trace", action="store_true")
        else:
            s.add_argument("--vmax", type=int, default=3)
            s.add_argument("--spectrum", default="1,2")
        s.set_defaults(func=func)

    s = sub.add_parser("appendix-check", help="composed triangular operator and its cluster cross-check")
    s.add_argument("--vmax", type=int, default=2)
    s.add_argument("--spectrum", default="1,2")
    s.set_defaults(func=cmd_appendix_check)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        ok, lines, payload = args.func(args)
    except UsageError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    status = "PASS" if ok else "FAIL"
    if args.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": args.command, "status": status}
        doc.update(payload)
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)
        print(status)
    return 0 if ok else 1


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
