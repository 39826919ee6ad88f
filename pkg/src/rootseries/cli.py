"""Command line front end: ``rootseries coeff|eval|verify``.

Exit codes: 0 success, 1 invalid input, 2 verification failure,
3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from .branch import get_context
from .problem import ProblemSpec, SpecError
from .series import Perturbation, multi_indices, series_coefficients, series_eval
from .symbolic import LaurentPoly
from . import verify as V

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_NUMERIC = 0, 1, 2, 3

SELECTORS = ("fprod", "nu", "derivset", "newton", "vandermonde", "integrality", "transform",
             "theorem-main-consistency", "twoterm", "all")

TRANSFORM_SETS = (
    # (gammas, b, beta1, beta2)
    ((Fraction(1),), Fraction(-1), Fraction(2), Fraction(2)),
    ((Fraction(1, 2), Fraction(-1)), Fraction(-1), Fraction(3), Fraction(5, 2)),
    ((Fraction(0), Fraction(2)), Fraction(-1), Fraction(1, 2), Fraction(-3)),
    ((Fraction(-2, 3),), Fraction(-1), Fraction(5, 2), Fraction(1, 3)),
    ((Fraction(3), Fraction(1, 4)), Fraction(-1), Fraction(-2), Fraction(3, 2)),
    ((Fraction(1, 3),), Fraction(-1), Fraction(2), Fraction(1)),
)


def _value_json(v):
    if isinstance(v, LaurentPoly):
        return v.to_text()
    c = complex(v)
    return [c.real, c.imag]


def _load_spec(args) -> ProblemSpec:
    if not args.spec:
        raise SpecError("--spec is required")
    try:
        text = Path(args.spec).read_text()
    except OSError as e:
        raise SpecError(f"cannot read spec: {e}") from None
    spec = ProblemSpec.from_json(text)
    changes = {}
    if args.mode is not None and args.mode != spec.mode:
        # re-parse so numbers get the right type for the new mode
        data = json.loads(text)
        data["mode"] = args.mode
        spec = ProblemSpec.from_dict(data)
    if args.order is not None:
        changes["max_order"] = args.order
    return replace(spec, **changes) if changes else spec


def cmd_coeff(args) -> tuple[dict, int]:
    spec = _load_spec(args)
    base = spec.base_function(args.precision, spec.max_order)
    table = series_coefficients(spec.perturbation(), base, spec.max_order)
    rows = [{"n": list(n.n), "value": _value_json(v)} for n, v in table.items()]
    return {"command": "coeff", "mode": spec.mode, "max_order": spec.max_order, "coefficients": rows}, EXIT_OK


def cmd_eval(args) -> tuple[dict, int]:
    spec = _load_spec(args)
    if spec.mode != "numeric":
        raise SpecError("eval needs numeric mode")
    if not spec.a_values:
        raise SpecError("eval needs a_values in the spec")
    base = spec.base_function(args.precision, spec.max_order)
    pert = spec.perturbation()
    table = series_coefficients(pert, base, spec.max_order)
    rows = []
    code = EXIT_OK
    for a in spec.a_values:
        s = series_eval(a, spec.max_order, pert, base, table)
        row = {"a": [[x.real, x.imag] for x in a], "series": _value_json(s)}
        try:
            z = V.newton_track(pert, base, a, radius=spec.tracking_radius)
        except V.TrackingError as e:
            row.update(newton=None, abs_diff=None, status="no-converge", message=str(e))
            code = EXIT_NUMERIC
        else:
            row.update(newton=_value_json(z), abs_diff=float(abs(s - z)), status="ok")
        rows.append(row)
    return {"command": "eval", "max_order": spec.max_order, "rows": rows}, code


def _range(value, default_max, lo=1):
    return [value] if value is not None else list(range(lo, default_max + 1))


def run_verify(selector: str, seed: int = 0, M=None, N=None, degree=None, n=None, order=None,
               gammas=None, precision: int = 53) -> list[V.IdentityReport]:
    """Run one selector (or ``all``) and return the reports in a fixed order."""
    if selector not in SELECTORS:
        raise SpecError(f"unknown selector {selector!r}; choose from {', '.join(SELECTORS)}")
    want = (lambda s: True) if selector == "all" else (lambda s: s == selector)  # noqa: E731
    reports = []
    if want("fprod"):
        for m in _range(M, 5):
            rep = V.IdentityReport("fprod", {"M": m, "a": [1, m]})
            for a in range(1, m + 1):
                rep.merge(V.check_F_prod(m, a))
            reports.append(rep)
    if want("nu"):
        for nn in _range(N, 5):
            rep = V.IdentityReport("nu", {"N": nn, "k": [1, nn]})
            for k in range(1, nn + 1):
                rep.merge(V.check_nu(nn, k))
            reports.append(rep)
    if want("derivset"):
        for m in _range(M if M is not None and M <= 4 else None, 4, lo=0):
            reports.append(V.check_deriv_set(m, trials=10, seed=seed))
    if want("newton"):
        for m in _range(degree, 6, lo=0):
            reports.append(V.check_newton_series(m, seed=seed))
    if want("vandermonde"):
        for k in _range(n, 8, lo=0):
            reports.append(V.check_vandermonde(k, seed=seed))
    if want("integrality"):
        top = order or 6
        if gammas is not None:
            ints = V._integer_gammas(gammas)
            rep = V.IdentityReport("integrality", {"gammas": list(ints), "max_order": top})
            for mi in multi_indices(len(ints), top):
                rep.merge(V.integrality_check(mi, ints))
            reports.append(rep)
        else:
            reports.append(V.integrality_suite(3, 2, top))
    if want("transform"):
        top = order or 4
        for gam, b, b1, b2 in TRANSFORM_SETS:
            pert = Perturbation(gam)
            reports.append(V.transform_check(pert, b, b1, b2, top, mode="exact"))
            reports.append(V.transform_check(pert, float(b), float(b1), float(b2), top, mode="numeric",
                                             prec=precision))
    if want("theorem-main-consistency"):
        top = order or 6
        for d in (1, 2, 3):
            reports.append(V.check_main_consistency(d, top, seed=seed))
    if want("twoterm"):
        top = order or 5
        for beta in (Fraction(2), Fraction(3), Fraction(5, 2)):
            reports.append(V.check_twoterm_consistency(beta, top))
    return reports


def cmd_verify(args) -> tuple[dict, int]:
    gammas = None
    if args.spec:
        spec = _load_spec(args)
        gammas = spec.gammas
    try:
        reports = run_verify(args.selector, args.seed, args.M, args.N, args.degree, args.n, args.order,
                             gammas, args.precision)
    except ValueError as e:
        raise SpecError(str(e)) from None
    passed = all(r.passed for r in reports)
    doc = {"command": "verify", "selector": args.selector, "seed": args.seed, "passed": passed,
           "reports": [r.to_json() for r in reports]}
    return doc, EXIT_OK if passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="problem spec JSON file")
    common.add_argument("--order", type=int, help="override max_order")
    common.add_argument("--mode", choices=("exact", "numeric"), help="override the spec mode")
    common.add_argument("--precision", type=int, default=53, help="working precision in bits (numeric mode)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized inputs")
    common.add_argument("--out", help="write JSON here instead of stdout")

    parser = argparse.ArgumentParser(prog="rootseries", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("coeff", parents=[common], help="Taylor coefficient table")
    sub.add_parser("eval", parents=[common], help="series vs Newton at the spec's a-values")
    pv = sub.add_parser("verify", parents=[common], help="run identity checks")
    pv.add_argument("selector", help=" | ".join(SELECTORS))
    pv.add_argument("--M", type=int, help="size for fprod / derivset")
    pv.add_argument("--N", type=int, help="size for nu")
    pv.add_argument("--degree", type=int, help="degree for newton")
    pv.add_argument("--n", type=int, help="order for vandermonde")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"coeff": cmd_coeff, "eval": cmd_eval, "verify": cmd_verify}
    try:
        if args.precision < 53:
            raise SpecError("--precision must be at least 53 bits")
        get_context(args.precision)
        doc, code = handlers[args.command](args)
    except SpecError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except V.TrackingError as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ArithmeticError, ValueError, TypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
