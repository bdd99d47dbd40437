"""tvlab command line: gap scans, distances, and the verification suites.

Examples
--------
  tvlab scan --variety line.json --prime 7 --max-order 60 --max-p-level 2 --out scan.csv
  tvlab distance --variety line.json --point 1/3,1/2 --prime 7
  tvlab mattuck --prime 5 --max-order 100
  tvlab boxall --module 9 --action '[[[4]]]' --point 1
  tvlab zcore --subscheme mu3.json --poly 'T^2 - T - 1'
  tvlab polyid --target 'T - 1' --gen '(T - 1)^3' --gen 'T^3 - 1'
  tvlab frobcheck --field p=5 --curve a4=1,a6=0 --degree 3
  tvlab habegger --prime 3 --n-max 6
  tvlab verify-all --quick
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import sympy

from .boxall import BoxallResult, FiniteModule, GaloisAction, boxall_construct, boxall_oracle
from .cosets import TorsionSubscheme, torsion_core
from .cyclo import format_point, parse_point
from .galois_poly import boxall_congruence, minimal_multiplier, tame_membership
from .intpoly import IntPolynomial
from .local_field import DEFAULT_PRECISION
from .scan import FILTERS, demo_habegger, point_distance, scan_gap
from .special_fibre import EllipticCurveFq, ec_frobenius_annihilate, ec_point_count, gm_frobenius_identity, parse_curve_spec
from .torus import Subvariety, mattuck_gap, tower_for
from .verify import summary_json, verify_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_poly(text: str) -> IntPolynomial:
    """Integer polynomial in T, e.g. ``"T^2 - T - 1"`` or ``"(T-1)^3"``."""
    T = sympy.Symbol("T")
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals={"T": T})
        poly = sympy.Poly(expr, T)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
        raise UsageError(f"cannot parse polynomial {text!r}: {exc}") from exc
    coeffs = poly.all_coeffs()[::-1]
    if any(not c.is_integer for c in coeffs):
        raise UsageError(f"polynomial {text!r} must have integer coefficients")
    return IntPolynomial([int(c) for c in coeffs])


def _load_json(arg: str):
    """Inline JSON or a path to a JSON file."""
    path = Path(arg)
    try:
        text = path.read_text() if path.exists() else arg
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {arg!r}: {exc}") from exc


def _load_variety(arg: str) -> Subvariety:
    try:
        return Subvariety.from_json(_load_json(arg))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# subcommands

def cmd_scan(args) -> int:
    X = _load_variety(args.variety)
    report = scan_gap(X, args.prime, args.max_order, args.precision, filter=args.filter,
                      max_p_level=args.max_p_level, max_tame_order=args.max_tame_order,
                      all_embeddings=args.all_embeddings, workers=args.workers)
    if args.format == "csv":
        _emit(report.to_csv().rstrip("\n"), args.out)
        if args.out:
            Path(args.out).with_suffix(".json").write_text(report.to_json() + "\n")
            print(report.to_json())
    else:
        _emit(report.to_json(), args.out)
    return EXIT_OK


def cmd_distance(args) -> int:
    X = _load_variety(args.variety)
    try:
        P = parse_point(args.point)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if len(P) != X.n:
        raise UsageError(f"point has {len(P)} coordinates, variety lives in G_m^{X.n}")
    spec = tower_for(P, X, args.prime, args.precision)
    d = point_distance(P, X, args.prime, spec, args.all_embeddings)
    out = {"point": format_point(P), "prime": args.prime, "level": spec.level,
           "ramification": spec.e, "residue_degree": spec.f, "distance": str(d),
           "kind": d.kind, "value": None if d.value is None else str(d.value)}
    _emit(json.dumps(out, indent=2), args.out)
    return EXIT_OK


def cmd_mattuck(args) -> int:
    r = mattuck_gap(args.prime, args.dim, args.max_order, args.precision)
    gap = None if r.gap.value is None else str(r.gap.value)
    out = {"prime": r.p, "n": r.n, "order_bound": r.bound, "gap": gap, "gap_kind": r.gap.kind,
           "witness": [format_point(P) for P in r.witness], "points": r.points,
           "reduction_classes": r.kernel_classes, "kernel_pairs": r.kernel_pairs}
    _emit(json.dumps(out, indent=2), args.out)
    return EXIT_OK


def _boxall_json(r: BoxallResult) -> dict:
    return {"n": r.n, "sigma1_word": list(r.sigma1_word), "sigma1": r.sigma1.matrix,
            "sigma": r.sigma.matrix, "x": list(r.x), "trace": [list(x) for x in r.trace]}


def cmd_boxall(args) -> int:
    try:
        A = FiniteModule.parse(args.module)
        action = GaloisAction.from_json(A, _load_json(args.action))
        Q = tuple(int(c) for c in args.point.split(","))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    r = boxall_construct(A, action, Q)
    out = {"module": list(A.orders), "Q": list(Q), "construction": _boxall_json(r)}
    ok = True
    if args.oracle:
        found = boxall_oracle(A, action, Q)
        out["oracle"] = [{"sigma": g.matrix, "x": list(x)} for g, x in found]
        ok = any(g.matrix == r.sigma.matrix and x == r.x for g, x in found)
    _emit(json.dumps(out, indent=2), args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_zcore(args) -> int:
    try:
        X = TorsionSubscheme.from_json(_load_json(args.subscheme), args.dim)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad subscheme: {exc}") from exc
    F = parse_poly(args.poly)
    try:
        r = torsion_core(X, F)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = {"F": str(F), "ambient": X.n * int(F.degree), "components": r.Z.to_json(),
           "component_count": len(r.Z), "preimage_steps": r.preimage_steps, "image_steps": r.image_steps}
    _emit(json.dumps(out, indent=2), args.out)
    return EXIT_OK


def cmd_polyid(args) -> int:
    out = {}
    ok = True
    if args.target:
        if not args.gen:
            raise UsageError("--target needs at least one --gen")
        cert = minimal_multiplier(parse_poly(args.target), [parse_poly(g) for g in args.gen])
        out["multiplier"] = {"c": cert.multiplier, "identity": str(cert),
                             "cofactors": [str(c) for c in cert.cofactors], "verified": cert.verify()}
        ok &= cert.verify()
    if args.tame:
        tm = tame_membership(args.tame)
        out["tame"] = {"q": tm.q, "claimed": tm.claimed, "minimal": tm.certificate.multiplier,
                       "identity": str(tm.claimed_certificate), "verified": tm.claimed_certificate.verify(),
                       "printed_identity_balances": tm.printed["balances"]}
        ok &= tm.claimed_certificate.verify()
    if args.congruence:
        qm = boxall_congruence(args.congruence)
        out["congruence"] = {"m": args.congruence, "quotient": str(qm)}
    if not out:
        raise UsageError("give --target/--gen, --tame or --congruence")
    _emit(json.dumps(out, indent=2), args.out)
    return EXIT_OK if ok else EXIT_FAIL


def _field_q(text: str) -> int:
    try:
        kv = dict(part.split("=") for part in text.replace(" ", "").split(","))
        return int(kv["p"]) ** int(kv.get("f", 1))
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad field spec {text!r}; expected p=5,f=1") from exc


def cmd_frobcheck(args) -> int:
    q = _field_q(args.field)
    if args.curve:
        try:
            a4, a6 = parse_curve_spec(args.curve)
            E = EllipticCurveFq(q, a4, a6)
        except (KeyError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
        w = ec_point_count(E)
        rows = [ec_frobenius_annihilate(E, r) for r in range(1, args.degree + 1)]
        ok = all(r["ok"] and r["points"] == r["expected_points"] for r in rows) and w.hasse_ok
        out = {"q": q, "count": w.count, "trace": w.trace, "F0": str(w.F0), "hasse": w.hasse_ok,
               "extensions": [{k: v for k, v in r.items() if k != "counterexample"} for r in rows]}
    else:
        rows = [gm_frobenius_identity(q, r) for r in range(1, args.degree + 1)]
        ok = all(r["ok"] for r in rows)
        out = {"q": q, "gm": rows}
    _emit(json.dumps(out, indent=2, default=str), args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_habegger(args) -> int:
    rows = demo_habegger(args.prime, args.n_max)
    if args.format == "json":
        _emit(json.dumps([{**r.__dict__, "v_tower": str(r.v_tower)} for r in rows], indent=2), args.out)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("n", "exponent", "v_exact", "v_tower", "digits_agree"))
        for r in rows:
            w.writerow((r.n, r.exponent, r.v_exact, r.v_tower, r.digits_agree))
        _emit(buf.getvalue().rstrip("\n"), args.out)
    return EXIT_OK if all(r.ok for r in rows) else EXIT_FAIL


def cmd_verify_all(args) -> int:
    summary = verify_all(args.quick)
    for c in summary["criteria"]:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"[{status}] {c['number']}. {c['name']} ({c['seconds']:.2f}s)", file=sys.stderr)
    text = summary_json(summary)
    _emit(text, args.out)
    return EXIT_OK if summary["passed"] else EXIT_FAIL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tvlab", description=__doc__.split("\n")[0],
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, prime=True):
        if prime:
            p.add_argument("--prime", type=int, required=True)
        p.add_argument("--precision", type=int, default=DEFAULT_PRECISION,
                       help="p-adic precision N of the tower (default %(default)s)")
        p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("scan", help="gap scan of torsion points against a subvariety")
    p.add_argument("--variety", required=True, help="subvariety JSON (file or inline)")
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--max-p-level", type=int)
    p.add_argument("--max-tame-order", type=int)
    p.add_argument("--filter", choices=FILTERS, default="all")
    p.add_argument("--all-embeddings", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("distance", help="distance from one torsion point to a subvariety")
    p.add_argument("--variety", required=True)
    p.add_argument("--point", required=True, help="coordinates as c/m, comma separated")
    p.add_argument("--all-embeddings", action="store_true")
    common(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("mattuck", help="smallest nonzero distance between torsion points")
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--dim", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_mattuck)

    p = sub.add_parser("boxall", help="construct sigma with (sigma - 1)Q in A[p] - 0")
    p.add_argument("--module", required=True, help='cyclic orders, e.g. "3^2,3" or "9,3"')
    p.add_argument("--action", required=True, help="JSON list of generator matrices")
    p.add_argument("--point", required=True, help="Q as comma-separated integers")
    p.add_argument("--oracle", action="store_true", help="also enumerate the whole group")
    p.add_argument("--out")
    p.set_defaults(func=cmd_boxall)

    p = sub.add_parser("zcore", help="the Frobenius-stable core Z of X^d")
    p.add_argument("--subscheme", required=True, help="JSON list of cosets (file or inline)")
    p.add_argument("--poly", required=True, help="monic F in T")
    p.add_argument("--dim", type=int, help="ambient dimension when the list is empty")
    p.add_argument("--out")
    p.set_defaults(func=cmd_zcore)

    p = sub.add_parser("polyid", help="polynomial ideal certificates")
    p.add_argument("--target")
    p.add_argument("--gen", action="append")
    p.add_argument("--tame", type=int, help="prime power q for the (T-1)^3, T^q - 1 certificate")
    p.add_argument("--congruence", type=int, help="m for the (T-1)^3 congruence of T^m - 1")
    p.add_argument("--out")
    p.set_defaults(func=cmd_polyid)

    p = sub.add_parser("frobcheck", help="Frobenius identities on G_m or an elliptic curve")
    p.add_argument("--field", required=True, help='"p=5,f=1"')
    p.add_argument("--curve", help='"a4=1,a6=0"; omit for G_m')
    p.add_argument("--degree", type=int, default=1, help="check over F_{q^r} for r = 1..degree")
    p.add_argument("--out")
    p.set_defaults(func=cmd_frobcheck)

    p = sub.add_parser("habegger", help="v_p(2^((p-1)p^(n-1)) - 1) table")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_habegger)

    p = sub.add_parser("verify-all", help="run the acceptance suite")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_all)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tvlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"tvlab: check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"tvlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
