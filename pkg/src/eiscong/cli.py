"""Command-line entry point: ``eiscong verify | eisenstein | screen``.

Exit codes are shared by all subcommands: 0 when nothing failed, 1 when at
least one check failed, 2 on usage or input errors.
"""

import argparse
import csv
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import __version__
from .arith import is_prime
from .corpus import builtin_text, isogeny_classes, load_file, load_text
from .curves import WeierstrassCurve
from .eisenstein import EisensteinSpec, build_E, verify_eigen
from .errors import DenominatorClash, EiscongError, SpecViolation
from .series import reduce_mod
from .verify import Status, VerifyOptions, check_isogeny_invariance, cuspidal_screen, verify_curve

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def jsonable(value):
    """Exact values as JSON: rationals become ``"num/den"`` strings."""
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, Status):
        return value.value
    return value


def claim_to_json(res):
    return {"claim_id": res.claim_id, "r": res.r, "status": res.status.value, "detail": jsonable(res.detail)}


def build_report(argv, reports, extra_claims, errors):
    """Assemble the report document. ``extra_claims`` maps curve index to additional ClaimResults."""
    curves = []
    tally = {s.value: 0 for s in Status}
    for i, rep in enumerate(reports):
        claims = list(rep.results) + list(extra_claims.get(i, []))
        claims.sort(key=lambda c: (c.claim_id, c.r if c.r is not None else 0))
        for c in claims:
            tally[c.status.value] += 1
        curves.append(
            {
                "label": rep.label,
                "coefficients": list(rep.ainvs),
                "conductor": rep.conductor,
                "torsion_order": rep.torsion_order,
                "precision": {str(r): p for r, p in sorted(rep.precision.items())},
                "claims": [claim_to_json(c) for c in claims],
            }
        )
    return {
        "tool_version": __version__,
        "command": list(argv),
        "curves": curves,
        "errors": [{"line": getattr(e, "line", None), "message": str(e)} for e in errors],
        "summary": tally,
    }


def report_schema():
    return json.loads(resources.files("eiscong").joinpath("data/report.schema.json").read_text(encoding="utf-8"))


def validate_report(doc):
    import jsonschema

    jsonschema.validate(doc, report_schema())
    counted = {s.value: 0 for s in Status}
    for curve in doc["curves"]:
        for claim in curve["claims"]:
            counted[claim["status"]] += 1
    if counted != doc["summary"]:
        raise ValueError(f"summary {doc['summary']} does not match listed claims {counted}")


def dump_json(doc):
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_csv(doc, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["label", "claim_id", "r", "status", "detail"])
        for curve in doc["curves"]:
            for claim in curve["claims"]:
                r = "" if claim["r"] is None else claim["r"]
                detail = json.dumps(claim["detail"], sort_keys=True, separators=(",", ":"))
                w.writerow([curve["label"] or "", claim["claim_id"], r, claim["status"], detail])


def parse_ainvs(text):
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise UsageError(f"--curve expects '[a1,a2,a3,a4,a6]', got {text!r}")
    try:
        values = [int(v) for v in body[1:-1].split(",")]
    except ValueError:
        raise UsageError(f"--curve expects integers, got {text!r}") from None
    if len(values) != 5:
        raise UsageError(f"--curve expects 5 coefficients, got {len(values)}")
    return values


def _verify_one(args):
    curve, options = args
    return verify_curve(curve, options)


def cmd_verify(args, argv):
    options = VerifyOptions(prime_bound=args.prime_bound, precision_slack=args.precision_slack)
    errors = []
    if args.curve is not None:
        try:
            curves = [WeierstrassCurve.from_ainvs(parse_ainvs(args.curve), label=args.label)]
        except EiscongError as exc:
            raise UsageError(str(exc)) from exc
        entries = []
    else:
        if args.builtin:
            entries, errors = load_text(builtin_text())
        else:
            path = Path(args.file)
            if not path.is_file():
                raise UsageError(f"no such file: {path}")
            entries, errors = load_file(path)
        curves = [e.curve for e in entries]

    try:
        if args.jobs > 1 and len(curves) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                reports = list(pool.map(_verify_one, [(c, options) for c in curves]))
        else:
            reports = [verify_curve(c, options) for c in curves]
    except EiscongError as exc:
        raise UsageError(str(exc)) from exc

    extra = {}
    for members in isogeny_classes(entries).values():
        first = members[0]
        for other in members[1:]:
            idx = entries.index(other)
            extra.setdefault(idx, []).append(check_isogeny_invariance(first.curve, other.curve))

    doc = build_report(argv, reports, extra, errors)
    validate_report(doc)
    if args.json:
        Path(args.json).write_text(dump_json(doc), encoding="utf-8")
    if args.csv:
        write_csv(doc, args.csv)

    for curve in doc["curves"]:
        statuses = [c["status"] for c in curve["claims"]]
        verdict = "FAIL" if "fail" in statuses else ("ok" if "pass" in statuses else "n/a")
        print(f"{curve['label'] or list(curve['coefficients'])}: N={curve['conductor']} torsion={curve['torsion_order']} {verdict}")
        for c in curve["claims"]:
            if c["status"] == "fail":
                print(f"    {c['claim_id']} r={c['r']}: FAIL {c['detail'].get('witness')}")
    for e in doc["errors"]:
        print(f"input error: {e['message']}", file=sys.stderr)
    s = doc["summary"]
    print(f"summary: {s['pass']} pass, {s['fail']} fail, {s['not_applicable']} not applicable")
    if errors:
        return EXIT_USAGE
    return EXIT_FAIL if s["fail"] else EXIT_OK


def parse_deltas(text, level):
    deltas = {}
    for item in text.split(","):
        p, sep, d = item.strip().partition("=")
        if not sep:
            raise UsageError(f"--deltas expects p=delta pairs, got {item!r}")
        try:
            deltas[int(p)] = int(d)
        except ValueError:
            raise UsageError(f"--deltas expects integers, got {item!r}") from None
    try:
        return EisensteinSpec(level, deltas)
    except SpecViolation as exc:
        raise UsageError(f"invalid Eisenstein data: {exc}") from exc


def _fmt(value):
    return str(value) if not isinstance(value, Fraction) or value.denominator != 1 else str(value.numerator)


def cmd_eisenstein(args, argv):
    spec = parse_deltas(args.deltas, args.level)
    E = build_E(spec, args.prec)
    shown = E
    if args.mod is not None:
        if not is_prime(args.mod):
            raise UsageError(f"--mod must be prime, got {args.mod}")
        try:
            shown = reduce_mod(E, args.mod)
        except DenominatorClash as exc:
            raise UsageError(str(exc)) from exc
    print(", ".join(_fmt(a) for a in shown))
    try:
        checks = verify_eigen(E, spec, args.ell_bound)
    except EiscongError as exc:
        print(f"eigencheck: {exc}")
        return EXIT_OK
    for ch in checks:
        status = "pass" if ch.passed else f"FAIL at q^{ch.first_mismatch}"
        print(f"{ch.operator}_{ch.prime}: eigenvalue {ch.eigenvalue}, checked to q^{ch.checked_precision}: {status}")
    return EXIT_OK if all(ch.passed for ch in checks) else EXIT_FAIL


def cmd_screen(args, argv):
    for name in ("p", "q"):
        if not is_prime(getattr(args, name)):
            raise UsageError(f"--{name} must be prime, got {getattr(args, name)}")
    if args.p == args.q:
        raise UsageError("--p and --q must be distinct")
    rs = [args.r] if args.r is not None else [5, 7]
    for r in rs:
        if not is_prime(r) or r == 2:
            raise UsageError(f"--r must be an odd prime, got {r}")
    for r in rs:
        res = cuspidal_screen(args.p, args.q, r)
        d = res.detail
        print(
            f"r={r}: {d['verdict']} "
            f"(6pq mod {r} = {d['six_pq_mod_r']}, (p^2-1)(q^2-1) mod {r} = {d['cusp_factor_mod_r']})"
        )
    return EXIT_OK


def make_parser():
    parser = argparse.ArgumentParser(prog="eiscong", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run every applicable congruence check on curves")
    src = v.add_mutually_exclusive_group(required=True)
    src.add_argument("--curve", help='a-invariants as "[a1,a2,a3,a4,a6]"')
    src.add_argument("--file", help="corpus file, one curve per line")
    src.add_argument("--builtin", action="store_true", help="use the built-in corpus")
    v.add_argument("--label", help="label for --curve")
    v.add_argument("--json", help="write the JSON report here")
    v.add_argument("--csv", help="write a CSV report here")
    v.add_argument("--prime-bound", type=int, default=1000)
    v.add_argument("--precision-slack", type=int, default=10)
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eisenstein", help="print the Eisenstein eigenseries for a level and delta vector")
    e.add_argument("--level", type=int, required=True)
    e.add_argument("--deltas", required=True, help="comma-separated p=delta_p, e.g. 2=1,7=7")
    e.add_argument("--prec", type=int, default=20)
    e.add_argument("--mod", type=int)
    e.add_argument("--ell-bound", type=int, default=20)
    e.set_defaults(func=cmd_eisenstein)

    s = sub.add_parser("screen", help="rule out torsion primes for conductor p*q")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--r", type=int)
    s.set_defaults(func=cmd_screen)
    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args, argv)
    except UsageError as exc:
        print(f"eiscong: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
