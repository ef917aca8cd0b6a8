"""Command-line entry point: ``gfermat <subcommand> ...``.

Exit codes: 0 success, 2 usage error, 3 data error, 4 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_MISMATCH = 4

SCHEMA_REF = "gfermat.eigenforms.EIGENFORM_SCHEMA (print it with: gfermat ingest --print-schema)"


class DataError(Exception):
    pass


class Mismatch(Exception):
    pass


def _threads(args):
    from .modularity import default_workers

    return getattr(args, "threads", None) or default_workers()


def _int_list(text):
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _emit(args, command, params, body, lines, t0):
    for line in lines:
        print(line)
    if args.report:
        from .reports import write_report

        m = write_report(args.report, command, params, body, time.time() - t0)
        print(f"report written to {args.report} (sha256 {m.output_digest[:16]})")


# -- subcommands ----------------------------------------------------------


def cmd_modularity_scan(args, t0):
    from .modularity import failing_conductors, scan_conductors

    reps = scan_conductors(args.max_n, singles_only=args.paper_exact, workers=_threads(args))
    fails = failing_conductors(reps)
    lines = [f"{r.conductor}, {r.s5_size}, {r.verdict}, {[list(S) for S in r.failing_subsets]}" for r in reps]
    lines.append(f"failing conductors: {fails}")
    body = {"reports": [r.to_dict() for r in reps], "failing": fails}
    _emit(args, "modularity-scan", {"max_n": args.max_n, "singles_only": args.paper_exact}, body, lines, t0)
    return EXIT_OK


def cmd_bounds(args, t0):
    from .cyclotomic import is_prime
    from .irreducibility import SUPPORTED_PRIMES, attained_values, bound_products

    if args.p not in SUPPORTED_PRIMES:
        why = "is not prime" if not is_prime(args.p) else "is not supported"
        raise argparse.ArgumentTypeError(f"--p {args.p} {why}; choose from {SUPPORTED_PRIMES}")
    reps = bound_products(args.p, basis=args.basis)
    lines = [f"|D|={r.subgroup_order} subset={list(r.subset)} gcd={r.gcd}" for r in reps]
    vals = attained_values(reps)
    lines.append(f"attained gcd values: {vals}")
    body = {"reports": [r.to_dict() for r in reps], "attained": vals}
    _emit(args, "bounds", {"p": args.p, "basis": args.basis}, body, lines, t0)
    return EXIT_OK


def cmd_frey(args, t0):
    from .frey import DescentError, DescentInstance, check_conductor_shape, frey_triple
    from .verify import frey_sweep, shape_configs

    if args.p not in (5, 7, 11, 13):
        raise argparse.ArgumentTypeError("--p must be one of 5, 7, 11, 13")
    if args.a is not None or args.b is not None:
        if args.a is None or args.b is None or args.ell is None:
            raise argparse.ArgumentTypeError("--a, --b and --ell must be given together")
        try:
            inst = DescentInstance(args.p, args.a, args.b, args.ell, args.case, args.n, args.kappa)
            rows = []
            for j, k, tw in shape_configs(args.p, args.case):
                rep = check_conductor_shape(inst, frey_triple(inst, j, k, tw))
                rows.append(dict(rep.to_dict(), j=j, k=k, twisted=tw))
        except DescentError as exc:
            raise DataError(str(exc)) from None
        lines = [json.dumps(r, sort_keys=True) for r in rows]
        ok = all(r["ok"] for r in rows)
        body = {"instances": rows}
    else:
        checked, bad = frey_sweep(args.p, args.case, args.instances, args.seed)
        ok = not bad
        lines = [f"{checked} curves checked, {len(bad)} failures"] + [str(b) for b in bad]
        body = {"checked": checked, "failures": [list(b) for b in bad]}
    params = {k: getattr(args, k) for k in ("p", "case", "a", "b", "ell", "n", "kappa", "instances", "seed")}
    _emit(args, "frey", params, body, lines, t0)
    if not ok:
        raise Mismatch("Frey curve conductor shape")
    return EXIT_OK


def resolve_eigenform(path):
    """Path as given, with a .json suffix, or relative to the packaged data directory."""
    from importlib import resources

    p = Path(path)
    for cand in (p, p.with_suffix(".json")):
        if cand.is_file():
            return cand
    pkg = resources.files("gfermat")
    for cand in (pkg / path, pkg / f"{path}.json", pkg / "data" / p.name, pkg / "data" / f"{p.name}.json"):
        if cand.is_file():
            return cand
    raise DataError(f"eigenform file {path!r} not found; expected a JSON file matching {SCHEMA_REF}")


def cmd_sieve(args, t0):
    from .eigenforms import EigenformDataError, ingest_eigenform
    from .sieve import SieveError, b_s, default_S, format_factored

    if not args.eigenform:
        raise DataError(f"sieve needs eigenform data: pass --eigenform FILE matching {SCHEMA_REF}")
    path = resolve_eigenform(args.eigenform)
    try:
        S = args.S or list(default_S(args.p, args.case))
        f = ingest_eigenform(path, S)
        if args.p is not None and args.p != f.p:
            raise DataError(f"--p {args.p} disagrees with eigenform base field p = {f.p}")
        rep = b_s(f, S, args.case, args.j, args.k, workers=_threads(args))
    except (EigenformDataError, SieveError) as exc:
        raise DataError(str(exc)) from None
    lines = [f"eigenform {rep.label} over {rep.variant}(p={rep.p}), case {rep.case}, (j,k)=({rep.j},{rep.k})"]
    lines.append(f"{'q':>6}  {'#classes':>8}  {'split':>5}  B_q(f)")
    for r in rep.per_q:
        lines.append(f"{r.q:>6}  {r.class_count:>8}  {r.split_nodes:>5}  {'0' if r.zero else format_factored(r.factored)}")
    lines.append(f"B_S(f) = {rep.b_s} = {format_factored(rep.b_s_factored) if rep.b_s else '0'}")
    if rep.no_bound:
        lines.append("no exponent bound from S")
    else:
        lines.append(f"surviving exponents: {rep.surviving_exponents}")
    params = {"p": rep.p, "case": rep.case, "j": rep.j, "k": rep.k, "eigenform": str(args.eigenform), "S": list(S)}
    _emit(args, "sieve", params, rep.to_dict(), lines, t0)
    return EXIT_OK


def cmd_ingest(args, t0):
    from .eigenforms import EIGENFORM_SCHEMA, EigenformDataError, FetchError, fetch_eigenform, from_json, ingest_eigenform, write_eigenform

    if args.print_schema:
        print(json.dumps(EIGENFORM_SCHEMA, indent=1, sort_keys=True))
        return EXIT_OK
    try:
        if args.fetch:
            if not args.endpoint or args.p is None:
                raise argparse.ArgumentTypeError("--fetch needs --endpoint and --p")
            try:
                obj = fetch_eigenform(args.fetch, args.endpoint, args.p, args.variant)
            except FetchError as exc:
                kind = "retriable" if exc.retriable else "permanent"
                raise DataError(f"fetch failed ({kind}): {exc}") from None
            data = from_json(obj)
            out = args.out or f"{args.fetch}.json"
            write_eigenform(data, out)
            lines = [f"wrote {out}: {len(data.eigenvalues)} eigenvalues"]
        elif args.file:
            data = ingest_eigenform(resolve_eigenform(args.file), args.require or ())
            lines = [f"{data.label}: p={data.p} {data.variant}, level {data.level}, degree {data.hecke_degree}, {len(data.eigenvalues)} eigenvalues, primes {data.primes_present()}"]
        else:
            raise argparse.ArgumentTypeError("give a FILE, --fetch LABEL or --print-schema")
    except EigenformDataError as exc:
        raise DataError(str(exc)) from None
    _emit(args, "ingest", {"file": args.file, "fetch": args.fetch}, data.to_json(), lines, t0)
    return EXIT_OK


def cmd_heuristic(args, t0):
    from .sieve import heuristic_success

    try:
        val = heuristic_success(args.q, args.d, args.r, args.c)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    params = {"q": args.q, "d": args.d, "r": args.r, "c": args.c}
    _emit(args, "heuristic", params, {"P": repr(val)}, [f"P_q ~ {val:.6g}"], t0)
    return EXIT_OK


def cmd_verify_all(args, t0):
    from .verify import run_all

    results = run_all(_threads(args))
    lines = [r.line() for r in results]
    failed = [r.anchor for r in results if not r.ok]
    lines.append(f"{len(results) - len(failed)}/{len(results)} anchors pass")
    _emit(args, "verify-all", {}, {"checks": [r.to_dict() for r in results]}, lines, t0)
    if failed:
        raise Mismatch(", ".join(failed))
    return EXIT_OK


# -- parser ---------------------------------------------------------------


def build_parser():
    from .frey import CASES
    from .irreducibility import BASES

    parser = argparse.ArgumentParser(prog="gfermat", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", metavar="PATH", help="write a JSON report (plus manifest) here")
    common.add_argument("--threads", type=_positive, help="worker processes (default: $GFERMAT_THREADS or 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("modularity-scan", parents=[common], help="check the unit-norm criterion for every conductor")
    p.add_argument("--max-n", type=int, default=100)
    p.add_argument("--paper-exact", action="store_true", help="single-unit witnesses only")
    p.set_defaults(func=cmd_modularity_scan)

    p = sub.add_parser("bounds", parents=[common], help="subgroup norm bounds for p in {5,7,11,13}")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--basis", choices=BASES, default="lattice")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("frey", parents=[common], help="check Frey curve discriminant valuations")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--case", choices=CASES, default=CASES[0])
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--kappa", type=int, default=0)
    p.add_argument("--instances", type=_positive, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_frey)

    p = sub.add_parser("sieve", parents=[common], help="elimination bound B_S(f) for an eigenform")
    p.add_argument("--p", type=int)
    p.add_argument("--case", choices=CASES)
    p.add_argument("--j", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--eigenform", metavar="FILE")
    p.add_argument("--S", type=_int_list, help="comma-separated primes, e.g. 3,5,31,47")
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("ingest", parents=[common], help="validate or fetch eigenform data")
    p.add_argument("file", nargs="?")
    p.add_argument("--require", type=_int_list, help="primes whose eigenvalues must be present")
    p.add_argument("--fetch", metavar="LABEL")
    p.add_argument("--endpoint", metavar="URL")
    p.add_argument("--p", type=int)
    p.add_argument("--variant", choices=("K", "Kprime"), default="K")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--print-schema", action="store_true")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("heuristic", parents=[common], help="sieve success estimate")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.set_defaults(func=cmd_heuristic)

    p = sub.add_parser("verify-all", parents=[common], help="run every reproduction check")
    p.set_defaults(func=cmd_verify_all)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.time()
    try:
        return args.func(args, t0)
    except argparse.ArgumentTypeError as exc:
        parser.print_usage(sys.stderr)
        print(f"gfermat {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"gfermat {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Mismatch as exc:
        print(f"gfermat {args.command}: verification mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
