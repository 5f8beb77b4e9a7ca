"""The ``bh`` command line tool.

Exit codes: 0 success / equivalent, 1 negative result (inequivalent, not in
catalog), 2 usage or data error.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .catalog import (
    NotInCatalogError,
    identify,
    load_catalog,
    make_catalog,
    report,
    save_catalog,
)
from .enumeration import classify, print_progress
from .equivalence import are_equivalent
from .families import builtin_family, eval_family, scan_family
from .invariants import fingerprint, haagerup, smith_normal_form
from .matrix import EquivalenceWitness, format_bhm, read_bhm


def _fmt_witness(w: EquivalenceWitness) -> str:
    lines = [
        "row perm:   " + " ".join(str(i + 1) for i in w.row_perm),
        "row phases: " + " ".join(str(p.k) for p in w.row_phases),
        "col phases: " + " ".join(str(p.k) for p in w.col_phases),
        "col perm:   " + " ".join(str(i + 1) for i in w.col_perm),
    ]
    return "\n".join(lines)


def _cmd_enumerate(args) -> int:
    mode = "safe" if args.safe_mode else "pruned"
    records = classify(args.q, args.n, mode=mode, jobs=args.jobs, progress=print_progress)
    cat = make_catalog(args.q, args.n, records, mode)
    if args.out:
        save_catalog(cat, args.out)
        print(f"wrote {len(records)} classes to {args.out}")
    else:
        sys.stdout.write(report(cat))
    return 0


def _cmd_invariants(args) -> int:
    h = read_bhm(args.file)
    chosen = [name for name in ("haagerup", "fingerprint", "snf") if getattr(args, name)]
    if not chosen:
        chosen = ["haagerup", "fingerprint", "snf"]
    if "haagerup" in chosen:
        print("haagerup exponents:", " ".join(str(x) for x in haagerup(h)))
    if "fingerprint" in chosen:
        for d, pairs in fingerprint(h):
            body = "  ".join(f"|m|^2={v} x{c}" for v, c in pairs)
            print(f"minors {d}x{d}: {body}")
    if "snf" in chosen:
        print("snf diagonal:", " ".join(str(z) for z in smith_normal_form(h)))
    return 0


def _cmd_equiv(args) -> int:
    a = read_bhm(args.a)
    b = read_bhm(args.b)
    w = are_equivalent(a, b)
    if w is None:
        print("INEQUIVALENT")
        return 1
    print(_fmt_witness(w))
    return 0


def _cmd_family_eval(args) -> int:
    spec = builtin_family(args.family)
    values = tuple(int(x) for x in args.params.split(","))
    h = eval_family(spec, values)
    text = format_bhm(h, comment=f"{spec.name}({args.params})")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_family_scan(args) -> int:
    spec = builtin_family(args.family)
    cat = load_catalog(args.catalog)
    rep = scan_family(spec, cat, with_transpose=args.with_transpose)
    scope = f"{rep.family_name}" + ("+transpose" if rep.includes_transpose else "")
    print(f"{scope}: {rep.tuples_scanned} tuples scanned, {len(rep.classes_hit)} classes hit")
    for hit in rep.classes_hit:
        via = " (via transpose)" if hit.via_transpose else ""
        print(f"  class {hit.class_id}: params {','.join(map(str, hit.params))}{via}")
    return 0


def _cmd_identify(args) -> int:
    h = read_bhm(args.file)
    cat = load_catalog(args.catalog)
    try:
        class_id, w = identify(h, cat)
    except NotInCatalogError as exc:
        print(f"NOT IN CATALOG: {exc}")
        return 1
    print(f"class {class_id}")
    print("witness from stored representative to input:")
    print(_fmt_witness(w))
    return 0


def _cmd_report(args) -> int:
    cat = load_catalog(args.catalog)
    sys.stdout.write(report(cat))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bh",
        description="Classify, identify and inspect Butson-type complex Hadamard matrices.",
    )
    parser.add_argument("--version", action="version", version=f"bh {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("enumerate", "classify"):
        p = sub.add_parser(name, help="enumerate BH(q,n) classes and write a catalog")
        p.add_argument("--q", type=int, default=4, help="root of unity order (1, 2 or 4)")
        p.add_argument("--n", type=int, required=True, help="matrix order (n = 1 or even n <= 8)")
        p.add_argument("--out", help="output catalog path (default: print the report)")
        p.add_argument("--safe-mode", action="store_true", help="weak pruning plus full dedup")
        p.add_argument("--jobs", type=int, default=1, help="parallel workers")
        p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("invariants", help="print invariants of a .bhm matrix")
    p.add_argument("file")
    p.add_argument("--haagerup", action="store_true")
    p.add_argument("--fingerprint", action="store_true")
    p.add_argument("--snf", action="store_true")
    p.set_defaults(func=_cmd_invariants)

    p = sub.add_parser("equiv", help="decide equivalence of two .bhm matrices")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=_cmd_equiv)

    p = sub.add_parser("family", help="evaluate or scan a built-in parametric family")
    fam_sub = p.add_subparsers(dest="family_command", required=True)
    pe = fam_sub.add_parser("eval", help="evaluate at a tuple of fourth-root exponents")
    pe.add_argument("--family", required=True, help="H4, D6, F8_5, S8_4 or D8B_5")
    pe.add_argument("--params", required=True, help="comma-separated exponents of i, e.g. 0,0,1,1,0")
    pe.add_argument("--out", help="write a .bhm file instead of stdout")
    pe.set_defaults(func=_cmd_family_eval)
    ps = fam_sub.add_parser("scan", help="map all root-of-unity tuples to catalog classes")
    ps.add_argument("--family", required=True)
    ps.add_argument("--catalog", required=True)
    ps.add_argument("--with-transpose", action="store_true")
    ps.set_defaults(func=_cmd_family_scan)

    p = sub.add_parser("identify", help="locate a .bhm matrix in a catalog")
    p.add_argument("file")
    p.add_argument("--catalog", required=True)
    p.set_defaults(func=_cmd_identify)

    p = sub.add_parser("report", help="render a catalog as a table")
    p.add_argument("catalog")
    p.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0
    except (ValueError, LookupError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
