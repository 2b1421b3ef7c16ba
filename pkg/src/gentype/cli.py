"""Command-line interface.

Subcommands:
  certify  -- run the full pipeline on a lattice JSON file and print the
              verdict (exit 0 = GeneralType, 2 = Inconclusive, 1 = error)
  scan     -- bound-mode certification thresholds over a range of n
  fqf      -- finite quadratic form utilities (classify a descriptor)
  volume   -- Hirzebruch-Mumford volume of a signature (2, n) lattice

All file input and output is JSON with exact integers and fraction strings.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import GentypeError
from .fqf import (FiniteQuadraticForm, classify_quasi_cyclic, factorint,
                  is_quasi_cyclic, signature_mod_8)
from .hmvol import vol_hm, volume_terms
from .lattice import lattice_from_json
from .pipeline import certify, range_scan


def _load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _write_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def _cmd_certify(args) -> int:
    cert = certify(_load_json(args.input), mode=args.mode,
                   quasi_cyclic_reduce=args.quasi_cyclic_reduce)
    data = cert.to_json()
    print(f"verdict: {cert.verdict}")
    print(f"n = {cert.n}, |A_L| = {cert.det_size}")
    red = data["reduction"]
    if red is not None and red["applied"]:
        print(f"quasi-cyclic reduction applied: overlattice index "
              f"{red['subgroup_order']}, discriminant "
              f"{red['det_before']} -> {red['det_after']}")
    if data["cusp"] is not None:
        print(f"cusp form: weight {data['cusp']['weight']}, orthogonal "
              f"weight k = {data['cusp']['k']}, division a = {data['a']}")
    ineq = data["inequality"]
    if ineq is not None:
        print(f"obstruction sum <= {ineq['left']['upper']} "
              f"({data['obstruction']['mode']} mode)")
        print(f"bigness threshold: {ineq['right']} -> "
              f"{'holds' if ineq['holds'] else 'fails'}")
    for w in cert.warnings:
        print(f"warning: {w}")
    if args.explain and data["obstruction"] is not None:
        print("obstruction breakdown:")
        for kd in data["obstruction"]["kinds"]:
            line = (f"  {kd['kind']}: {kd['mode']}, "
                    f"classes = {kd['class_count']}")
            if kd["orbit_count"] is not None:
                line += f", orbits = {kd['orbit_count']}"
            if kd["orbit_sum"] is not None:
                line += f", orbit sum = {kd['orbit_sum']}"
            line += f", contribution <= {kd['contribution']['upper']}"
            print(line)
            for orb in kd.get("orbits", ()):
                print(f"    class {orb['class']} (norm {orb['norm']}, "
                      f"div {orb['div']}): orbit size {orb['orbit_size']}, "
                      f"signed count {orb['signed_count']}, "
                      f"group ratio {orb['group_ratio']}, "
                      f"volume ratio {orb['volume_ratio']}")
        print(f"soundness: {data['obstruction']['soundness']}")
    if args.json:
        _write_json(args.json, data)
    return 0 if cert.verdict == "GeneralType" else 2


def _cmd_scan(args) -> int:
    res = range_scan(args.n_from, args.n_to)
    for row in res.rows:
        if row.min_order is None:
            print(f"n = {row.n}: no certifying discriminant order found")
            continue
        thr = float(row.threshold.hi)
        print(f"n = {row.n}: certified once sqrt|A_L| >= {thr:.6g} "
              f"(order {row.min_order}), universal: "
              f"{'yes' if row.universal else 'no'}")
    if res.n0 is not None:
        print(f"universal certification for all n >= {res.n0} in range "
              f"(reference value: {res.reference_n0})")
    else:
        print(f"no n in range is universally certified "
              f"(reference value: {res.reference_n0})")
    if args.json:
        _write_json(args.json, res.to_json())
    return 0


def _cmd_fqf_classify(args) -> int:
    A = FiniteQuadraticForm.from_descriptor(args.descriptor)
    print(f"order {A.order}, invariant factors "
          f"{list(A.invariant_factors())}, signature mod 8: "
          f"{signature_mod_8(A)}")
    for p in sorted(factorint(A.order)):
        ap, _ = A.p_part(p)
        label = classify_quasi_cyclic(ap)
        status = "quasi-cyclic" if label.quasi_cyclic else "not quasi-cyclic"
        case = f" case {label.case}," if label.case is not None else ""
        print(f"p = {p}: {status},{case} {label.detail}")
    print(f"quasi-cyclic: {'yes' if is_quasi_cyclic(A) else 'no'}")
    return 0


def _cmd_volume(args) -> int:
    L = lattice_from_json(_load_json(args.input))
    if args.explain:
        terms = volume_terms(L)
        print(f"n = {terms.n}, |A_L| = {terms.det_size}")
        for p in sorted(terms.jordan):
            print(f"p = {p}: unimodular rank {terms.jordan[p].rank_at(0)}")
        print(f"F factor: {terms.f_term}")
        print(f"G factor: {terms.g_term}")
        if terms.h_term is not None:
            print(f"H factor: {terms.h_term}")
            print(f"fundamental discriminant: {terms.disc_d} "
                  f"(square part {terms.disc_t})")
        print(f"constant term: {terms.c_term!r}")
    v = vol_hm(L)
    print(f"vol = {v.numerator}/{v.denominator}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gentype",
        description="Exact-arithmetic general-type certification for "
                    "orthogonal modular varieties of even lattices 2U + M")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", help="certify general type for 2U + M")
    c.add_argument("--input", required=True, metavar="PATH",
                   help="lattice JSON ({'gram': ...} or {'blocks': ...})")
    c.add_argument("--mode", choices=("exact", "bound", "auto"),
                   default="auto", help="obstruction evaluation mode")
    c.add_argument("--quasi-cyclic-reduce", action="store_true",
                   dest="quasi_cyclic_reduce",
                   help="pass to a quasi-cyclic overlattice first")
    c.add_argument("--explain", action="store_true",
                   help="print the per-kind obstruction breakdown")
    c.add_argument("--json", metavar="PATH",
                   help="write the certificate JSON to this file")
    c.set_defaults(func=_cmd_certify)

    s = sub.add_parser("scan", help="certification thresholds over n")
    s.add_argument("--from", dest="n_from", type=int, required=True,
                   metavar="N", help="first n (at least 15)")
    s.add_argument("--to", dest="n_to", type=int, required=True,
                   metavar="M", help="last n")
    s.add_argument("--json", metavar="PATH",
                   help="write the scan table to this file")
    s.set_defaults(func=_cmd_scan)

    f = sub.add_parser("fqf", help="finite quadratic form utilities")
    fsub = f.add_subparsers(dest="fqf_command", required=True)
    fc = fsub.add_parser("classify",
                         help="order, signature and quasi-cyclic case")
    fc.add_argument("descriptor",
                    help="form descriptor, e.g. 'q(4,-1)+u(1)+a'")
    fc.set_defaults(func=_cmd_fqf_classify)

    v = sub.add_parser("volume",
                       help="Hirzebruch-Mumford volume of a (2, n) lattice")
    v.add_argument("--input", required=True, metavar="PATH")
    v.add_argument("--explain", action="store_true",
                   help="print the local factor breakdown")
    v.set_defaults(func=_cmd_volume)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GentypeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON input ({exc})", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
