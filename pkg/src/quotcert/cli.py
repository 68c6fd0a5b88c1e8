"""Command-line surface: certify, verify, lemma.

Exit codes, never conflated: 0 success, 1 usage or configuration error,
2 mathematical incompleteness (a stuck pipeline) or a verification
mismatch.
"""

from __future__ import annotations

import argparse
import sys

from .certificate import total_class
from .classpoly import ClassPoly
from .counting import InvalidField, default_qs, validate_q
from .document import (
    certificate_to_document,
    document_to_certificate,
    dumps,
    loads,
    render_text,
    validate_document,
    verification_block,
)
from .engine import EngineConfig, certify_quotient, lemma33_class
from .groups import parse_group_spec, verify_presentation
from .verify import verify_certificate

USAGE_ERROR, MATH_ERROR = 1, 2


def _config(args) -> EngineConfig:
    return EngineConfig(search_bound=args.search_bound, p_cap=args.p_cap)


def _parse_qs(text):
    if not text:
        return None
    return [int(x) for x in text.split(",")]


def _emit(doc, args):
    text = dumps(doc) if args.format == "json" else render_text(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_certify(args) -> int:
    try:
        rep = parse_group_spec(args.group, args.p)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    report = verify_presentation(rep)
    if not report.ok:
        print("error: representation failed presentation checks", file=sys.stderr)
        return USAGE_ERROR
    qs = _parse_qs(args.qs)
    if qs is None:
        qs = default_qs(rep.e)
    try:
        for q in qs:
            validate_q(q, rep.e)
    except (InvalidField, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        cert = certify_quotient(rep, _config(args))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    if not cert.complete:
        doc = certificate_to_document(cert)
        _emit(doc, args)
        print(f"stuck at {cert.stuck['stage']}: {cert.stuck['detail']}",
              file=sys.stderr)
        return MATH_ERROR
    report = verify_certificate(cert, qs, rep=rep)
    doc = certificate_to_document(cert, verification=verification_block(report))
    _emit(doc, args)
    if not report.ok:
        print(f"verification mismatch at node {report.first_mismatch}",
              file=sys.stderr)
        return MATH_ERROR
    return 0


def cmd_verify(args) -> int:
    try:
        with open(args.cert, encoding="utf-8") as fh:
            doc = loads(fh.read())
    except (OSError, ValueError) as exc:
        print(f"error: cannot read certificate: {exc}", file=sys.stderr)
        return USAGE_ERROR
    errors = validate_document(doc)
    if errors:
        for e in errors:
            print(f"schema error: {e}", file=sys.stderr)
        return USAGE_ERROR
    cert = document_to_certificate(doc)
    qs = _parse_qs(args.qs)
    if qs is None:
        qs = doc.get("verification", {}).get("qs") if doc.get("verification") else None
    if qs is None:
        qs = default_qs(cert.group["conductor"])
    if not cert.complete:
        print(f"certificate is partial (stuck at {cert.stuck['stage']}); "
              f"structural checks only", file=sys.stderr)
        report = verify_certificate(cert, [])
        return MATH_ERROR
    try:
        for q in qs:
            validate_q(q, cert.group["conductor"])
    except (InvalidField, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        report = verify_certificate(cert, qs)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    if not qs:
        print("no fields tested; structural checks only")
    for r in report.q_results:
        print(f"q={r['q']}: class={r['class_value']} count={r['count']} "
              f"match={r['match']}")
    bad = report.mismatching_nodes()
    for nid, msg in report.structure:
        print(f"structure: node {nid}: {msg}")
    if report.ok:
        print("verification passed")
        return 0
    print(f"verification FAILED; first mismatching node: {report.first_mismatch}")
    for c in report.node_results:
        if not c.match:
            print(f"  node {c.node} ({c.kind}) q={c.q}: class={c.expected} "
                  f"count={c.counted}")
    return MATH_ERROR


def cmd_lemma(args) -> int:
    if args.p < 2 or any(args.p % d == 0 for d in range(2, args.p)):
        print(f"error: p = {args.p} is not prime", file=sys.stderr)
        return USAGE_ERROR
    if args.variant not in ("S", "T"):
        print("error: variant must be S or T", file=sys.stderr)
        return USAGE_ERROR
    try:
        cert = lemma33_class(args.p, args.variant,
                             EngineConfig(search_bound=args.search_bound,
                                          p_cap=args.p_cap))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    cls = total_class(cert)
    print(f"variant {args.variant}, p = {args.p}")
    print(f"class coefficients (low first): {list(cls.coeffs)}")
    print(f"class: {cls}")
    print("strata inventory:")
    for node in cert.walk():
        if node.kind == "arrangement_split":
            print(f"  stratum dim {node.dim}: class {node.cls} "
                  f"({len(node.data['flats'])} flats)")
    qs = _parse_qs(args.qs)
    if qs:
        report = verify_certificate(cert, qs)
        for c in report.node_results:
            if c.kind == "lemma33_strata":
                print(f"  q={c.q}: class={c.expected} burnside={c.counted} "
                      f"match={c.match}")
        if not report.ok:
            return MATH_ERROR
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="quotcert",
        description="Certify monomial p-group quotients as towers of "
                    "torus/affine strata and verify the classes by exact "
                    "point counts over finite fields.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--search-bound", type=int, default=3,
                       help="max-norm bound for splitting/generator searches")
        p.add_argument("--p-cap", type=int, default=7,
                       help="largest supported prime")
        p.add_argument("--qs", default=None,
                       help="comma-separated field sizes (default: three "
                            "smallest valid primes)")

    c = sub.add_parser("certify", help="build and verify a certificate")
    c.add_argument("--group", required=True,
                   help="heisenberg | modular | dihedral8 | quaternion8 | "
                        "semidirect:s | abelian:d1,d2,...")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--out", default=None, help="output path (default stdout)")
    c.add_argument("--format", choices=("json", "text"), default="json")
    common(c)
    c.set_defaults(func=cmd_certify)

    v = sub.add_parser("verify", help="re-verify a certificate document")
    v.add_argument("--cert", required=True, help="path to a JSON certificate")
    common(v)
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("lemma", help="print a torus-cycle stratification class")
    m.add_argument("--variant", required=True, help="S or T")
    m.add_argument("--p", type=int, required=True)
    common(m)
    m.set_defaults(func=cmd_lemma)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
