"""Command-line front end.

Subcommands: gen, mult, a2b, b2a, verify, roundtrip.  Artifacts travel as
interchange files (stdin/stdout or --in/--out); human reports go to stdout
when the artifact is written to a file, to stderr when the artifact itself
occupies stdout.  Exit codes: 0 success, 2 theorem hypothesis unmet or search
exhausted, 3 verification failure, 4 I/O or schema error.
"""

from __future__ import annotations

import argparse
import sys

from . import io as rio
from .backward import build_A, certify_grade_I, search_H
from .complexes import (acyclic_in_grade, be_acyclicity, check_complex,
                        check_selfdual, resolved_ideal)
from .dga import build_multiplication
from .errors import ResfoldError, SchemaError
from .fields import CoefficientField
from .forward import SplittingChoice, build_B, search_C, theorem_AB
from .groebner import ideal_equal
from .matpoly import PolyMatrix
from .poly import PolyRing
from .spinor import build_w, spinor_coordinates

EXIT_OK = 0
EXIT_HYPOTHESIS = 2
EXIT_VERIFY = 3
EXIT_IO = 4


def _field(tag: str) -> CoefficientField:
    return CoefficientField.from_tag(tag)


def _read_input(args) -> rio.Bundle:
    if getattr(args, "infile", None):
        return rio.read_file(args.infile)
    return rio.loads(sys.stdin.read())


def _emit(args, doc: dict):
    text = rio.dumps(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        return sys.stdout
    sys.stdout.write(text)
    return sys.stderr


def _report(stream, text: str):
    stream.write(text.rstrip("\n") + "\n")


def cmd_gen(args) -> int:
    field = _field(args.field)
    from . import examples as ex

    meta = {"generator": args.what, "seed": args.seed}
    if args.what == "gn":
        B, S, frame = ex.gn_complex(args.n, field)
        doc = rio.document(B.ring, B, S, frame, meta=meta | {"n": args.n})
    elif args.what == "split-a":
        ring = PolyRing(field, ("x", "y"))
        A = ex.split_A(args.p, args.q, ring)
        doc = rio.document(ring, A, meta=meta | {"p": args.p, "q": args.q})
    elif args.what == "split-b":
        ring = PolyRing(field, ("x", "y"))
        import random

        phi = None
        if args.random_phi:
            phi = ex.random_alternating(ring, args.p + 2, random.Random(args.seed))
        B, S, frame = ex.split_B(args.p, args.q, ring, phi)
        doc = rio.document(ring, B, S, frame, meta=meta | {"p": args.p, "q": args.q})
    elif args.what == "max-ideal-square":
        A = ex.resolve_square_of_max_ideal(field)
        doc = rio.document(A.ring, A, meta=meta)
    elif args.what == "det-2x4":
        A = ex.generic_2x4_minors(field)
        doc = rio.document(A.ring, A, meta=meta)
    else:
        raise ResfoldError(f"unknown generator {args.what!r}")
    rep = _emit(args, doc)
    _report(rep, f"generated {args.what}")
    return EXIT_OK


def cmd_mult(args) -> int:
    bundle = _read_input(args)
    if bundle.complex is None:
        raise SchemaError("$.complex", "missing complex block")
    m = build_multiplication(bundle.complex)
    doc = rio.document(bundle.ring, bundle.complex, bundle.form, bundle.frame,
                       multiplication=m, meta=bundle.meta)
    rep = _emit(args, doc)
    _report(rep, "multiplication structure built and verified")
    return EXIT_OK


def cmd_a2b(args) -> int:
    bundle = _read_input(args)
    if bundle.complex is None:
        raise SchemaError("$.complex", "missing complex block")
    A = bundle.complex
    m = bundle.multiplication or build_multiplication(A)
    if args.C == "auto":
        s, rep_search = search_C(A, m, budget=args.budget, seed=args.seed)
        if s is None:
            sys.stderr.write(f"{rep_search}\n")
            return EXIT_HYPOTHESIS
    elif args.C == "identity":
        s = SplittingChoice(PolyMatrix.identity(A.ring, A.ranks[3]))
    else:
        sb = rio.read_file(args.C)
        if sb.splitting is None:
            raise SchemaError("$.splitting", "splitting file lacks a splitting block")
        s = SplittingChoice(sb.splitting)
    verdict = theorem_AB(A, m, s, exact=args.exact)
    B, S = build_B(A, m, s)
    doc = rio.document(A.ring, B, S, splitting=s.basis_change,
                       meta={"command": "a2b", "seed": args.seed})
    rep = _emit(args, doc)
    _report(rep, str(verdict))
    if not (verdict.complex_ok and verdict.selfdual_ok):
        return EXIT_VERIFY
    return EXIT_OK if verdict.hypothesis_met else EXIT_HYPOTHESIS


def cmd_b2a(args) -> int:
    bundle = _read_input(args)
    if bundle.complex is None:
        raise SchemaError("$.complex", "missing complex block")
    B = bundle.complex
    if args.H == "paper":
        from .examples import gn_paper_H

        frame = gn_paper_H(B, bundle.form)
    elif args.H == "auto":
        frame, rep_search = search_H(B, budget=args.budget, seed=args.seed,
                                     start=bundle.frame)
        if frame is None:
            sys.stderr.write(f"{rep_search}\n")
            return EXIT_HYPOTHESIS
    elif args.H == "file":
        frame = bundle.frame
        if frame is None:
            raise SchemaError("$.frame", "input file lacks a frame block")
    else:
        fb = rio.read_file(args.H)
        if fb.frame is None:
            raise SchemaError("$.frame", "frame file lacks a frame block")
        frame = fb.frame
    lam = spinor_coordinates(B.d(3), frame, seed=args.seed)
    w = build_w(B, frame, lam)
    A = build_A(B, frame, lam, w)
    verdict = certify_grade_I(A, exact=args.exact)
    doc = rio.document(B.ring, A, frame=frame, spinor=lam, w=w,
                       meta={"command": "b2a", "seed": args.seed})
    rep = _emit(args, doc)
    _report(rep, str(verdict))
    return EXIT_OK if verdict.ok else EXIT_HYPOTHESIS


def cmd_verify(args) -> int:
    bundle = _read_input(args)
    if bundle.complex is None:
        raise SchemaError("$.complex", "missing complex block")
    F = bundle.complex
    rep = sys.stdout
    if args.level == "complex":
        r = check_complex(F)
        _report(rep, str(r))
        return EXIT_OK if r.ok else EXIT_VERIFY
    if args.level == "selfdual":
        if bundle.form is None:
            raise SchemaError("$.form", "verify --level selfdual needs a form block")
        r = check_complex(F)
        ok = r.ok and check_selfdual(F, bundle.form)
        _report(rep, str(r))
        _report(rep, f"self-duality: {'ok' if ok else 'FAIL'}")
        return EXIT_OK if ok else EXIT_VERIFY
    if args.level == "grade2":
        r = acyclic_in_grade(F, 2, exact=args.exact)
        _report(rep, str(r))
        return EXIT_OK if r.acyclic else EXIT_VERIFY
    if args.level == "acyclic":
        r = be_acyclicity(F, exact=args.exact)
        _report(rep, str(r))
        return EXIT_OK if r.acyclic else EXIT_VERIFY
    raise ResfoldError(f"unknown level {args.level!r}")


def cmd_roundtrip(args) -> int:
    """Unfold along a frame, refold along the distinguished splitting, and
    compare the resolved ideals."""
    bundle = _read_input(args)
    if bundle.complex is None:
        raise SchemaError("$.complex", "missing complex block")
    B = bundle.complex
    if args.H == "paper":
        from .examples import gn_paper_H

        frame = gn_paper_H(B, bundle.form)
    elif bundle.frame is not None and args.H == "file":
        frame = bundle.frame
    else:
        frame, rep_search = search_H(B, budget=args.budget, seed=args.seed,
                                     start=bundle.frame)
        if frame is None:
            sys.stderr.write(f"{rep_search}\n")
            return EXIT_HYPOTHESIS
    lam = spinor_coordinates(B.d(3), frame, seed=args.seed)
    w = build_w(B, frame, lam)
    A = build_A(B, frame, lam, w)
    m = build_multiplication(A)
    s = SplittingChoice(PolyMatrix.identity(A.ring, A.ranks[3]))
    B2, S2 = build_B(A, m, s)
    doc = rio.document(B.ring, B2, S2, meta={"command": "roundtrip", "seed": args.seed})
    rep = _emit(args, doc)
    same = ideal_equal(resolved_ideal(B2), resolved_ideal(B))
    _report(rep, f"resolved ideal recovered: {'yes' if same else 'NO'}")
    return EXIT_OK if same else EXIT_VERIFY


def _global_flags(parser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--field", default=d("q"), help="q (rationals) or fp:P (odd prime P)")
    parser.add_argument("--seed", type=int, default=d(0))
    parser.add_argument("--budget", type=int, default=d(25))
    parser.add_argument("--out", default=d(None), help="artifact file (default stdout)")
    parser.add_argument("--in", dest="infile", default=d(None), help="input file (default stdin)")
    parser.add_argument("--exact", action="store_true", default=d(False),
                        help="exact grades everywhere (no lower-bound certificates)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="resfold",
                                 description="fold grade-3 resolutions into self-dual "
                                             "length-4 resolutions and back, exactly")
    _global_flags(ap, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="example generators", parents=[common])
    g.add_argument("what", choices=["gn", "split-a", "split-b", "max-ideal-square", "det-2x4"])
    g.add_argument("--n", type=int, default=3)
    g.add_argument("--p", type=int, default=1)
    g.add_argument("--q", type=int, default=3)
    g.add_argument("--random-phi", action="store_true")
    g.set_defaults(func=cmd_gen)

    m = sub.add_parser("mult", help="build the multiplication structure", parents=[common])
    m.set_defaults(func=cmd_mult)

    a = sub.add_parser("a2b", help="fold: length-3 resolution to self-dual length-4",
                       parents=[common])
    a.add_argument("--C", default="auto", help="auto | identity | splitting-file")
    a.set_defaults(func=cmd_a2b)

    b = sub.add_parser("b2a", help="unfold: self-dual length-4 to length-3",
                       parents=[common])
    b.add_argument("--H", default="auto", help="auto | paper | file | frame-file")
    b.set_defaults(func=cmd_b2a)

    v = sub.add_parser("verify", help="verification report", parents=[common])
    v.add_argument("--level", default="acyclic",
                   choices=["complex", "selfdual", "grade2", "acyclic"])
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("roundtrip", help="unfold then refold, compare resolved ideals",
                       parents=[common])
    r.add_argument("--H", default="file", help="paper | file | auto")
    r.set_defaults(func=cmd_roundtrip)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        sys.stderr.write(f"schema error: {exc}\n")
        return EXIT_IO
    except OSError as exc:
        sys.stderr.write(f"io error: {exc}\n")
        return EXIT_IO
    except ResfoldError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
