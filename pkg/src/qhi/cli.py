"""Command-line interface: ``qhi <command> [--in FILE]``.

Elements and reports are JSON documents (see :mod:`qhi.io`); input defaults
to stdin and output goes to stdout, so commands compose with pipes::

    qhi random --kind elliptic --n 3 --seed 1 | qhi reverse | qhi verify

Exit codes: 0 success (or verdict true / verification passed), 1 verdict
false or verification failed, 2 element not in its group, 3 ill-conditioned,
4 malformed input, 5 unsupported (odd dimension, wrong model, bad recipe).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import io
from .classify import classify
from .errors import BadRecipe, DimensionMismatch, IllConditioned, NotInGroup, OddDimension, QHIError, WrongModel
from .generators import KIND_NAMES, ElementRecipe, random_element
from .qmatrix import DEFAULT_TOL, Form
from .reversibility import (ReversibilityReport, four_involution_factorization, projective_reverser,
                            reverse, strong_reversibility, verify_report)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_NOT_IN_GROUP = 2
EXIT_ILL = 3
EXIT_MALFORMED = 4
EXIT_UNSUPPORTED = 5


def _tol(args) -> float:
    if args.tol is not None:
        return args.tol
    env = os.environ.get("QHI_TOL")
    return float(env) if env else DEFAULT_TOL


def _emit(args, doc) -> None:
    if not args.quiet:
        sys.stdout.write(json.dumps(doc, indent=args.json_indent) + "\n")


def _element(args):
    return io.element_of(io.read_document(args.input))


def cmd_classify(args) -> int:
    g = _element(args)
    cls = classify(g, _tol(args))
    _emit(args, cls.to_json())
    return EXIT_OK


def cmd_reverse(args) -> int:
    g = _element(args)
    tol = _tol(args)
    report = projective_reverser(g, tol) if args.projective else reverse(g, tol)
    _emit(args, report.to_json())
    return EXIT_OK


def cmd_witness(args) -> int:
    g = _element(args)
    report = strong_reversibility(g, _tol(args))
    _emit(args, report.to_json())
    return EXIT_OK if report.strongly_reversible else EXIT_FALSE


def cmd_factor(args) -> int:
    g = _element(args)
    if g.form is not Form.POSITIVE:
        raise WrongModel("factor works on elements of Sp(n) only")
    _emit(args, four_involution_factorization(g, _tol(args)).to_json())
    return EXIT_OK


def _verify_doc(doc: dict, tol: float) -> dict:
    try:
        report = ReversibilityReport.from_json(doc)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, QHIError) and not isinstance(e, DimensionMismatch):
            raise
        raise io.MalformedDocument(f"bad report: {e}") from None
    return verify_report(report, tol=tol).to_json()


def _load_report(text: str) -> dict:
    doc = io.loads(text)
    if not isinstance(doc, dict) or "element" not in doc:
        raise io.MalformedDocument("not a report document (no 'element' key)")
    return doc


def cmd_verify(args) -> int:
    tol = _tol(args)
    if args.dir:
        results = []
        for path in sorted(Path(args.dir).glob("*.json")):
            try:
                res = _verify_doc(_load_report(path.read_text()), tol)
            except QHIError as e:
                res = {"passed": False, "error": str(e)}
            results.append({"file": path.name, **res})
        out = {"passed": all(r["passed"] for r in results), "files": results}
    else:
        doc = io.read_document(args.input)
        if "element" not in doc:
            raise io.MalformedDocument("not a report document (no 'element' key)")
        out = _verify_doc(doc, tol)
    _emit(args, out)
    return EXIT_OK if out["passed"] else EXIT_FALSE


def cmd_random(args) -> int:
    params = {}
    if args.params:
        try:
            params = json.loads(args.params)
        except json.JSONDecodeError as e:
            raise io.MalformedDocument(f"--params is not JSON: {e}") from None
        if not isinstance(params, dict):
            raise io.MalformedDocument("--params must be a JSON object")
    model = Form(args.model) if args.model else None
    conjugate = None if args.conjugate is None else args.conjugate == "yes"
    recipe = ElementRecipe(args.kind, args.n, args.seed, params, conjugate, model)
    gen = random_element(recipe)
    _emit(args, io.element_to_json(gen.element, gen.provenance()))
    return EXIT_OK


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # the flags are accepted before or after the subcommand; the subcommand
    # copy must not overwrite a value given before it
    parent = argparse.ArgumentParser(add_help=False)
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parent.add_argument("--tol", type=float, default=default(None),
                        help=f"membership tolerance (default {DEFAULT_TOL:g} or $QHI_TOL)")
    parent.add_argument("--json-indent", type=int, default=default(None), help="pretty-print output JSON")
    parent.add_argument("--quiet", action="store_true", default=default(False),
                        help="print nothing; rely on the exit code")
    return parent


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    p = argparse.ArgumentParser(prog="qhi", description=__doc__.splitlines()[0],
                                parents=[_global_flags(suppress=False)])
    sub = p.add_subparsers(dest="command", required=True)

    def with_input(name, func, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.add_argument("--in", dest="input", default="-", help="input JSON file ('-' for stdin)")
        sp.set_defaults(func=func)
        return sp

    with_input("classify", cmd_classify, "classify an element and print its normal form")
    rv = with_input("reverse", cmd_reverse, "construct a reverser")
    rv.add_argument("--projective", action="store_true", help="reverser squaring to +-I")
    with_input("witness", cmd_witness, "decide strong reversibility; exit 0 true, 1 false")
    with_input("factor", cmd_factor, "four-involution factorization in Sp(2m)")
    vf = with_input("verify", cmd_verify, "re-check every residual in a report")
    vf.add_argument("--dir", default=None, help="verify every *.json report in a directory")

    rd = sub.add_parser("random", parents=[common], help="seeded random element")
    rd.add_argument("--kind", required=True, choices=KIND_NAMES)
    rd.add_argument("--n", type=int, required=True, help="group parameter: Sp(n) or Sp(n,1)")
    rd.add_argument("--seed", type=int, default=0)
    rd.add_argument("--params", default=None, help='JSON object, e.g. \'{"s": [0, 1, 0, 0]}\'')
    rd.add_argument("--model", choices=[f.value for f in Form], default=None)
    rd.add_argument("--conjugate", choices=["yes", "no"], default=None,
                    help="conjugate the normal form (default: only without --params)")
    rd.set_defaults(func=cmd_random)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except io.MalformedDocument as e:
        code, msg = EXIT_MALFORMED, f"malformed input: {e}"
    except NotInGroup as e:
        code, msg = EXIT_NOT_IN_GROUP, f"not in group: {e}"
    except IllConditioned as e:
        code, msg = EXIT_ILL, f"ill-conditioned: {e}"
    except (OddDimension, WrongModel, BadRecipe) as e:
        code, msg = EXIT_UNSUPPORTED, f"{type(e).__name__}: {e}"
    except QHIError as e:
        code, msg = EXIT_MALFORMED, f"{type(e).__name__}: {e}"
    except OSError as e:
        code, msg = EXIT_MALFORMED, f"cannot read input: {e}"
    print(msg, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
