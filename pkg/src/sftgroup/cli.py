"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 invalid input, 4 computation failure,
5 selftest failure.  Errors go to stdout as ``{"error": {"code", "message"}}``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import acceptance
from .adic_tables import (
    apply,
    classify_order,
    compose,
    inverse,
    reduce,
    table_from_json,
    tables_equivalent,
)
from .exceptions import ComputationError, SFTGroupError, ValidationError
from .invariants import compare_invariants, invariants_json
from .matrices import BUILTIN, builtin
from .perron_field import compute_perron, endpoint_l, endpoint_r, kms_weight, number_from_json
from .pl_realization import derivative, export_pl, kms_expectation, pl_eval, rho, table_to_pl
from .sft_core import enumerate_words, matrix_from_json, point_from_json

EXIT_OK, EXIT_INVALID, EXIT_COMPUTATION, EXIT_SELFTEST = 0, 3, 4, 5


def _read_json(arg: str):
    """A JSON literal, ``-`` for stdin, or a path to a JSON file."""
    text = arg
    if arg == "-":
        text = sys.stdin.read()
    elif not arg.lstrip().startswith(("{", "[", '"')) and not _is_number(arg):
        try:
            text = Path(arg).read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read {arg}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON in {arg!r}: {exc}") from None


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def load_matrix(arg: str):
    if arg in BUILTIN:
        return builtin(arg)
    return matrix_from_json(_read_json(arg))


def _word_json(w):
    return list(w)


# ------------------------------------------------------------ commands


def cmd_validate(args, A):
    return {"valid": True, **A.to_json()}


def cmd_words(args, A):
    return [_word_json(w) for w in enumerate_words(A, args.m)]


def cmd_perron(args, A):
    return compute_perron(A).to_json(args.digits)


def cmd_intervals(args, A):
    P = compute_perron(A)
    return [
        {
            "word": _word_json(w),
            "l": endpoint_l(P, w).to_json(args.digits),
            "r": endpoint_r(P, w).to_json(args.digits),
            "weight": kms_weight(P, w).to_json(args.digits),
        }
        for w in enumerate_words(A, args.m)
    ]


def _table(A, arg):
    return table_from_json(A, _read_json(arg))


def cmd_table(args, A):
    op = args.op
    T = _table(A, args.table)
    if op == "check":
        return {"valid": True, "size": len(T), **T.to_json()}
    if op == "reduce":
        return reduce(T).to_json()
    if op == "invert":
        return inverse(T).to_json()
    if op == "classify":
        return {"class": classify_order(T).value}
    if op in ("compose", "equal"):
        if args.other is None:
            raise ValidationError(f"table {op} needs a second table")
        T2 = _table(A, args.other)
        if op == "compose":
            return compose(T, T2).to_json()
        return {"equivalent": tables_equivalent(T, T2)}
    if op == "apply":
        if args.point is None:
            raise ValidationError("table apply needs --point")
        return apply(T, point_from_json(_read_json(args.point), A)).to_json()
    if op == "derivative":
        P = compute_perron(A)
        D = derivative(P, T)
        return {
            "steps": [{"word": _word_json(w), "exponent": len(nu) - len(mu),
                       "value": v.to_json(args.digits)}
                      for (w, v), (nu, mu) in zip(D.steps, T.rows)],
            "kms_expectation": kms_expectation(P, D).to_json(args.digits),
        }
    raise AssertionError(op)  # pragma: no cover


def cmd_pl(args, A):
    P = compute_perron(A)
    f = table_to_pl(P, _table(A, args.table))
    if args.op == "render":
        if args.format == "json":
            return f.to_json(args.digits)
        return export_pl(f, args.format, args.digits)
    if args.t is None:
        raise ValidationError("pl eval needs a value t")
    t = number_from_json(P.field, _read_json(args.t))
    return {"t": t.to_json(args.digits), "value": pl_eval(f, t).to_json(args.digits)}


def cmd_rho(args, A):
    P = compute_perron(A)
    x = point_from_json(_read_json(args.point), A)
    return {"point": x.to_json(), "rho": rho(P, x).to_json(args.digits)}


def cmd_invariants(args, A):
    return invariants_json(A)


def cmd_compare(args, A):
    B = load_matrix(args.matrix_b)
    return {"result": compare_invariants(A, B).value, "A": invariants_json(A),
            "B": invariants_json(B)}


def cmd_selftest(args, A):
    numbers = args.criteria or None
    results = acceptance.run_all(seed=args.seed or 0, numbers=numbers)
    for r in results:
        print(r.line(), file=sys.stderr)
    return {
        "passed": all(r.passed for r in results),
        "criteria": [{"number": r.number, "name": r.name, "passed": r.passed,
                      "detail": r.detail} for r in results],
    }


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    def common_flags(suppress: bool) -> argparse.ArgumentParser:
        # flags are accepted before and after the subcommand; the subcommand
        # copy must not overwrite a value given earlier with its default
        def d(value):
            return argparse.SUPPRESS if suppress else value

        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--matrix", default=d("fibonacci"),
                       help="matrix JSON file, JSON literal, or built-in name "
                            f"({', '.join(BUILTIN)}); default fibonacci")
        p.add_argument("--digits", type=int, default=d(12),
                       help="fractional digits in decimal renderings")
        p.add_argument("--seed", type=int, default=d(None))
        p.add_argument("--out", default=d(None), help="write output here instead of stdout")
        p.add_argument("--format", choices=("json", "csv", "svg"), default=d("json"))
        return p

    common = common_flags(suppress=True)
    parser = argparse.ArgumentParser(prog="sftgroup", description=__doc__.splitlines()[0],
                                     parents=[common_flags(suppress=False)])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help, parents=[common])
        p.set_defaults(fn=fn)
        return p

    add("validate", cmd_validate, "validate the transition matrix")
    add("words", cmd_words, "admissible words of length m").add_argument("m", type=int)
    add("perron", cmd_perron, "Perron eigenvalue and eigenvector")
    add("intervals", cmd_intervals, "cylinder intervals of length m").add_argument("m", type=int)

    p = add("table", cmd_table, "operations on A-adic tables")
    p.add_argument("op", choices=("check", "reduce", "compose", "invert", "equal",
                                  "classify", "apply", "derivative"))
    p.add_argument("table", help="table JSON (file, literal or -)")
    p.add_argument("other", nargs="?", help="second table for compose/equal")
    p.add_argument("--point", help="EppPoint JSON for apply")

    p = add("pl", cmd_pl, "render or evaluate the PL function of a table")
    p.add_argument("op", choices=("render", "eval"))
    p.add_argument("table")
    p.add_argument("t", nargs="?", help='value for eval: "3/10", ["-1","1"] or {"poly": [...]}')

    add("rho", cmd_rho, "rho_A of an eventually periodic point").add_argument("point")
    add("invariants", cmd_invariants, "K0 group, det(I - A), simplicity")
    add("compare", cmd_compare, "compare invariants with another matrix").add_argument("matrix_b")

    p = add("selftest", cmd_selftest, "run the acceptance suite on built-in matrices")
    p.add_argument("--criteria", type=int, nargs="*", choices=range(1, 11))
    return parser


def _emit(result, out):
    if isinstance(result, bytes):
        data = result
    else:
        data = (json.dumps(result, sort_keys=True, indent=2) + "\n").encode()
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.digits < 1:
        _emit({"error": {"code": "invalid_input", "message": "--digits must be >= 1"}}, None)
        return EXIT_INVALID
    try:
        A = load_matrix(args.matrix)
        result = args.fn(args, A)
    except ValidationError as exc:
        _emit({"error": exc.to_json()}, None)
        return EXIT_INVALID
    except (ComputationError, SFTGroupError) as exc:
        _emit({"error": exc.to_json()}, None)
        return EXIT_COMPUTATION
    _emit(result, args.out)
    if args.command == "selftest" and not result["passed"]:
        return EXIT_SELFTEST
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
