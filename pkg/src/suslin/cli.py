"""Command line interface.

    suslin factor matrix.json [--simplify] [--field q|gf:p] [--strategy auto|suslin] [-o fact.json]
    suslin verify matrix.json fact.json
    suslin simplify fact.json [-o out.json]
    suslin gen --n N --vars m --factors t --seed s [--matrix m.json] [--factorization f.json]

Exit codes: 0 success, 1 verification failure, 2 input error, 3 unsupported
instance.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .ideals import UnsupportedZeroSearch
from .linalg import ElemFactor, Factorization, FormatError, NotUnimodular, PolyMatrix, verify
from .realize import STRATEGIES, realize
from .ring import Field, Ring
from .steinberg import simplify

__all__ = ["main", "cli_main", "random_instance"]

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_UNSUPPORTED = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _load_matrix(path, field=None):
    try:
        return PolyMatrix.from_json(_load_json(path), field=field)
    except (FormatError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_factorization(path, ring=None):
    data = _load_json(path)
    if ring is not None and list(data.get("vars", ring.names)) != list(ring.names):
        raise InputError(f"{path}: variables {data.get('vars')} differ from the matrix's {list(ring.names)}")
    try:
        return Factorization.from_json(data, ring=ring)
    except (FormatError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _write(text, path):
    if path is None or path == "-":
        sys.stdout.write(text + "\n")
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")


def _var_names(m):
    if m <= 4:
        return ["x", "y", "z", "w"][:m]
    return [f"x{k}" for k in range(1, m + 1)]


def random_instance(n, nvars, nfactors, seed, field=None, degree=2, coeff_range=2):
    """Random product of ``nfactors`` elementary matrices and the factors themselves."""
    ring = Ring(_var_names(nvars), field or Field())
    rng = random.Random(seed)
    factors = []
    for _ in range(nfactors):
        i, j = rng.sample(range(1, n + 1), 2)
        factors.append(ElemFactor(i, j, ring.random_poly(rng, degree=degree, coeff_range=coeff_range)))
    fact = Factorization(n, factors, ring)
    return fact.product(), fact


# ---------------------------------------------------------------------------
# commands


def _cmd_factor(args):
    field = Field.from_spec(args.field) if args.field else None
    a = _load_matrix(args.matrix, field)
    if a.n < 3:
        raise InputError(f"{args.matrix}: n = {a.n}; need n >= 3")
    d = a.det()
    if not d.is_one():
        raise InputError(f"{args.matrix}: determinant is {d}, expected 1")
    out = realize(a, strategy=args.strategy, simplify=args.simplify, seed=args.seed)
    if not verify(out, a):
        print("error: factorization failed verification", file=sys.stderr)
        return EXIT_VERIFY
    _write(out.dumps(), args.output)
    return EXIT_OK


def _cmd_verify(args):
    a = _load_matrix(args.matrix)
    f = _load_factorization(args.factorization, ring=a.ring)
    if f.n != a.n:
        raise InputError(f"dimension mismatch: matrix {a.n}, factorization {f.n}")
    if verify(f, a):
        print(f"ok: {len(f)} factors reproduce the {a.n}x{a.n} matrix")
        return EXIT_OK
    print("mismatch: the product differs from the matrix", file=sys.stderr)
    return EXIT_VERIFY


def _cmd_simplify(args):
    f = _load_factorization(args.factorization)
    g = simplify(f)
    if g.product() != f.product():  # pragma: no cover - every rewrite is a group identity
        print("error: simplification changed the product", file=sys.stderr)
        return EXIT_VERIFY
    _write(g.dumps(), args.output)
    print(f"{len(f)} -> {len(g)} factors", file=sys.stderr)
    return EXIT_OK


def _cmd_gen(args):
    if args.n < 1 or args.vars < 0 or args.factors < 0:
        raise InputError("need n >= 1, vars >= 0, factors >= 0")
    if args.n < 2 and args.factors:
        raise InputError("elementary factors need n >= 2")
    field = Field.from_spec(args.field) if args.field else None
    a, f = random_instance(args.n, args.vars, args.factors, args.seed, field=field)
    if args.matrix is None and args.factorization is None:
        _write(json.dumps({"matrix": a.to_json(), "factorization": f.to_json()}, indent=1), None)
        return EXIT_OK
    if args.matrix is not None:
        _write(json.dumps(a.to_json(), indent=1), args.matrix)
    if args.factorization is not None:
        _write(f.dumps(), args.factorization)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="suslin", description="Elementary factorizations of SL_n over polynomial rings.")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("factor", help="factor a determinant-one matrix")
    f.add_argument("matrix")
    f.add_argument("-o", "--output", default=None)
    f.add_argument("--simplify", action="store_true")
    f.add_argument("--field", default=None, help="q or gf:p (overrides the file)")
    f.add_argument("--strategy", choices=STRATEGIES, default="auto")
    f.add_argument("--seed", type=int, default=0)
    f.set_defaults(run=_cmd_factor)

    v = sub.add_parser("verify", help="check a factorization against a matrix")
    v.add_argument("matrix")
    v.add_argument("factorization")
    v.set_defaults(run=_cmd_verify)

    s = sub.add_parser("simplify", help="shorten a factorization with the Steinberg relations")
    s.add_argument("factorization")
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(run=_cmd_simplify)

    g = sub.add_parser("gen", help="random elementary product with its factors")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--vars", type=int, default=2)
    g.add_argument("--factors", type=int, default=4)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--field", default=None)
    g.add_argument("--matrix", default=None, help="write the matrix here")
    g.add_argument("--factorization", default=None, help="write the factors here")
    g.set_defaults(run=_cmd_gen)
    return p


def cli_main(argv=None):
    """Run one command; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NotUnimodular, FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UnsupportedZeroSearch as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
