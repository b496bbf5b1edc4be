"""Command-line interface.

Exit codes: 0 for IN or success, 1 for OUT (or a failed check), 2 for
usage and input errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import formats
from .maya import (MayaIndex, format_partition, index_of_partition, is_good, leq, parse_partition,
                   partition_of, plucker_relation)
from .membership import (VarietySpec, check_witness, randomized_membership, secant_sample,
                         symbolic_membership)
from .pfaffian import SkewMatrix, pf_poly, pf_star_poly, pfaffian
from .scalar import format_scalar, parse_field
from .tuples import (TupleRankError, find_independent_vector, find_subspace, normal_form, tuple_rank)

NECESSARY_BANNER = ("NECESSARY-ONLY: for p >= 3 the secant test checks Pfaffian-variety containment, "
                    "which is necessary but not sufficient")


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError("cannot read %s: %s" % (path, exc.strerror or exc))


def _variety(words):
    if words == ["gr"]:
        return VarietySpec.grassmannian(), "gr", None
    try:
        if len(words) == 3 and words[0] == "pf":
            r, s = int(words[1]), int(words[2])
            return VarietySpec.pfaffian(r, s), "pf %d %d" % (r, s), None
        if len(words) == 2 and words[0] == "secant":
            k = int(words[1])
            return VarietySpec.secant(k), "secant %d" % k, k
    except ValueError:
        pass
    raise UsageError("variety must be 'gr', 'pf R S' or 'secant K', got %r" % " ".join(words))


def cmd_member(args, out) -> int:
    if len(args.target) < 2:
        raise UsageError("member needs a variety and a tensor file")
    spec, name, secant_k = _variety(args.target[:-1])
    path = args.target[-1]
    field = parse_field(args.field)
    omega = formats.read_tensor(_read(path), field)
    if secant_k is not None and omega.degree >= 3:
        print(NECESSARY_BANNER, file=out)
    if args.check_witness:
        variety, _, wit = formats.witness_from_json(_read(args.check_witness))
        if variety != name:
            raise UsageError("witness is for %r, not %r" % (variety, name))
        ok = check_witness(omega, spec, wit)
        print("VALID" if ok else "INVALID", file=out)
        return 0 if ok else 1
    if args.symbolic:
        verdict = symbolic_membership(omega, spec)
    else:
        if args.seed is None:
            raise UsageError("randomized membership needs --seed")
        verdict = randomized_membership(omega, spec, trials=args.trials, rng_seed=args.seed,
                                        allow_small_field=args.allow_small_field)
    if verdict.is_in:
        print("IN", file=out)
        return 0
    wpath = args.witness_out or (path + ".witness.json")
    Path(wpath).write_text(formats.witness_to_json(verdict.witness, name, field, verdict.method))
    print("OUT witness=%s" % wpath, file=out)
    return 1


def cmd_pfaffian(args, out) -> int:
    if args.symbolic is not None:
        print(pf_poly(args.symbolic).format(), file=out)
        return 0
    if args.symbolic_star is not None:
        print(pf_star_poly(args.symbolic_star).format(), file=out)
        return 0
    if not args.matrix:
        raise UsageError("pfaffian needs a matrix file, --symbolic R or --symbolic-star S")
    field = parse_field(args.field)
    rows = formats.read_matrix(formats._lines(_read(args.matrix)), field)
    try:
        A = SkewMatrix(rows)
    except ValueError as exc:
        raise UsageError(str(exc))
    if A.size % 2:
        print("warning: odd size %d, Pfaffian is 0" % A.size, file=sys.stderr)
    print(format_scalar(pfaffian(A)), file=out)
    return 0


def _index(text: str) -> MayaIndex:
    try:
        return MayaIndex.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_maya(args, out) -> int:
    a = args.args
    op = args.op
    if op == "part":
        print(format_partition(partition_of(_index(a[0]))), file=out)
    elif op == "index":
        print(index_of_partition(parse_partition(a[0] if a else "")), file=out)
    elif op == "leq":
        print("true" if leq(_index(a[0]), _index(a[1])) else "false", file=out)
    elif op == "relation":
        print(plucker_relation(_index(a[0]), _index(a[1])).format(), file=out)
    elif op == "good":
        r, s = (int(t.split("=")[-1]) for t in a[:2])
        print("true" if is_good(_index(a[2]), r, s) else "false", file=out)
    return 0


def cmd_sample(args, out) -> int:
    omega = secant_sample(args.k, args.p, args.d, rng_seed=args.seed)
    out.write(formats.write_tensor(omega, dense=args.dense))
    return 0


def cmd_tuple(args, out) -> int:
    field = parse_field(args.field)
    if args.op == "normalform":
        x = formats.read_tot(_read(args.file), field)
        if args.seed is None:
            raise UsageError("normalform needs --seed")
        y, left, right = normal_form(x, args.l, rng_seed=args.seed)
        out.write(formats.write_tot(y))
        out.write("\nleft\n" + formats.write_matrix(left) + "\nright\n" + formats.write_matrix(right))
        return 0
    M = formats.read_tuple(_read(args.file), field)
    if args.op == "rank":
        if args.mode != "exact" and args.seed is None:
            raise UsageError("randomized rank needs --seed")
        r = tuple_rank(M, mode=args.mode, rng_seed=args.seed or 0)
        print("%d%s" % (r, "" if r.exact else " (upper bound)"), file=out)
        return 0
    if args.seed is None:
        raise UsageError("%s needs --seed" % args.op)
    if args.op == "vector":
        v = find_independent_vector(M, rng_seed=args.seed)
        print(" ".join(format_scalar(x) for x in v), file=out)
    else:
        V = find_subspace(M, args.l, rng_seed=args.seed)
        out.write(formats.write_matrix(V))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="q", help="q (rationals, default) or fp:<prime>")
    common.add_argument("--seed", type=int, help="RNG seed (required by randomized commands)")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging to stderr")

    ap = argparse.ArgumentParser(prog="plucker", description="Exterior algebra, Pfaffians and membership tests.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    m = sub.add_parser("member", parents=[common], help="membership in gr | pf R S | secant K")
    m.add_argument("target", nargs="+", metavar="VARIETY... TENSOR_FILE")
    m.add_argument("--trials", type=int, default=20)
    m.add_argument("--symbolic", action="store_true", help="deterministic test with symbolic g")
    m.add_argument("--dense", action="store_true",
                   help="accepted for symmetry with 'sample'; dense files are recognized by their header")
    m.add_argument("--check-witness", metavar="FILE", help="re-verify a witness file instead of testing")
    m.add_argument("--witness-out", metavar="FILE", help="where to write the OUT witness")
    m.add_argument("--allow-small-field", action="store_true",
                   help="permit randomized tests over primes below 2^31")
    m.set_defaults(func=cmd_member)

    p = sub.add_parser("pfaffian", parents=[common], help="numeric or symbolic Pfaffians")
    p.add_argument("matrix", nargs="?")
    p.add_argument("--symbolic", type=int, metavar="R", help="print Pf_R")
    p.add_argument("--symbolic-star", type=int, metavar="S", help="print the dual Pfaffian of index S")
    p.set_defaults(func=cmd_pfaffian)

    y = sub.add_parser("maya", parents=[common], help="Maya index utilities")
    y.add_argument("op", choices=["part", "index", "leq", "relation", "good"])
    y.add_argument("args", nargs="*")
    y.set_defaults(func=cmd_maya)

    s = sub.add_parser("sample", parents=[common], help="sum of k random pure tensors in K^d")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--dense", action="store_true")
    s.set_defaults(func=cmd_sample)

    t = sub.add_parser("tuple", parents=[common], help="matrix tuple algorithms")
    t.add_argument("op", choices=["rank", "vector", "subspace", "normalform"])
    t.add_argument("file")
    t.add_argument("--l", type=int, default=1)
    t.add_argument("--mode", default="exact", choices=["exact", "randomized"])
    t.set_defaults(func=cmd_tuple)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    if args.cmd == "sample" and args.seed is None:
        print("error: sample needs --seed", file=sys.stderr)
        return 2
    try:
        return args.func(args, out)
    except (UsageError, formats.FormatError, ValueError, IndexError, TupleRankError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
