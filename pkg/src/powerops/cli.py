"""Command-line front end.

Every subcommand prints a human-readable report by default and a single
compact JSON object with ``--json``. Exit codes: 0 on success, 2 for bad
input, 3 if an internal exact division ever fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .completion import stabilization_tower, taylor_expand, truncated_analytic_cokernel
from .modules import (
    ExactnessError,
    ModuleExpressionError,
    ModuleMap,
    PrimeContext,
    is_iso_map,
    nakayama_surjectivity,
    normal_form,
    parse_module,
    quotient_map,
    residue_map,
)
from .nilpotency import is_nilpotent_mod_p, telescope_residue_rank
from .power_ops import compute_Tn, compute_Tn_map, residue_table, stabilization_scan
from .theta import monomial_str

EXIT_USAGE = 2
EXIT_EXACTNESS = 3
DEFAULT_MAX_K = 12


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _parse_matrix(text: str, square: bool = False) -> list[list[int]]:
    try:
        mat = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed matrix: {exc}") from None
    if not isinstance(mat, list) or not all(isinstance(r, list) for r in mat):
        raise UsageError("matrix must be a JSON list of rows")
    if not all(isinstance(x, int) and not isinstance(x, bool) for r in mat for x in r):
        raise UsageError("matrix entries must be integers")
    if mat and any(len(r) != len(mat[0]) for r in mat):
        raise UsageError("matrix rows have different lengths")
    if square and any(len(r) != len(mat) for r in mat):
        raise UsageError("matrix must be square")
    return mat


def _context(args) -> PrimeContext:
    try:
        return PrimeContext(args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _max_n(args, ctx: PrimeContext) -> int:
    max_n = args.max_n if args.max_n is not None else ctx.p**2
    if max_n > ctx.p**3:
        print(f"warning: weights above p^3 = {ctx.p**3} can be very expensive", file=sys.stderr)
    return max_n


def _check_n(args, ctx: PrimeContext) -> None:
    if args.n < 0:
        raise UsageError("--n must be >= 0")
    bound = _max_n(args, ctx)
    if args.n > bound:
        raise UsageError(f"--n {args.n} exceeds the bound {bound}; raise it with --max-n")


def _check_k(value: int, args, flag: str) -> None:
    if value < 1:
        raise UsageError(f"{flag} must be >= 1")
    if value > args.max_k:
        raise UsageError(f"{flag} {value} exceeds the bound {args.max_k}; raise it with --max-k")


def _module(expr: str, ctx: PrimeContext):
    try:
        return parse_module(expr, ctx)
    except ModuleExpressionError as exc:
        raise UsageError(str(exc)) from None


def cmd_tn(args) -> str:
    ctx = _context(args)
    _check_n(args, ctx)
    m = _module(args.module, ctx)
    nf = compute_Tn(m, args.n).normal_form
    if args.json:
        return _dump(nf.as_dict())
    return f"T_{args.n}({m.normal_form}) = {nf}"


def cmd_tn_map(args) -> str:
    ctx = _context(args)
    _check_n(args, ctx)
    if args.k is not None:
        _check_k(args.k, args, "--k")
        f = quotient_map(ctx, args.k)
    else:
        if args.source is None or args.target is None or args.matrix is None:
            raise UsageError("give --k, or all of --source, --target and --matrix")
        src = _module(args.source, ctx)
        tgt = _module(args.target, ctx)
        try:
            f = ModuleMap(src, tgt, _parse_matrix(args.matrix))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    src_piece = compute_Tn(f.source, args.n)
    tgt_piece = compute_Tn(f.target, args.n)
    tf = compute_Tn_map(f, args.n, source=src_piece, target=tgt_piece)
    shown = residue_map(tf) if args.residue else tf
    result = {
        "n": args.n,
        "residue": bool(args.residue),
        "source": shown.source.normal_form.as_dict(),
        "target": shown.target.normal_form.as_dict(),
        "source_basis": [monomial_str(m) for m in src_piece.monomial_basis],
        "target_basis": [monomial_str(m) for m in tgt_piece.monomial_basis],
        "matrix": [list(r) for r in tf.matrix],
        "surjective": nakayama_surjectivity(shown),
        "iso": is_iso_map(shown),
    }
    if args.json:
        return _dump(result)
    lines = [
        f"T_{args.n}(f): {shown.source.normal_form} -> {shown.target.normal_form}"
        + ("  (after Z/p tensor)" if args.residue else ""),
        "source basis: " + ", ".join(result["source_basis"]),
        "target basis: " + ", ".join(result["target_basis"]),
        "matrix:",
    ]
    lines += ["  " + " ".join(str(x) for x in row) for row in result["matrix"]]
    lines.append(f"surjective: {result['surjective']}  iso: {result['iso']}")
    return "\n".join(lines)


def cmd_stabilize(args) -> str:
    ctx = _context(args)
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    _check_n(args, ctx)
    _check_k(args.k_max, args, "--k-max")
    scan = stabilization_scan(ctx, args.n, args.k_max)
    if args.json:
        return _dump(scan.as_dict())
    lines = [f"p={ctx.p} n={args.n}: Z/p (x) T_n(q_k) iso?"]
    lines += [f"  k={k:<3d} {'yes' if flag else 'no'}" for k, flag in enumerate(scan.flags, 1)]
    lines.append(f"k0 = {scan.k0 if scan.k0 is not None else 'none found'}")
    return "\n".join(lines)


def cmd_example_table(args) -> str:
    ctx = _context(args)
    _check_k(args.k_max, args, "--k-max")
    rows = residue_table(ctx, ctx.p, args.k_max)
    if args.json:
        return _dump({
            "p": ctx.p,
            "n": ctx.p,
            "rows": [
                {"k": r.k, "source": r.source.as_dict(), "target": r.target.as_dict(), "iso": r.is_iso}
                for r in rows
            ],
        })
    header = f"{'k':>3}  {'Z/p (x) T_p(Z_p)':<20} {'Z/p (x) T_p(Z/p^k)':<20} iso"
    lines = [f"p = {ctx.p}", header, "-" * len(header)]
    for r in rows:
        note = "yes" if r.is_iso else "no (not injective)"
        lines.append(f"{r.k:>3}  {str(r.source):<20} {str(r.target):<20} {note}")
    return "\n".join(lines)


def cmd_snf(args) -> str:
    ctx = _context(args)
    if args.module is not None:
        nf = _module(args.module, ctx).normal_form
    elif args.relations is not None:
        rels = _parse_matrix(args.relations)
        if not rels and args.generators is None:
            raise UsageError("--generators is required with an empty relation matrix")
        if args.generators is not None and rels and len(rels[0]) != args.generators:
            raise UsageError("relation rows must have --generators entries")
        nf = normal_form(rels, ctx, args.generators)
    else:
        raise UsageError("give --relations or --module")
    return _dump(nf.as_dict()) if args.json else str(nf)


def cmd_telescope(args) -> str:
    ctx = _context(args)
    if (args.matrix is None) == (args.matrix_file is None):
        raise UsageError("give exactly one of --matrix and --matrix-file")
    if args.matrix_file is not None:
        try:
            with open(args.matrix_file) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(str(exc)) from None
    else:
        text = args.matrix
    phi = _parse_matrix(text, square=True)
    nil = is_nilpotent_mod_p(phi, ctx.p)
    rank = telescope_residue_rank(phi, ctx.p)
    result = {"nilpotent": nil, "rank": rank, "consistent": nil == (rank == 0)}
    if args.json:
        return _dump(result)
    return f"nilpotent mod {ctx.p}: {nil}\ntelescope residue rank: {rank}\nconsistent: {result['consistent']}"


def cmd_taylor(args) -> str:
    ctx = _context(args)
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    digits = taylor_expand(args.value, ctx.p, args.k)
    if args.json:
        return _dump({"value": args.value, "digits": digits})
    return f"{args.value} = " + " + ".join(f"{c}*p^{i}" for i, c in enumerate(digits)) + f" mod p^{args.k}"


def cmd_analytic_coker(args) -> str:
    ctx = _context(args)
    _check_k(args.order, args, "--order")
    m = _module(args.module, ctx)
    if args.tower:
        tower = [c.normal_form for c in stabilization_tower(m, args.order)]
        if args.json:
            return _dump({"tower": [nf.as_dict() for nf in tower]})
        return "\n".join(f"N={i}: {nf}" for i, nf in enumerate(tower, 1))
    nf = truncated_analytic_cokernel(m, args.order).normal_form
    if args.json:
        return _dump({"order": args.order, "normal_form": nf.as_dict()})
    return f"coker(x - p on M[x]/x^{args.order}) = {nf}"


COMMANDS = {
    "tn": cmd_tn,
    "tn-map": cmd_tn_map,
    "stabilize": cmd_stabilize,
    "example-3-1": cmd_example_table,
    "snf": cmd_snf,
    "telescope": cmd_telescope,
    "taylor": cmd_taylor,
    "analytic-coker": cmd_analytic_coker,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, required=True, help="the prime")
    common.add_argument("--json", action="store_true", help="emit one JSON object")
    common.add_argument("--max-n", type=int, default=None, help="weight bound (default p^2)")
    common.add_argument("--max-k", type=int, default=DEFAULT_MAX_K, help="exponent bound (default 12)")

    parser = argparse.ArgumentParser(prog="powerops", description="Power operations on Z_p-modules at height 1")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tn", parents=[common], help="normal form of T_n(M)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--module", required=True)

    p = sub.add_parser("tn-map", parents=[common], help="matrix of T_n(f)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, help="use the quotient q_k : Zp -> Z/p^k")
    p.add_argument("--source")
    p.add_argument("--target")
    p.add_argument("--matrix", help="JSON rows: one per target generator")
    p.add_argument("--residue", action="store_true", help="tensor the result with Z/p")

    p = sub.add_parser("stabilize", parents=[common], help="scan Z/p (x) T_n(q_k) over k")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)

    p = sub.add_parser("example-3-1", parents=[common], help="the T_p(q_k) residue table")
    p.add_argument("--k-max", type=int, required=True)

    p = sub.add_parser("snf", parents=[common], help="p-local normal form of a presentation")
    p.add_argument("--relations", help="JSON rows of relations")
    p.add_argument("--generators", type=int)
    p.add_argument("--module")

    p = sub.add_parser("telescope", parents=[common], help="nilpotency mod p and telescope residue")
    p.add_argument("--matrix")
    p.add_argument("--matrix-file")

    p = sub.add_parser("taylor", parents=[common], help="base-p digits of an integer")
    p.add_argument("--value", type=int, required=True)
    p.add_argument("--k", type=int, required=True, help="number of digits")

    p = sub.add_parser("analytic-coker", parents=[common], help="truncated analytic completion")
    p.add_argument("--module", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--tower", action="store_true", help="print every stage up to --order")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExactnessError as exc:
        print(f"internal exactness violation: {exc}", file=sys.stderr)
        return EXIT_EXACTNESS
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
