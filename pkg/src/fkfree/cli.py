"""Command-line entry point.

Results go to stdout as ``key=value`` records, diagnostics to stderr.
Exit status: 0 success, 1 failed check or unsatisfied predicate, 2 usage or
format error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence, TextIO

from . import certify, encode
from .constructions import (
    MODES,
    SIMPLE,
    build_B,
    build_H,
    build_T,
    build_T3,
    enumerate_T3_family,
)
from .core import Digraph, is_fk_free, witness_walk_pair
from .matrixio import MatrixFormatError, emit_matrix, parse_matrix, to_dot
from .search import DEFAULT_MAX_NODES, DEFAULT_TIME_LIMIT, bnb_max, exhaustive_max

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: Optional[str], text: str, out: TextIO) -> None:
    if path is None or path == "-":
        out.write(text)
    else:
        Path(path).write_text(text)


def _record(out: TextIO, **fields) -> None:
    def fmt(v):
        if isinstance(v, bool):
            return "true" if v else "false"
        return str(v)

    out.write(" ".join(f"{k}={fmt(v)}" for k, v in fields.items()) + "\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fkfree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a member of an extremal family")
    p.add_argument("--family", choices=("t3", "t", "b", "h"), required=True)
    p.add_argument("--n", type=int, help="order (t3)")
    p.add_argument("--mode", choices=MODES, default=SIMPLE)
    p.add_argument("--variant", type=int, default=0, help="index into the T3 family listing")
    p.add_argument("--sizes", type=str, help="comma-separated part sizes (t, b, h)")
    p.add_argument("--extra", choices=("loop", "arc"), default="loop", help="extra arc kind (h)")
    p.add_argument("--format", choices=("matrix", "dot"), default="matrix")
    p.add_argument("--output", "-o")

    p = sub.add_parser("check", help="decide F_k-freeness of a matrix document")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("search", help="compute ex(n, F_k) exactly")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=MODES, default=SIMPLE)
    p.add_argument("--engine", choices=("exhaustive", "bnb"), default="bnb")
    p.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    p.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT)
    p.add_argument("--seed-family", choices=("none", "t3"), default="none")
    p.add_argument("--output", "-o", help="write the witness matrix here")

    p = sub.add_parser("encode", help="emit a DIMACS CNF or LP model")
    p.add_argument("format", choices=("cnf", "lp"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, help="arc lower bound (cnf)")
    p.add_argument("--mode", choices=MODES, default=SIMPLE)
    p.add_argument("--output", "-o")

    p = sub.add_parser("decode", help="turn a SAT model back into a matrix document")
    p.add_argument("--cnf", required=True, help="CNF file carrying the manifest header")
    p.add_argument("--model", required=True, help="solver output with v-lines")
    p.add_argument("--output", "-o")

    p = sub.add_parser("certify", help="run the theorem-check drivers")
    p.add_argument("--profile", choices=certify.PROFILES, default="quick")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--report", help="also write the text report here")

    p = sub.add_parser("export", help="convert a matrix document to DOT")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--output", "-o")
    return parser


def _sizes(text: Optional[str], count: int) -> list[int]:
    if text is None:
        raise UsageError(f"--sizes with {count} comma-separated values is required")
    try:
        sizes = [int(s) for s in text.split(",")]
    except ValueError:
        raise UsageError(f"bad --sizes {text!r}") from None
    if len(sizes) != count:
        raise UsageError(f"--sizes needs {count} values, got {len(sizes)}")
    return sizes


def _construct(args, out: TextIO) -> int:
    if args.family == "t3":
        if args.n is None:
            raise UsageError("--n is required for family t3")
        variants = enumerate_T3_family(args.n, args.mode)
        if not 0 <= args.variant < len(variants):
            raise UsageError(f"--variant must be in 0..{len(variants) - 1} for n={args.n} ({args.mode})")
        variant = variants[args.variant]
        D = build_T3(variant)
        label = variant.label()
    elif args.family == "t":
        sizes = _sizes(args.sizes, 3)
        D = build_T(sizes)
        label = f"T{tuple(sizes)}"
    elif args.family == "b":
        n1, n2 = _sizes(args.sizes, 2)
        D = build_B(n1, n2)
        label = f"B({n1},{n2})"
    else:
        n1, n2 = _sizes(args.sizes, 2)
        D = build_H(n1, n2, (0, 0) if args.extra == "loop" else (0, 1))
        label = f"H({n1},{n2})+{args.extra}"
    text = to_dot(D) if args.format == "dot" else emit_matrix(D, [label])
    _write(args.output, text, out)
    if args.output not in (None, "-"):
        _record(out, family=args.family, n=D.n, size=D.size, output=args.output)
    return EXIT_OK


def _check(args, out: TextIO, err: TextIO) -> int:
    D = parse_matrix(_read(args.input))
    free = is_fk_free(D, args.k)
    _record(out, **{f"f{args.k}_free": free, "size": D.size, "n": D.n})
    if free:
        return EXIT_OK
    first, second = witness_walk_pair(D, args.k)
    _record(out, witness_a=",".join(map(str, first)), witness_b=",".join(map(str, second)))
    err.write(f"two length-{args.k} walks share endpoints: {first} and {second}\n")
    return EXIT_FAIL


def _search(args, out: TextIO) -> int:
    seed = None
    if args.seed_family == "t3":
        if args.k != 3 or args.n < 3:
            raise UsageError("--seed-family t3 needs k=3 and n>=3")
        variants = enumerate_T3_family(args.n, args.mode)
        if variants:
            seed = build_T3(variants[-1])
    if args.engine == "exhaustive":
        result = exhaustive_max(args.n, args.k, args.mode)
    else:
        result = bnb_max(args.n, args.k, args.mode, args.max_nodes, args.time_limit, seed)
    _record(
        out,
        n=result.n,
        k=result.k,
        mode=result.mode,
        engine=args.engine,
        best=result.best,
        status=result.status,
        nodes=result.stats.nodes,
        prunes=result.stats.prunes,
        wall_time=f"{result.stats.wall_time:.3f}",
    )
    if args.output:
        _write(args.output, emit_matrix(result.witness, [f"ex witness n={result.n} k={result.k} mode={result.mode}"]), out)
    return EXIT_OK


def _encode(args, out: TextIO) -> int:
    if args.format == "cnf":
        if args.m is None:
            raise UsageError("--m is required for cnf output")
        doc = encode.to_cnf(args.n, args.k, args.m, args.mode)
        text, man = doc.dimacs(), doc.manifest
    else:
        text, man = encode.to_lp(args.n, args.k, args.mode)
    _write(args.output, text, out)
    if args.output not in (None, "-"):
        _record(out, format=args.format, variables=man.num_vars, constraints=man.num_clauses, output=args.output)
    return EXIT_OK


def _decode(args, out: TextIO) -> int:
    manifest = encode.parse_manifest(_read(args.cnf))
    D = encode.decode_dimacs_model(_read(args.model), manifest)
    _write(args.output, emit_matrix(D, [f"decoded n={D.n} k={manifest.k} m={manifest.m}"]), out)
    if args.output not in (None, "-"):
        _record(out, n=D.n, size=D.size, output=args.output)
    return EXIT_OK


def _certify(args, out: TextIO, err: TextIO) -> int:
    report = certify.run_profile(args.profile, args.n_min, args.n_max)
    out.write(report.to_records())
    if args.report:
        Path(args.report).write_text(report.to_text())
    for c in report.checks:
        if not c.passed:
            err.write(f"FAILED {c.check}({c.param_text()}): {c.detail}\n")
    return EXIT_OK if report.overall else EXIT_FAIL


def _export(args, out: TextIO) -> int:
    D = parse_matrix(_read(args.input))
    _write(args.output, to_dot(D), out)
    return EXIT_OK


def run_command(argv: Sequence[str], out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "construct":
            return _construct(args, out)
        if args.command == "check":
            return _check(args, out, err)
        if args.command == "search":
            return _search(args, out)
        if args.command == "encode":
            return _encode(args, out)
        if args.command == "decode":
            return _decode(args, out)
        if args.command == "certify":
            return _certify(args, out, err)
        return _export(args, out)
    except MatrixFormatError as exc:
        err.write(f"fkfree {args.command}: malformed matrix: {exc}\n")
        return EXIT_USAGE
    except encode.EncoderCheckError as exc:
        err.write(f"fkfree {args.command}: {exc}\n")
        return EXIT_FAIL
    except (UsageError, ValueError, IndexError) as exc:
        err.write(f"fkfree {args.command}: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
