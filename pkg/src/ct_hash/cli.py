"""``ct-hash`` command line entry point.

Exit codes: 0 success, 1 failed simulation verdict, 2 usage error,
3 validation failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import analysis
from .encoding import BitString, bits, from_bytes
from .errors import (
    CTHashError,
    FormatError,
    InvalidParameters,
    NoSolution,
    ParameterGenerationError,
    SearchLimitExceeded,
)
from .hashing import InnerDigest, h1, h2
from .params import ParameterPair, format_params, generate_pair, mones, paper_pair, parse_params, validate_pair
from .reduction import duplic, sol3dct_demo
from .tensor import format_tensor

EXIT_OK, EXIT_VERDICT, EXIT_USAGE, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3, 4


class UsageError(CTHashError):
    pass


@dataclass
class Config:
    params: ParameterPair
    inner: InnerDigest = InnerDigest.MD5
    source: str = "-"
    output: str = "hex"


def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _read_text(path: str) -> str:
    return _read_bytes(path).decode("ascii", errors="strict")


def _load_params(args, validate: bool = True) -> ParameterPair:
    """Exactly one params source: --params FILE, the n=8 reference pair, or --seed."""
    path = getattr(args, "params", None)
    if path:
        return parse_params(_read_text(path), validate=validate)
    seed = getattr(args, "seed", None)
    n = getattr(args, "n", None)
    if n is None:
        raise UsageError("no parameter source given")
    if n == 8 and seed is None:
        return paper_pair(8)
    return generate_pair(n, 0 if seed is None else seed)


def cmd_hash(args) -> int:
    cfg = Config(_load_params(args), InnerDigest(args.inner), args.input)
    m2 = h1(_read_bytes(cfg.source), cfg.params)
    if args.emit_intermediate:
        print(m2.to01())
    print(h2(m2.tobytes(), cfg.inner).hex())
    return EXIT_OK


def cmd_validate(args) -> int:
    p = parse_params(_read_text(args.file), validate=False)
    report = validate_pair(p.V, p.W)
    print(report.to_text())
    return EXIT_OK if report.valid else EXIT_INVALID


def cmd_gen(args) -> int:
    sys.stdout.write(format_params(generate_pair(args.n, args.seed, args.max_tries)))
    return EXIT_OK


def cmd_paper(args) -> int:
    sys.stdout.write(format_params(paper_pair(args.n)))
    return EXIT_OK


def cmd_repro(args) -> int:
    verdict = analysis.repro_simulation()
    print(verdict.to_kv() if args.format == "kv" else verdict.to_text())
    return EXIT_OK if verdict.passed else EXIT_VERDICT


def cmd_reduce(args) -> int:
    x = bits(_read_text(args.input))
    try:
        a = sol3dct_demo(x, args.n, cap=args.cap)
    except NoSolution:
        print("infeasible")
        return EXIT_OK
    sys.stdout.write(format_tensor(a))
    return EXIT_OK


def cmd_duplic(args) -> int:
    print(duplic(bits(_read_text(args.input)), args.n).to01())
    return EXIT_OK


def _target(args) -> BitString | None:
    if args.target_bits:
        return bits(args.target_bits)
    if args.target:
        digits = args.target.strip()
        try:
            raw = bytes.fromhex(digits + "0" * (len(digits) % 2))
        except ValueError as exc:
            raise FormatError(f"bad hex target: {digits}") from exc
        return from_bytes(raw, 4 * len(digits))
    return None


def cmd_attack(args) -> int:
    params = _load_params(args, validate=not args.no_validate)
    if params.n != args.n:
        raise UsageError(f"params file is for n={params.n}, not n={args.n}")
    target = _target(args)
    if args.mode == "collision":
        report = analysis.collision_search_h1(args.n, params, args.block_count, args.allow_large)
    elif target is None:
        raise UsageError(f"--target or --target-bits is required for {args.mode}")
    elif args.mode == "preimage":
        report = analysis.preimage_search(target, args.n, params, args.allow_large)
    else:
        report = analysis.second_preimage_search(target, args.n, params, args.allow_large)
    print(report.to_kv() if args.format == "kv" else report.to_text())
    return EXIT_OK


def cmd_bench(args) -> int:
    params = _load_params(args)
    res = analysis.bench_throughput(args.n, params, args.inner, args.size, args.repeats, args.seed or 0)
    if args.format == "kv":
        print(res.to_kv())
    else:
        print(f"n={res.n} inner={res.inner} bytes={res.payload_size} "
              f"time={res.seconds:.4f}s throughput={res.mb_per_s:.4f} MB/s")
    return EXIT_OK


def cmd_diffusion(args) -> int:
    params = _load_params(args)
    baseline = ParameterPair.unchecked(mones(args.n), mones(args.n))
    rows = []
    for label, p in (("configured", params), ("all-ones", baseline)):
        stats = analysis.diffusion_stats(args.n, p, args.trials, args.inner, args.seed, args.message_bytes)
        rows.append(stats.to_kv(label) if args.format == "kv" else f"[{label}]\n{stats.to_text()}")
    print("\n".join(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ct-hash", description="Contingency-table marginal hash H3 = H2 o H1")
    sub = parser.add_subparsers(dest="command", required=True)

    def inner_opt(p):
        p.add_argument("--inner", choices=[d.value for d in InnerDigest], default="md5")

    def fmt_opt(p):
        p.add_argument("--format", choices=["text", "kv"], default="text")

    p = sub.add_parser("hash", help="hash a file (or - for stdin)")
    p.add_argument("--params", required=True)
    inner_opt(p)
    p.add_argument("--emit-intermediate", action="store_true", help="also print the H1 bit string")
    p.add_argument("input", nargs="?", default="-")
    p.set_defaults(func=cmd_hash)

    p = sub.add_parser("validate-params", help="check hypotheses (4a)-(4j)")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("gen-params", help="generate a validated random pair")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-tries", type=int, default=1000)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("paper-params", help="print the n=8 reference pair")
    p.add_argument("--n", type=int, default=8)
    p.set_defaults(func=cmd_paper)

    p = sub.add_parser("repro-simulation", help="MD5 collision pair through H3")
    fmt_opt(p)
    p.set_defaults(func=cmd_repro)

    p = sub.add_parser("reduce", help="recover a 0/1 tensor from a fixed-width encoding")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--input", default="-")
    p.add_argument("--cap", type=int, default=2)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("duplic", help="filter a bit string through duplic")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--input", default="-")
    p.set_defaults(func=cmd_duplic)

    p = sub.add_parser("attack", help="exhaustive single-block attacks at tiny n")
    p.add_argument("--mode", choices=["collision", "preimage", "second-preimage"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--params")
    p.add_argument("--seed", type=int)
    p.add_argument("--target", help="hex target (encoding for preimage, block for second-preimage)")
    p.add_argument("--target-bits", help="target as a 0/1 string")
    p.add_argument("--block-count", type=int, default=1)
    p.add_argument("--allow-large", action="store_true", help="permit n=3")
    p.add_argument("--no-validate", action="store_true", help="accept params failing (4a)-(4j)")
    fmt_opt(p)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("bench", help="H3 throughput")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--params")
    p.add_argument("--seed", type=int)
    p.add_argument("--repeats", type=int, default=3)
    inner_opt(p)
    fmt_opt(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("diffusion", help="single-bit-flip statistics vs the all-ones baseline")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--params")
    p.add_argument("--message-bytes", type=int, default=16)
    inner_opt(p)
    fmt_opt(p)
    p.set_defaults(func=cmd_diffusion)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, SearchLimitExceeded) as exc:
        print(f"ct-hash: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidParameters as exc:
        print(f"ct-hash: invalid parameters: {exc}", file=sys.stderr)
        if exc.report is not None:
            for r in exc.report.failures():
                print(f"  {r.describe()}", file=sys.stderr)
        return EXIT_INVALID
    except (FormatError, ParameterGenerationError, CTHashError, ValueError) as exc:
        print(f"ct-hash: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"ct-hash: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
