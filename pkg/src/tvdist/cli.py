"""Command-line front end: estimate, gen and bench subcommands."""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .errors import (
    DimensionError,
    ParameterError,
    ParseError,
    SizeError,
    TVDistError,
    ValidityError,
)
from .files import (
    InstanceFile,
    ReportFile,
    derive_seed,
    emit_instance,
    emit_report,
    generate_instance,
    instance_digest,
    parse_instance,
    region_csv,
)
from .markov import estimate_markov_tv, markov_lower_bound
from .oracle import (
    brute_force_tv_markov,
    brute_force_tv_product,
    exact_ratio_markov,
    exact_ratio_product,
)
from .product import estimate_product_tv, product_lower_bound
from .ratios import np_boundary, tv_of_ratio

_ERROR_KINDS = [
    (ParseError, "parse"),
    (ParameterError, "parameter"),
    (SizeError, "size"),
    (DimensionError, "dimension"),
    (ValidityError, "validity"),
    (TVDistError, "internal"),
]


def _error_kind(exc: Exception) -> str:
    for klass, kind in _ERROR_KINDS:
        if isinstance(exc, klass):
            return kind
    return "io"


def _run_estimate(inst: InstanceFile, mode: str, epsilon, region_path):
    """Dispatch one estimation run; returns (report, boundary-or-None)."""
    pair = inst.pair
    lower_bound = product_lower_bound if inst.kind == "product" else markov_lower_bound
    if mode == "fptas":
        if epsilon is None:
            raise ParameterError("mode fptas requires --epsilon")
        estimate = estimate_product_tv if inst.kind == "product" else estimate_markov_tv
        result, ratio = estimate(pair, epsilon, return_ratio=True)
        report = ReportFile(
            mode="fptas",
            estimate=result.estimate,
            epsilon=result.epsilon,
            d_lb=result.d_lb,
            max_support=result.max_support,
            elapsed_ms=result.elapsed * 1e3,
            instance_digest=instance_digest(inst),
        )
    elif mode == "exact":
        start = time.perf_counter()
        exact = exact_ratio_product if inst.kind == "product" else exact_ratio_markov
        ratio = exact(pair)
        report = ReportFile(
            mode="exact",
            estimate=tv_of_ratio(ratio),
            epsilon=None,
            d_lb=lower_bound(pair),
            max_support=len(ratio),
            elapsed_ms=(time.perf_counter() - start) * 1e3,
            instance_digest=instance_digest(inst),
        )
    else:
        if region_path is not None:
            raise ParameterError("--emit-region needs a final ratio; use mode fptas or exact")
        start = time.perf_counter()
        brute = brute_force_tv_product if inst.kind == "product" else brute_force_tv_markov
        report = ReportFile(
            mode="oracle",
            estimate=brute(pair),
            epsilon=None,
            d_lb=lower_bound(pair),
            max_support=0,
            elapsed_ms=(time.perf_counter() - start) * 1e3,
            instance_digest=instance_digest(inst),
        )
        ratio = None
    boundary = np_boundary(ratio) if region_path is not None else None
    return report, boundary


def cmd_estimate(args) -> int:
    inst = parse_instance(Path(args.input).read_text())
    report, boundary = _run_estimate(inst, args.mode, args.epsilon, args.emit_region)
    if boundary is not None:
        Path(args.emit_region).write_text(region_csv(boundary))
    sys.stdout.write(emit_report(report))
    return 0


def cmd_gen(args) -> int:
    if args.n < 1 or args.q < 1:
        raise ParameterError(f"n and q must be at least 1, got n={args.n}, q={args.q}")
    if args.skew <= 0:
        raise ParameterError(f"skew must be positive, got {args.skew}")
    inst = generate_instance(args.kind, args.n, args.q, args.seed, args.skew)
    Path(args.out).write_text(emit_instance(inst))
    return 0


BENCH_HEADER = "kind,n,q,epsilon,estimate,d_lb,max_support,elapsed_ms"


def cmd_bench(args) -> int:
    rows = [BENCH_HEADER]
    for n in args.n:
        for q in args.q:
            if n < 1 or q < 1:
                raise ParameterError(f"n and q must be at least 1, got n={n}, q={q}")
            inst = generate_instance(args.kind, n, q, derive_seed(args.seed, n, q), args.skew)
            estimate = estimate_product_tv if args.kind == "product" else estimate_markov_tv
            for eps in args.epsilon:
                result = estimate(inst.pair, eps)
                rows.append(
                    f"{args.kind},{n},{q},{eps!r},{result.estimate!r},"
                    f"{result.d_lb!r},{result.max_support},{result.elapsed * 1e3!r}"
                )
    table = "\n".join(rows) + "\n"
    sys.stdout.write(table)
    if args.out is not None:
        Path(args.out).write_text(table)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tvdist",
        description="Estimate the total variation distance between two product "
        "distributions or two Markov chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate the distance for an instance file")
    est.add_argument("--input", required=True, help="instance document to read")
    est.add_argument("--epsilon", type=float, default=None, help="relative error target")
    est.add_argument(
        "--mode",
        choices=("fptas", "exact", "oracle"),
        default="fptas",
        help="fptas: sparsified pipeline; exact: unmerged pipeline; oracle: brute force",
    )
    est.add_argument(
        "--emit-region",
        default=None,
        metavar="PATH",
        help="also write the final ratio's decision-region boundary as CSV",
    )
    est.set_defaults(func=cmd_estimate)

    gen = sub.add_parser("gen", help="write a seeded random instance file")
    gen.add_argument("--kind", choices=("product", "markov"), required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--q", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--skew", type=float, default=1.0, help="gamma shape; small = spiky rows")
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_gen)

    bench = sub.add_parser("bench", help="run the estimator over a parameter grid")
    bench.add_argument("--kind", choices=("product", "markov"), required=True)
    bench.add_argument("--n", type=int, nargs="+", required=True)
    bench.add_argument("--q", type=int, nargs="+", required=True)
    bench.add_argument("--epsilon", type=float, nargs="+", required=True)
    bench.add_argument("--seed", type=int, required=True)
    bench.add_argument("--skew", type=float, default=1.0)
    bench.add_argument("--out", default=None, help="also write the CSV table here")
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TVDistError as exc:
        print(f"error: {_error_kind(exc)}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
