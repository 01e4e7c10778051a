"""Command-line interface.

Subcommands:

  run     aggregate a data file against a query file, write id,value rows
  verify  run the pipeline and the brute-force reference, compare
  gen     write a deterministic pseudo-random instance to two files
  bench   repeat a run over doubling sizes and print a measurement table

Exit codes: 0 success, 1 verification mismatch, 2 input error, 3 usage
error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .datafiles import (
    InputError,
    check_unique_ids,
    format_value,
    generate_instance,
    read_points,
    result_lines,
    write_instance,
    write_results,
)
from .monoids import MONOIDS
from .oracle import brute_force
from .pipeline import PipelineConfig, run

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_USAGE = 3

CLI_MONOIDS = ("count", "sum", "min", "max")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage problems; 2 is reserved for bad
    # input data here, so remap.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, default=None, help="expected coordinate count (checked against the headers)")
    p.add_argument("--monoid", choices=CLI_MONOIDS, default="count", help="aggregation (count ignores the weight column)")
    p.add_argument("--variant", choices=("basic", "improved"), default="basic")
    p.add_argument("--backend", choices=("seq", "par"), default="seq")
    p.add_argument("--threads", type=int, default=None, help="parallel backend width")
    p.add_argument("--fast-path", choices=("auto", "off"), default="auto", dest="fast_path", help="broadcast shortcut when the monoid allows it")


def build_parser() -> _Parser:
    parser = _Parser(prog="domscan", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="aggregate dominated points for every query")
    p_run.add_argument("data_file")
    p_run.add_argument("query_file")
    _add_config_flags(p_run)
    p_run.add_argument("--output", default=None, help="result file (default: stdout)")
    p_run.add_argument("--stats", default=None, help="write a JSON run report here")

    p_verify = sub.add_parser("verify", help="compare the pipeline against the brute-force reference")
    p_verify.add_argument("data_file")
    p_verify.add_argument("query_file")
    _add_config_flags(p_verify)
    p_verify.add_argument("--expected", default=None, help="also compare against this result file")

    p_gen = sub.add_parser("gen", help="generate a deterministic instance")
    p_gen.add_argument("--n", type=int, required=True, help="number of data points")
    p_gen.add_argument("--q", type=int, required=True, help="number of query points")
    p_gen.add_argument("--dim", type=int, default=2)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--distribution", choices=("uniform", "gridded"), default="uniform")
    p_gen.add_argument("--data", default="data.csv", help="data file to write")
    p_gen.add_argument("--queries", default="queries.csv", help="query file to write")

    p_bench = sub.add_parser("bench", help="measure runs over doubling instance sizes")
    p_bench.add_argument("--n0", type=int, default=256, help="starting total point count")
    p_bench.add_argument("--rounds", type=int, default=4, help="number of doublings")
    _add_config_flags(p_bench)
    p_bench.add_argument("--seed", type=int, default=0)

    return parser


def _load(args):
    data = read_points(args.data_file, queries=False, dims=args.dim)
    queries = read_points(args.query_file, queries=True, dims=args.dim)
    if len({len(p.coords) for p in (*data, *queries)}) > 1:
        raise InputError("data and query files disagree on the coordinate count")
    check_unique_ids(data, queries)
    if args.monoid == "count":
        data = [p.__class__(p.id, p.coords, 1, False) for p in data]
    return data, queries


def _config(args, dims: int) -> PipelineConfig:
    return PipelineConfig(
        dims=dims,
        monoid=MONOIDS[args.monoid],
        variant=args.variant,
        fast_path=args.fast_path,
        backend=args.backend,
        threads=args.threads,
    )


def cmd_run(args) -> int:
    t0 = time.perf_counter()
    try:
        data, queries = _load(args)
    except InputError as exc:
        print(f"domscan: {exc}", file=sys.stderr)
        return EXIT_INPUT
    dims = len(data[0].coords) if data else (len(queries[0].coords) if queries else args.dim or 1)
    t_load = time.perf_counter() - t0
    cfg = _config(args, dims)
    t1 = time.perf_counter()
    results, stats = run(data, queries, cfg)
    t_compute = time.perf_counter() - t1
    t2 = time.perf_counter()
    write_results(args.output, results)
    t_write = time.perf_counter() - t2
    if args.stats:
        report = {
            "variant": cfg.variant,
            "backend": cfg.backend,
            "monoid": cfg.monoid.name,
            "fast_path": cfg.fast_path,
            "threads": cfg.threads,
            "phases": {
                "load_seconds": t_load,
                "compute_seconds": t_compute,
                "write_seconds": t_write,
                **{f"{k}_seconds": v for k, v in stats.phase_seconds.items()},
            },
            "stats": {
                "data_count": stats.data_count,
                "query_count": stats.query_count,
                "expanded_count": stats.expanded_count,
                "widths": list(stats.widths),
                "elements_processed": stats.elements_processed,
                "primitive_calls": stats.primitive_calls,
            },
            "results_written": len(results),
        }
        with open(args.stats, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        data, queries = _load(args)
    except InputError as exc:
        print(f"domscan: {exc}", file=sys.stderr)
        return EXIT_INPUT
    dims = len(data[0].coords) if data else (len(queries[0].coords) if queries else args.dim or 1)
    cfg = _config(args, dims)
    results, _ = run(data, queries, cfg)
    expected = brute_force(data, queries, cfg.monoid)
    for r in results:
        if not cfg.monoid.value_eq(r.value, expected[r.id]):
            print(f"mismatch at query {r.id}: pipeline {format_value(r.value)}, reference {format_value(expected[r.id])}")
            return EXIT_MISMATCH
    if args.expected is not None:
        try:
            with open(args.expected) as fh:
                want = [line.strip() for line in fh if line.strip()]
        except OSError as exc:
            print(f"domscan: {exc}", file=sys.stderr)
            return EXIT_INPUT
        got = result_lines(results)
        for lineno, (g, w) in enumerate(zip(got, want), start=1):
            if g != w:
                print(f"mismatch at line {lineno}: pipeline {g!r}, expected file {w!r}")
                return EXIT_MISMATCH
        if len(got) != len(want):
            print(f"result count mismatch: pipeline {len(got)}, expected file {len(want)}")
            return EXIT_MISMATCH
    print(f"verified {len(results)} queries")
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.n < 0 or args.q < 0 or args.dim < 1:
        print("domscan: sizes must be nonnegative and --dim positive", file=sys.stderr)
        return EXIT_INPUT
    data, queries = generate_instance(args.n, args.q, args.dim, args.seed, args.distribution)
    write_instance(args.data, args.queries, data, queries, args.dim)
    return EXIT_OK


def cmd_bench(args) -> int:
    dims = args.dim or 2
    monoid = MONOIDS[args.monoid]
    print(f"{'n_data':>8} {'n_query':>8} {'expanded':>10} {'elements':>12} {'calls':>6} {'seconds':>9}")
    for round_no in range(args.rounds):
        total = args.n0 << round_no
        half = total // 2
        data, queries = generate_instance(half, total - half, dims, args.seed + round_no)
        if args.monoid == "count":
            data = [p.__class__(p.id, p.coords, 1, False) for p in data]
        cfg = _config(args, dims)
        t0 = time.perf_counter()
        _, stats = run(data, queries, cfg)
        elapsed = time.perf_counter() - t0
        print(
            f"{stats.data_count:>8} {stats.query_count:>8} {stats.expanded_count:>10}"
            f" {stats.elements_processed:>12} {stats.primitive_calls:>6} {elapsed:>9.3f}"
        )
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "run": cmd_run,
        "verify": cmd_verify,
        "gen": cmd_gen,
        "bench": cmd_bench,
    }[args.command]
    try:
        return handler(args)
    except InputError as exc:
        print(f"domscan: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"domscan: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
