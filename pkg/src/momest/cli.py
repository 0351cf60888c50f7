"""Command-line interface: ``run``, ``bounds``, and ``demo`` subcommands.

Exit codes: 0 success, 1 configuration/usage error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import bench, vc_bounds


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="momest",
        description="Robust median-of-means estimation benchmarks and bound sheets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a JSON experiment config")
    p_run.add_argument("config", help="path to the experiment config (JSON, version 1)")
    p_run.add_argument("--csv", help="override the CSV output path")
    p_run.add_argument("--svg", help="override the SVG output path")

    p_bounds = sub.add_parser(
        "bounds", help="print the theoretical bound sheet for one context"
    )
    p_bounds.add_argument("context", choices=vc_bounds.CONTEXTS)
    p_bounds.add_argument("--k", type=int, required=True, help="number of blocks")
    p_bounds.add_argument("--n", type=int, required=True, help="sample size")
    p_bounds.add_argument("--d", type=int, help="ambient dimension")
    p_bounds.add_argument("--s", type=int, help="sparsity")
    p_bounds.add_argument("--r", type=int, help="target rank (cov_lowrank)")
    p_bounds.add_argument("--sigma", type=float, help="weak variance scale")
    p_bounds.add_argument(
        "--sigma-half-norm", type=float, help="operator norm of the covariance square root"
    )
    p_bounds.add_argument("--lambda1", type=float, help="largest covariance eigenvalue")
    p_bounds.add_argument("--gamma", type=float, help="small-ball constant in (0, 1]")
    p_bounds.add_argument(
        "--band-dims", help="comma-separated band dimensions (eigensplit)"
    )
    p_bounds.add_argument("--n-outliers", type=int, default=0)
    p_bounds.add_argument("--c-multiplier", type=float, default=1.0)

    p_demo = sub.add_parser("demo", help="run a pinned desk-scale scenario")
    p_demo.add_argument("name", nargs="?", help="scenario name (omit to list)")
    p_demo.add_argument("--outdir", default=".", help="directory for the artifacts")
    return parser


def _cmd_run(args) -> int:
    config = bench.ExperimentConfig.from_json(args.config)
    if args.csv:
        config.outputs["csv"] = args.csv
    if args.svg:
        config.outputs["svg"] = args.svg
    result = bench.run_experiment(config)
    failed = result.failed_replicates()
    written = bench.emit_outputs(result)
    for cell in result.cells:
        q = cell.quantile(result.config.deltas[0]) if result.config.deltas else float("nan")
        print(
            f"{cell.estimator}: n={cell.n} d={cell.d} s={cell.s} k={cell.k} "
            f"eps={cell.epsilon:g} -> quantile={q:.6g} coverage={cell.coverage():.3g}"
        )
    if failed:
        print(f"note: {failed} replicate(s) recorded errors", file=sys.stderr)
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_bounds(args) -> int:
    params = {}
    for key in ("d", "s", "r", "sigma", "lambda1", "gamma"):
        value = getattr(args, key)
        if value is not None:
            params[key] = value
    if args.sigma_half_norm is not None:
        params["sigma_half_norm"] = args.sigma_half_norm
    if args.band_dims is not None:
        params["band_dims"] = [int(x) for x in args.band_dims.split(",") if x.strip()]
    try:
        sheet = vc_bounds.risk_radius(
            args.context,
            k=args.k,
            n=args.n,
            n_outliers=args.n_outliers,
            c_multiplier=args.c_multiplier,
            **params,
        )
    except KeyError as exc:
        missing = str(exc.args[0])
        raise bench.ConfigError(
            f"context {args.context!r} needs parameter {missing!r} "
            f"(pass --{missing.replace('_', '-')})"
        ) from exc
    print(f"context: {sheet.context}")
    print(f"vc_bound: {sheet.vc_bound!r}")
    print(f"k_threshold: {sheet.k_threshold!r}")
    print(f"risk_radius: {sheet.risk_radius!r}")
    print(f"failure_prob: {sheet.failure_prob!r}")
    print(f"params: {sheet.params!r}")
    return 0


def _cmd_demo(args) -> int:
    if not args.name:
        print("available demo scenarios:")
        for name in bench.demo_names():
            print(f"  {name:18s} {bench.demo_description(name)}")
        return 0
    config = bench.demo_config(args.name)
    os.makedirs(args.outdir, exist_ok=True)
    config.outputs = {
        fmt: os.path.join(args.outdir, os.path.basename(path))
        for fmt, path in config.outputs.items()
    }
    result = bench.run_experiment(config)
    for cell in result.cells:
        q = cell.quantile(config.deltas[0]) if config.deltas else float("nan")
        print(
            f"{cell.estimator}: n={cell.n} d={cell.d} s={cell.s} k={cell.k} "
            f"eps={cell.epsilon:g} -> quantile={q:.6g} coverage={cell.coverage():.3g}"
        )
    for path in bench.emit_outputs(result):
        print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; this CLI reserves 2 for I/O
        # problems, so usage errors are folded into the config-error code.
        return 1 if exc.code else 0
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "bounds":
            return _cmd_bounds(args)
        return _cmd_demo(args)
    except bench.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
