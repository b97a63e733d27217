"""Command-line interface: ``subdcor {infer,synth,bench,mcurve,pairs}``.

Every subcommand prints a one-line JSON summary on stdout.  Usage errors
exit with status 2, runtime failures with status 1.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .bench import METHODS, BenchmarkSpec, emit_report, run_benchmark
from .empirical import encode_columns
from .errors import SubdcorError
from .realdata import (
    PreprocessSpec,
    load_metadata,
    load_pair,
    pair_files,
    quantize,
    resolution_scan,
    write_scan_csv,
)
from .subsampling import DEFAULT_GRID, SubsampleConfig, infer_direction, m_stability_curve, select_p
from .synth import DEFAULT_NOISE_SUPPORT, FAMILIES, GeneratorSpec, generate, write_dataset

log = logging.getLogger("subdcor")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _q_grid(text: str) -> tuple[float, ...]:
    import numpy as np

    try:
        lo, hi, count = text.split(",")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo,hi,count, got {text!r}")
    if count < 1:
        raise argparse.ArgumentTypeError("grid count must be at least 1")
    return tuple(float(v) for v in np.linspace(lo, hi, count)) if count > 1 else (lo,)


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _add_method_flags(p: argparse.ArgumentParser):
    p.add_argument("--m", type=int, default=100, help="subsampled datasets per ensemble")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--q", type=float, help="fixed inclusion probability")
    g.add_argument("--q-grid", type=_q_grid, help="candidate grid as lo,hi,count")


def _grid(args) -> tuple[float, ...]:
    if args.q is not None:
        return (args.q,)
    return args.q_grid if args.q_grid is not None else DEFAULT_GRID


def _config(args) -> SubsampleConfig:
    return SubsampleConfig(m=args.m, p_grid=_grid(args), seed=args.seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="subdcor", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("infer", help="infer the causal direction of one pair file")
    p.add_argument("pairfile", type=Path)
    p.add_argument("--seed", type=_seed, required=True)
    _add_method_flags(p)
    p.add_argument("--k", type=int, help="quantize as round(10^k * value) before encoding")
    p.add_argument("--columns", type=_int_list, default=[1, 2], help="1-based x,y columns")
    p.add_argument("--skip-header", action="store_true")
    p.add_argument("--out", type=Path, help="CSV with the report row")

    p = sub.add_parser("synth", help="write one synthetic dataset")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--support", type=int, default=20, help="|X| (and |Y| unless --y-support)")
    p.add_argument("--y-support", type=int)
    p.add_argument("--noise", type=_int_list, default=list(DEFAULT_NOISE_SUPPORT))
    p.add_argument("--n-samples", type=int, default=2000)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("bench", help="replicated accuracy benchmark")
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--family", choices=FAMILIES, default="exp1-modified")
    p.add_argument("--support", type=_int_list, default=[20])
    p.add_argument("--n-datasets", type=int)
    p.add_argument("--n-samples", type=int)
    p.add_argument("--methods", default="SUB,DC")
    p.add_argument("--noise", type=_int_list, default=list(DEFAULT_NOISE_SUPPORT))
    p.add_argument("--tie-credit", type=float, default=0.5)
    p.add_argument("--paper-scale", action="store_true", help="1000 datasets x 2000 samples")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="fill the seconds column")
    p.add_argument("--out", type=Path)
    _add_method_flags(p)

    p = sub.add_parser("mcurve", help="score mean/stdev against ensemble size")
    p.add_argument("pairfile", type=Path, nargs="?")
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--family", choices=FAMILIES, help="generate the data instead of reading a file")
    p.add_argument("--support", type=int, default=20)
    p.add_argument("--n-samples", type=int, default=2000)
    p.add_argument("--k", type=int)
    p.add_argument("--m-values", type=_int_list, default=[10, 20, 50, 100])
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--out", type=Path)
    _add_method_flags(p)

    p = sub.add_parser("pairs", help="resolution scan over a directory of pair files")
    p.add_argument("directory", type=Path)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--k", type=_int_list, default=[0])
    p.add_argument("--tolerance", type=int, default=5, help="max support-size difference")
    p.add_argument("--max-support", type=int, default=50)
    p.add_argument("--meta", type=Path, help="'pair-id cause-col effect-col' records")
    p.add_argument("--skip-header", action="store_true")
    p.add_argument("--out", type=Path)
    _add_method_flags(p)
    return parser


def _emit(summary: dict):
    print(json.dumps(summary, sort_keys=True, separators=(",", ":")))


def _load_encoded(path, k, columns=(1, 2), skip_header=False):
    cols = tuple(c - 1 for c in columns)
    if len(cols) != 2 or min(cols) < 0:
        raise SubdcorError("--columns needs two 1-based column numbers")
    pair = load_pair(path, columns=cols, skip_header=skip_header)
    xs, ys = (pair.x, pair.y) if k is None else (quantize(pair.x, k), quantize(pair.y, k))
    return pair, encode_columns(xs, ys)


def cmd_infer(args) -> int:
    pair, ds = _load_encoded(args.pairfile, args.k, args.columns, args.skip_header)
    report = infer_direction(ds, _config(args))
    summary = {"pair_id": pair.id, "support_x": ds.x_support, "support_y": ds.y_support,
               **report.to_dict()}
    summary.pop("per_p_scores")
    if args.out is not None:
        with args.out.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(list(summary))
            w.writerow([repr(v) if isinstance(v, float) else v for v in summary.values()])
    _emit(summary)
    return 0


def cmd_synth(args) -> int:
    spec = GeneratorSpec(family=args.family, x_support=args.support,
                         y_support=args.y_support or args.support,
                         noise_support=tuple(args.noise), n=args.n_samples, seed=args.seed)
    gt = generate(spec)
    sidecar = write_dataset(gt, args.out)
    _emit({"out": str(args.out), "meta": str(sidecar), "family": spec.family, "n": gt.dataset.n,
           "support_x": gt.dataset.x_support, "support_y": gt.dataset.y_support,
           "truth": gt.truth.value})
    return 0


def cmd_bench(args, parser) -> int:
    methods = tuple(m.strip().upper() for m in args.methods.split(",") if m.strip())
    if not methods or any(m not in METHODS for m in methods):
        parser.error(f"--methods must be a subset of {','.join(METHODS)}")
    if args.n_datasets is not None and args.n_datasets < 1:
        parser.error("--n-datasets must be at least 1")
    if args.n_samples is not None and args.n_samples < 1:
        parser.error("--n-samples must be at least 1")
    if not args.support:
        parser.error("--support must list at least one size")
    kwargs = dict(family=args.family, support_sizes=tuple(args.support), methods=methods,
                  m=args.m, p_grid=_grid(args), noise_support=tuple(args.noise),
                  master_seed=args.seed, tie_credit=args.tie_credit)
    if args.n_datasets is not None:
        kwargs["n_datasets"] = args.n_datasets
    if args.n_samples is not None:
        kwargs["n_samples"] = args.n_samples
    spec = BenchmarkSpec.paper_scale(**kwargs) if args.paper_scale else BenchmarkSpec(**kwargs)
    report = run_benchmark(spec, workers=args.workers)
    if args.out is not None:
        emit_report(report, args.out, timing=args.timing)
    _emit({"family": spec.family, "n_datasets": spec.n_datasets, "n_samples": spec.n_samples,
           "cells": [{"method": c.method, "support_size": c.support_size,
                      "accuracy": c.accuracy, "ties": c.ties, "failures": c.failures}
                     for c in report.cells],
           "out": str(args.out) if args.out else None})
    return 0


def cmd_mcurve(args, parser) -> int:
    if (args.pairfile is None) == (args.family is None):
        parser.error("give either a pair file or --family")
    if args.reps < 1 or any(m < 2 for m in args.m_values) or not args.m_values:
        parser.error("--reps must be >= 1 and every --m-values entry >= 2")
    if args.family is not None:
        spec = GeneratorSpec(family=args.family, x_support=args.support, y_support=args.support,
                             n=args.n_samples, seed=args.seed)
        ds = generate(spec).dataset
    else:
        ds = _load_encoded(args.pairfile, args.k)[1]
    if args.q is not None:
        q = args.q
    else:
        q = select_p(ds, args.m, _grid(args), args.seed).p_star
    rows = m_stability_curve(ds, q, args.m_values, args.reps, args.seed)
    if args.out is not None:
        with args.out.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["m", "forward_mean", "forward_std", "backward_mean", "backward_std"])
            for r in rows:
                w.writerow([r.m, repr(r.forward_mean), repr(r.forward_std),
                            repr(r.backward_mean), repr(r.backward_std)])
    _emit({"q": q, "rows": len(rows), "out": str(args.out) if args.out else None})
    return 0


def cmd_pairs(args) -> int:
    truths = load_metadata(args.meta) if args.meta else {}
    spec = PreprocessSpec(max_support=args.max_support,
                          support_equality_tolerance=args.tolerance)
    cfg = _config(args)
    results = []
    correct = judged = 0
    for path in pair_files(args.directory):
        pair = load_pair(path, skip_header=args.skip_header)
        res = resolution_scan(pair, args.k, cfg, spec)
        results.append(res)
        log.info("%s: %s %s", pair.id, res.outcome, res.decision.value if res.decision else "")
        truth = truths.get(pair.id)
        if truth is not None and res.decision is not None:
            judged += 1
            correct += res.decision == truth
    if args.out is not None:
        write_scan_csv(results, args.out)
    _emit({"pairs": len(results),
           "stable": sum(r.outcome == "stable" for r in results),
           "unstable": sum(r.outcome == "unstable" for r in results),
           "no_eligible": sum(r.outcome == "no-eligible-resolution" for r in results),
           "judged": judged, "correct": correct,
           "out": str(args.out) if args.out else None})
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.command == "infer":
            return cmd_infer(args)
        if args.command == "synth":
            return cmd_synth(args)
        if args.command == "bench":
            return cmd_bench(args, parser)
        if args.command == "mcurve":
            return cmd_mcurve(args, parser)
        return cmd_pairs(args)
    except (SubdcorError, OSError) as exc:
        print(f"subdcor {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
