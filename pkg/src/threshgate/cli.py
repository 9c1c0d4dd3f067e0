"""Command-line surface tying the pipeline together.

Exit codes: 0 success, 1 error, 2 manual analysis required.
"""
from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .evaluation import (
    NoNegatives,
    NoPositives,
    UnknownPositiveClass,
    confusion,
    metrics,
    optimal_f1_threshold,
    roc_curve,
)
from .gaussfit import DualGaussianParams, FitReport, GaussianParams, eval_dual, eval_gaussian, fit_dual, fit_single
from .histogram import DegenerateRange, build_histogram
from .model_select import ModelKind
from .similarity import LengthMismatch, ZeroNorm, compute_distances, sort_by_distance
from .store import (
    DistanceTable,
    StoreError,
    format_sig9,
    read_distance_table,
    read_embedding_store,
    read_labels,
    write_distance_table,
)
from .threshold import auto_threshold

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MANUAL = 2

TIMESTAMP_ENV = "THRESHGATE_FIXED_TIMESTAMP"


def _atomic_write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _round9(obj):
    """Round every float to 9 significant digits; non-finite values to strings."""
    if isinstance(obj, dict):
        return {k: _round9(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round9(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        if not math.isfinite(obj):
            return repr(obj)
        return float(f"{obj:.9g}")
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _digest(path: str | Path) -> dict:
    data = Path(path).read_bytes()
    return {"bytes": len(data), "sha256": hashlib.sha256(data).hexdigest()}


def _params_dict(params: GaussianParams | DualGaussianParams) -> dict:
    if isinstance(params, DualGaussianParams):
        return {
            "a1": params.g1.a,
            "mu1": params.g1.mu,
            "sigma1": params.g1.sigma,
            "a2": params.g2.a,
            "mu2": params.g2.mu,
            "sigma2": params.g2.sigma,
        }
    return {"a": params.a, "mu": params.mu, "sigma": params.sigma}


def _fit_dict(report: FitReport | None) -> dict | None:
    if report is None:
        return None
    return {
        "params": _params_dict(report.params),
        "converged": report.converged,
        "valid": report.valid,
        "delta": report.delta,
        "epsilon": report.epsilon,
        "iterations": report.iterations,
        "rss": report.rss,
    }


def _metrics_dict(report) -> dict:
    return {
        "threshold": report.threshold,
        "n_results": report.n_results,
        "f1": report.f1,
        "precision": report.precision,
        "recall": report.recall,
        "accuracy": report.accuracy,
        "specificity": report.specificity,
        "zero_division": report.zero_division,
    }


def _emit_report(report: dict, path: str | None) -> None:
    ts = os.environ.get(TIMESTAMP_ENV)
    if ts is not None:
        report = {"timestamp": ts, **report}
    text = json.dumps(_round9(report), indent=2) + "\n"
    if path:
        _atomic_write_text(path, text)
    else:
        sys.stdout.write(text)


def _load_table(path: str) -> DistanceTable:
    with open(path, "r", encoding="utf-8") as fh:
        return read_distance_table(fh)


def cmd_distances(args: argparse.Namespace) -> int:
    with open(args.embeddings, "rb") as fh:
        store = read_embedding_store(fh)
    with open(args.query, "rb") as fh:
        query_store = read_embedding_store(fh)
    if len(query_store) != 1:
        raise StoreError(f"query store must hold exactly 1 record, has {len(query_store)}")
    if query_store.dim != store.dim:
        raise StoreError(
            f"dimension mismatch: embeddings dim {store.dim}, query dim {query_store.dim}"
        )
    table = sort_by_distance(compute_distances(store, query_store.records[0].vector))
    buf = io.StringIO()
    write_distance_table(table, buf)
    _atomic_write_text(args.out, buf.getvalue())
    return EXIT_OK


def cmd_threshold(args: argparse.Namespace) -> int:
    table = _load_table(args.distances)
    decision = auto_threshold(
        table, bins=args.bins, delta_factor=args.delta_factor, k_std=args.k_std
    )
    manual = decision.tau is None
    status = EXIT_MANUAL if manual else EXIT_OK
    report = {
        "version": __version__,
        "inputs": {"distances": _digest(args.distances)},
        "bins": args.bins,
        "delta_factor": args.delta_factor,
        "k_std": args.k_std,
        "model": decision.model.variant.value,
        "fits": {
            "dual": _fit_dict(decision.model.dual_report),
            "single": _fit_dict(decision.model.single_report),
        },
        "tau": decision.tau,
        "n_selected": decision.n_selected,
        "exit_status": status,
    }
    if args.out:
        _atomic_write_text(args.out, "".join(f"{id_}\n" for id_ in decision.selected_ids))
    _emit_report(report, args.report)
    if manual:
        print("no threshold determined: results must be analyzed manually", file=sys.stderr)
    return status


def cmd_evaluate(args: argparse.Namespace) -> int:
    if args.threshold is not None and args.auto:
        print("error: --threshold and --auto are mutually exclusive", file=sys.stderr)
        return EXIT_ERROR
    table = _load_table(args.distances)
    with open(args.labels, "r", encoding="utf-8") as fh:
        labels = read_labels(fh)
    status = EXIT_OK
    tau = args.threshold
    model = None
    if args.auto:
        decision = auto_threshold(
            table, bins=args.bins, delta_factor=args.delta_factor, k_std=args.k_std
        )
        tau = decision.tau
        model = decision.model.variant.value
        if tau is None:
            status = EXIT_MANUAL
    opt_tau, opt_metrics = optimal_f1_threshold(table, labels, args.positive)
    threshold_block = None
    unlabeled = 0
    if tau is not None:
        counts = confusion(table, labels, args.positive, tau)
        unlabeled = counts.unlabeled
        threshold_block = _metrics_dict(metrics(counts, tau))
    report = {
        "version": __version__,
        "inputs": {
            "distances": _digest(args.distances),
            "labels": _digest(args.labels),
        },
        "positive": args.positive,
        "model": model,
        "threshold_metrics": threshold_block,
        "optimal_f1": _metrics_dict(opt_metrics),
        "unlabeled": unlabeled,
        "exit_status": status,
    }
    _emit_report(report, args.report)
    return status


def cmd_export(args: argparse.Namespace) -> int:
    table = _load_table(args.distances)
    d = table.distances
    if args.stats:
        print(f"min {format_sig9(float(d.min()))}")
        print(f"max {format_sig9(float(d.max()))}")
        print(f"mean {format_sig9(float(d.mean()))}")
        print(f"std {format_sig9(float(d.std()))}")
    hist = None
    if args.histogram or args.fits:
        hist = build_histogram(table, bins=args.bins)
    if args.histogram:
        lines = ["center,density"]
        lines += [
            f"{format_sig9(float(c))},{format_sig9(float(rho))}"
            for c, rho in zip(hist.centers, hist.densities)
        ]
        _atomic_write_text(args.histogram, "\n".join(lines) + "\n")
    if args.fits:
        mean = float(d.mean())
        std = float(d.std())
        dual = fit_dual(hist, mean, std)
        single = fit_single(hist, mean, std)
        f_dual = np.asarray(eval_dual(dual.params, hist.centers))
        f_single = np.asarray(eval_gaussian(single.params, hist.centers))
        lines = ["center,density,fit_dual,fit_single"]
        lines += [
            ",".join(format_sig9(float(v)) for v in row)
            for row in zip(hist.centers, hist.densities, f_dual, f_single)
        ]
        _atomic_write_text(args.fits, "\n".join(lines) + "\n")
    if args.roc:
        if not args.labels or not args.positive:
            print("error: --roc requires --labels and --positive", file=sys.stderr)
            return EXIT_ERROR
        with open(args.labels, "r", encoding="utf-8") as fh:
            labels = read_labels(fh)
        curve = roc_curve(table, labels, args.positive)
        lines = ["threshold,fpr,tpr"]
        lines += [
            f"{format_sig9(t)},{format_sig9(fpr)},{format_sig9(tpr)}"
            for fpr, tpr, t in curve.points
        ]
        _atomic_write_text(args.roc, "\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="threshgate",
        description="Automatic cosine-distance thresholding for sorted retrieval results",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distances", help="compute a sorted distance table from embedding stores")
    p.add_argument("--embeddings", required=True, help="binary embedding store of the images")
    p.add_argument("--query", required=True, help="binary store holding the single query vector")
    p.add_argument("--out", required=True, help="output path for the sorted distance table")
    p.set_defaults(func=cmd_distances)

    p = sub.add_parser("threshold", help="determine the automatic threshold and subset")
    p.add_argument("--distances", required=True)
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--delta-factor", type=float, default=2.0, dest="delta_factor")
    p.add_argument("--k-std", type=float, default=2.0, dest="k_std")
    p.add_argument("--report", help="JSON report path (default: stdout)")
    p.add_argument("--out", help="path for the selected ids, one per line")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("evaluate", help="evaluate a threshold against ground-truth labels")
    p.add_argument("--distances", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--positive", required=True)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--auto", action="store_true", help="evaluate the automatic threshold")
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--delta-factor", type=float, default=2.0, dest="delta_factor")
    p.add_argument("--k-std", type=float, default=2.0, dest="k_std")
    p.add_argument("--report", help="JSON report path (default: stdout)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("export", help="write plot-ready text exports")
    p.add_argument("--distances", required=True)
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--histogram", help="path for center,density rows")
    p.add_argument("--fits", help="path for center,density,fit_dual,fit_single rows")
    p.add_argument("--roc", help="path for threshold,fpr,tpr rows")
    p.add_argument("--labels")
    p.add_argument("--positive")
    p.add_argument("--stats", action="store_true", help="print min/max/mean/std of the distances")
    p.set_defaults(func=cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (
        StoreError,
        DegenerateRange,
        ZeroNorm,
        LengthMismatch,
        UnknownPositiveClass,
        NoPositives,
        NoNegatives,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
