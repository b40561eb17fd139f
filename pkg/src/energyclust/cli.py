"""Command-line interface: ``energyclust {cluster,simulate,benchmark}``.

Exit codes: 0 success, 2 usage error, 3 data error.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import os
import sys

from . import __version__
from .baselines import BaselineSpec, baseline_dissimilarity_matrix
from .embedding import (
    TRANSFORMS,
    DataError,
    bivariate_sum_dissimilarity_matrix,
    joint_dissimilarity_matrix,
)
from .evaluation import Method, run_experiment
from .hclust import agglomerate, cut, default_k_max, select_k, silhouette
from .io import atomic_write, comment_line, dumps, format_matrix_csv, read_panel_csv, write_panel_csv
from .simgen import DEFAULT_BURN_IN, STABILITY_MARGIN, Scenario, SimSpec, build_experiment

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 2, 3

_BASELINES = {"acf": "ACF", "pacf": "PACF", "per": "PER", "per-lp": "PER_LP", "int-per": "INT_PER"}


class UsageError(Exception):
    pass


def _provenance(command, config):
    return {"tool": "energyclust", "version": __version__, "command": command, "config": config}


def _out_path(out_dir, name):
    return os.path.join(out_dir, name)


def _transform_name(text):
    name = text.replace("-", "_")
    if name not in TRANSFORMS:
        raise argparse.ArgumentTypeError(f"unknown transform {text!r}")
    return name


def _clusters(text):
    if text == "auto":
        return text
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("--clusters takes an integer or 'auto'") from None
    if k < 1:
        raise argparse.ArgumentTypeError("--clusters must be >= 1")
    return k


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _pos_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser():
    parser = argparse.ArgumentParser(prog="energyclust", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"energyclust {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cluster", help="cluster the columns of a CSV panel")
    c.add_argument("--input", required=True)
    c.add_argument("--transform", type=_transform_name, default="none")
    c.add_argument("--mode", choices=["joint", "bivariate-sum"], default="joint")
    c.add_argument("--lag", type=_nonneg_int, default=1)
    c.add_argument("--method", choices=["energy", *_BASELINES], default="energy")
    c.add_argument("--acf-L", dest="acf_L", type=_pos_int, default=10)
    c.add_argument("--acf-p", dest="acf_p", type=float, default=0.05)
    c.add_argument("--clusters", type=_clusters, default="auto")
    c.add_argument("--k-max", dest="k_max", type=_pos_int, default=None)
    c.add_argument("--seed", type=_nonneg_int, default=0,
                   help="recorded for provenance; clustering itself is deterministic")
    c.add_argument("--threads", type=_pos_int, default=None)
    c.add_argument("--out-dir", required=True)

    s = sub.add_parser("simulate", help="write a simulated benchmark panel and its ground truth")
    s.add_argument("--scenario", choices=[sc.value for sc in Scenario], required=True)
    s.add_argument("--n", type=_pos_int, default=None)
    s.add_argument("--seed", type=_nonneg_int, default=0)
    s.add_argument("--burn-in", dest="burn_in", type=_nonneg_int, default=DEFAULT_BURN_IN)
    s.add_argument("--out-dir", required=True)

    b = sub.add_parser("benchmark", help="replicated simulation comparison of methods")
    b.add_argument("--scenario", choices=[sc.value for sc in Scenario], required=True)
    b.add_argument("--method", action="append", default=[],
                   help="method descriptor, repeatable: energy:H, energy-sum:H, acf:L, pacf:L, per, per-lp, int-per")
    b.add_argument("--acf-p", dest="acf_p", type=float, default=0.05)
    b.add_argument("--reps", type=_pos_int, default=20)
    b.add_argument("--n", type=_pos_int, default=None)
    b.add_argument("--seed", type=_nonneg_int, default=0)
    b.add_argument("--burn-in", dest="burn_in", type=_nonneg_int, default=DEFAULT_BURN_IN)
    b.add_argument("--k-mode", dest="k_mode", choices=["known_K0", "silhouette"], default="known_K0")
    b.add_argument("--threads", type=_pos_int, default=1)
    b.add_argument("--out-dir", required=True)
    return parser


def _cluster_config(args):
    return {
        "input": args.input,
        "transform": args.transform,
        "sd_ddof": 1,
        "mode": args.mode,
        "lag": args.lag,
        "method": args.method,
        "acf_L": args.acf_L,
        "acf_p": args.acf_p,
        "clusters": args.clusters,
        "k_max": args.k_max,
        "seed": args.seed,
    }


def cmd_cluster(args):
    config = _cluster_config(args)
    if args.method in ("acf", "pacf") and not 0 < args.acf_p < 1:
        raise UsageError("--acf-p must lie in (0, 1)")
    panel = TRANSFORMS[args.transform](read_panel_csv(args.input))
    d = panel.d
    if args.clusters != "auto" and args.clusters > d:
        raise UsageError(f"--clusters {args.clusters} exceeds the {d} components")
    if args.clusters == "auto":
        k_max = default_k_max(d) if args.k_max is None else args.k_max
        if not 2 <= k_max <= d - 1:
            raise UsageError(f"--k-max must be in [2, {d - 1}] for {d} components")
        config["k_max"] = k_max

    if args.method == "energy":
        if args.lag >= panel.n:
            raise DataError(f"lag {args.lag} needs more than {panel.n} observations")
        if args.mode == "joint":
            D = joint_dissimilarity_matrix(panel, args.lag, args.threads)
        else:
            D = bivariate_sum_dissimilarity_matrix(panel, args.lag, args.threads)
    else:
        spec = BaselineSpec(_BASELINES[args.method], args.acf_L, args.acf_p)
        D = baseline_dissimilarity_matrix(panel, spec)

    dend = agglomerate(D)
    meta = _provenance("cluster", config)
    partition = {"config": config, "version": __version__, "leaves": list(panel.names)}
    if args.clusters == "auto":
        K, reports = select_k(dend, D, config["k_max"])
        partition["silhouette"] = {"reports": [r.to_dict() for r in reports], "selected_K": K}
    else:
        K = args.clusters
        if K >= 2:
            partition["silhouette"] = {"reports": [silhouette(D, cut(dend, K)).to_dict()], "selected_K": K}
    labels = cut(dend, K)
    partition["K"] = int(K)
    partition["labels"] = {name: int(lab) for name, lab in zip(panel.names, labels)}

    os.makedirs(args.out_dir, exist_ok=True)
    atomic_write(_out_path(args.out_dir, "dissimilarity.csv"), format_matrix_csv(panel.names, D, meta))
    atomic_write(_out_path(args.out_dir, "dendrogram.json"),
                 dumps({"config": config, "version": __version__, **dend.to_dict(panel.names)}))
    # Newick comments cannot contain square brackets
    newick_meta = comment_line(meta)[2:].strip().replace("[", "(").replace("]", ")")
    atomic_write(_out_path(args.out_dir, "dendrogram.nwk"), f"[{newick_meta}]\n{dend.to_newick(panel.names)}\n")
    atomic_write(_out_path(args.out_dir, "partition.json"), dumps(partition))
    print(f"clustered {d} components into K={K}; outputs in {args.out_dir}")


def _sim_spec(args):
    return SimSpec(Scenario(args.scenario), args.n or 0, args.seed, args.burn_in)


def cmd_simulate(args):
    spec = _sim_spec(args)
    panel, truth = build_experiment(spec)
    config = {**spec.to_dict(), "normalized": True, "sd_ddof": 1,
              "var1_scaling": f"divide by {STABILITY_MARGIN} * largest singular value",
              "var2_scaling": "divide by largest eigenvalue of (B1+B2)(B1+B2)^T"}
    meta = _provenance("simulate", config)
    os.makedirs(args.out_dir, exist_ok=True)
    write_panel_csv(_out_path(args.out_dir, "panel.csv"), panel, meta)
    doc = {"config": config, "version": __version__, "names": list(panel.names), **truth.to_dict()}
    atomic_write(_out_path(args.out_dir, "ground_truth.json"), dumps(doc))
    print(f"wrote {panel.n}x{panel.d} panel for {spec.scenario.value} to {args.out_dir}")


def cmd_benchmark(args):
    if not args.method:
        raise UsageError("benchmark needs at least one --method")
    try:
        methods = [Method.parse(m, args.acf_p) for m in args.method]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    spec = _sim_spec(args)
    report = run_experiment(spec, methods, args.reps, args.seed, args.k_mode, args.threads)
    # threads and output location do not affect results and are left out
    config = {**spec.to_dict(), "methods": [m.label for m in methods], "acf_p": args.acf_p,
              "reps": args.reps, "k_mode": args.k_mode}
    doc = {"config": config, "version": __version__, **report.to_dict()}
    buf = _io.StringIO()
    buf.write(comment_line(_provenance("benchmark", config)))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["replicate", "seed", "method", "similarity", "K"])
    for r in range(report.reps):
        for m in report.methods:
            writer.writerow([r, args.seed ^ r, m, repr(report.scores[m][r]), report.chosen_k[m][r]])
    os.makedirs(args.out_dir, exist_ok=True)
    atomic_write(_out_path(args.out_dir, "report.json"), dumps(doc))
    atomic_write(_out_path(args.out_dir, "scores.csv"), buf.getvalue())
    for m, summ in report.summary().items():
        print(f"{m:>12}  mean={summ['mean']:.4f}  median={summ['median']:.4f}")


COMMANDS = {"cluster": cmd_cluster, "simulate": cmd_simulate, "benchmark": cmd_benchmark}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"energyclust: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ValueError, OSError) as exc:
        print(f"energyclust: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
