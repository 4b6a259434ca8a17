"""Command-line interface: ``dcmase simulate | fit | estimate``."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .baselines import METHODS, baseline_cluster, bias_adjusted_sos_embed, mase_embed, \
    mean_adjacency_embed
from .clustering import KMeansConfig
from .estimation import mse_table, plugin_estimates
from .joint import dcmase
from .simulation import parse_config, run_sweep, write_outputs

EXIT_USAGE = 2


def _int_or_auto(value: str):
    return value if value == "auto" else int(value)


def _ranks(value: str):
    if value == "auto":
        return value
    return [int(v) for v in value.split(",")]


def _grid(value: str):
    return [int(v) for v in value.split(",")]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dcmase", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a simulation sweep from a JSON config")
    sim.add_argument("config")
    sim.add_argument("--out", default="results")
    sim.add_argument("--threads", type=int, default=None)

    fit = sub.add_parser("fit", help="cluster the vertices of a multilayer network")
    fit.add_argument("layers", nargs="+", help="dense CSV matrices or layered TSV edge lists")
    fit.add_argument("--k", type=int, required=True, help="number of communities")
    fit.add_argument("--k-tilde", type=_int_or_auto, default=None)
    fit.add_argument("--ranks", type=_ranks, default=None, help="comma list or 'auto'")
    fit.add_argument("--method", default="dcmase", choices=sorted(METHODS))
    fit.add_argument("--seed", type=int, default=0)
    fit.add_argument("--restarts", type=int, default=50)
    fit.add_argument("--n", type=int, default=None, help="vertex count for edge lists")
    fit.add_argument("--out", default=".")

    est = sub.add_parser("estimate", help="plug-in parameters and out-of-sample MSE")
    est.add_argument("layers", nargs="+")
    est.add_argument("--labels", required=True)
    est.add_argument("--oos", action="store_true")
    est.add_argument("--k-grid", type=_grid, default=None)
    est.add_argument("--method", default="dcmase", choices=sorted(METHODS))
    est.add_argument("--seed", type=int, default=0)
    est.add_argument("--restarts", type=int, default=50)
    est.add_argument("--n", type=int, default=None)
    est.add_argument("--out", default=".")
    return parser


def cmd_simulate(args) -> int:
    try:
        with open(args.config) as fh:
            data = json.load(fh)
        cfg = parse_config(data)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"dcmase simulate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    records = run_sweep(cfg.scenario, cfg.methods, cfg.noiseless, cfg.timing, args.threads)
    paths = write_outputs(records, args.out, cfg.scenario, cfg.svg)
    for p in paths.values():
        print(p)
    return 0


def _fit_embedding(layers, args, cluster):
    if args.method == "dcmase":
        res = dcmase(layers, args.k, args.ranks, args.k_tilde, cluster)
        return res.labels, res.joint.U
    if args.method == "mean_adj":
        emb = mean_adjacency_embed(layers, args.k)
    elif args.method == "sos":
        emb = bias_adjusted_sos_embed(layers, args.k)
    else:
        ranks = args.k if args.ranks in (None, "auto") else args.ranks
        emb = mase_embed(layers, ranks, args.k)
    return baseline_cluster(emb, args.k, True, cluster), emb


def cmd_fit(args) -> int:
    try:
        layers = io.read_layers(args.layers, args.n)
    except (OSError, ValueError) as exc:
        print(f"dcmase fit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    cluster = KMeansConfig(restarts=args.restarts, seed=args.seed)
    try:
        labels, emb = _fit_embedding(layers, args, cluster)
    except ValueError as exc:
        print(f"dcmase fit: {exc}", file=sys.stderr)
        return 1
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    io.write_labels_csv(labels, out / "labels.csv")
    io.write_embedding_csv(emb, out / "embedding.csv")
    print(out / "labels.csv")
    print(out / "embedding.csv")
    return 0


def cmd_estimate(args) -> int:
    try:
        layers = io.read_layers(args.layers, args.n)
        labels = io.read_labels_csv(args.labels)
    except (OSError, ValueError) as exc:
        print(f"dcmase estimate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if labels.shape[0] != layers[0].shape[0]:
        print(f"dcmase estimate: {labels.shape[0]} labels for {layers[0].shape[0]} vertices",
              file=sys.stderr)
        return EXIT_USAGE
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        params = plugin_estimates(layers, labels)
    except ValueError as exc:
        print(f"dcmase estimate: {exc}", file=sys.stderr)
        return 1
    params.to_json(out / "params.json")
    print(out / "params.json")
    if args.oos:
        grid = args.k_grid or [int(np.unique(labels).size)]
        cluster = KMeansConfig(restarts=args.restarts, seed=args.seed)
        rows = mse_table(layers, args.method, grid, cluster)
        with open(out / "mse.csv", "w", newline="") as fh:
            w = csv.DictWriter(fh, ["K", "layer", "mse"], lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({**r, "mse": repr(r["mse"])})
        print(out / "mse.csv")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"simulate": cmd_simulate, "fit": cmd_fit, "estimate": cmd_estimate}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
