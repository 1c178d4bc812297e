"""Command-line interface: ``c4cluster {cluster,benchmark,arn,simulate}``.

Exit codes: 0 ok, 1 internal error, 2 input validation error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import platform
import sys
import time
import warnings
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .arn import log_populations, parse_arn, population_similarity, symmetrize, write_node_metadata
from .benchmark import run_benchmark, select_cells
from .c4 import DEFAULT_ALPHA_GRID, C4Config, SilhouetteDegeneracyWarning, run_c4
from .errors import C4Error, DimensionMismatchError
from .fileio import (
    read_covariates,
    read_dense_matrix,
    read_edge_list,
    write_covariates,
    write_edge_list,
    write_labels,
)
from .graph import CovariateTable, SimilarityMatrix, WeightedGraph, drop_isolated
from .kmeans import KMeansConfig
from .metrics import community_summary, density_table, node_strength, relabel_by_size, write_community_summary
from .similarity import SimilaritySpec
from .simgen import SimConfig, generate

log = logging.getLogger("c4cluster")


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(out_dir: Path, command: str, config: dict, seeds: dict, inputs, started: float, outputs=None):
    manifest = {
        "command": command,
        "tool_version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "config": config,
        "seeds": seeds,
        "inputs": {str(p): _sha256(p) for p in inputs},
        "outputs": outputs or [],
        "timing": {"started_unix": round(started, 3), "elapsed_seconds": round(time.time() - started, 3)},
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _parse_grid(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad alpha grid {text!r}") from None


def _c4_config(args) -> C4Config:
    if args.alpha is not None:
        grid = (args.alpha,)
    elif args.alpha_grid is not None:
        grid = args.alpha_grid
    else:
        grid = DEFAULT_ALPHA_GRID
    eps_sil = args.eps_sil if args.eps_sil is not None else args.eps
    return C4Config(
        alpha_grid=grid,
        k_true=args.k,
        epsilon_sil=eps_sil,
        k_max=args.k_max,
        kmeans=KMeansConfig(restarts=args.kmeans_restarts, seed=args.seed),
    )


def _add_c4_flags(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--alpha-grid", type=_parse_grid, help="comma-separated ascending alphas in [0,1]")
    g.add_argument("--alpha", type=float, help="pin alpha to a single value")
    p.add_argument("--k", type=int, help="pin the number of clusters (skips eigengap selection)")
    p.add_argument("--k-max", type=int, help="upper bound of the eigengap scan (default min(n-1, 30))")
    p.add_argument("--eps", type=float, default=1e-8, help="distance guard for similarity and silhouette")
    p.add_argument("--eps-sil", type=float, help="separate epsilon for silhouette distances")
    p.add_argument("--seed", type=int, default=0, help="k-means seed")
    p.add_argument("--kmeans-restarts", type=int, default=20)
    p.add_argument("--out", type=Path, required=True, help="output directory")


def _run_c4_reporting(w, s, cfg):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", SilhouetteDegeneracyWarning)
        res = run_c4(w, s, cfg)
    for wmsg in caught:
        if issubclass(wmsg.category, SilhouetteDegeneracyWarning):
            print(f"warning: {wmsg.message}", file=sys.stderr)
    return res


def _align_covariates(table: CovariateTable, ids) -> CovariateTable:
    pos = {v: i for i, v in enumerate(table.node_ids)}
    missing = [v for v in ids if v not in pos]
    if missing:
        raise DimensionMismatchError(f"no covariates for nodes {missing[:10]}")
    return CovariateTable(table.rows[[pos[v] for v in ids]], tuple(ids))


def _load_graph(path, fmt, nodes=None) -> WeightedGraph:
    if fmt == "edgelist":
        return read_edge_list(path, nodes=nodes)
    m, header = read_dense_matrix(path)
    return WeightedGraph(m, header)


def cmd_cluster(args) -> int:
    started = time.time()
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    inputs = [args.graph]

    if args.similarity == "precomputed":
        if args.similarity_file is None:
            raise C4Error("--similarity precomputed needs --similarity-file")
        inputs.append(args.similarity_file)
        w = _load_graph(args.graph, args.graph_format)
        m, header = read_dense_matrix(args.similarity_file)
        s = SimilarityMatrix(m, header)
        if header is not None:
            pos = {v: i for i, v in enumerate(header)}
            missing = [v for v in w.ids if v not in pos]
            if missing:
                raise DimensionMismatchError(f"no similarity rows for nodes {missing[:10]}")
            idx = [pos[v] for v in w.ids]
            s = SimilarityMatrix(m[np.ix_(idx, idx)], w.ids)
    else:
        if args.covariates is None:
            raise C4Error(f"--similarity {args.similarity} needs --covariates")
        inputs.append(args.covariates)
        table = read_covariates(args.covariates)
        w = _load_graph(args.graph, args.graph_format, nodes=table.node_ids)
        table = _align_covariates(table, w.ids)
        s = SimilaritySpec(args.similarity, args.eps).build(table)
    if s.n != w.n:
        raise DimensionMismatchError(f"graph has {w.n} nodes, similarity has {s.n}")

    dropped = []
    if args.drop_isolated:
        w, keep, dropped = drop_isolated(w)
        if dropped:
            s = s.subset(keep)
            log.warning("dropped %d isolated nodes: %s", len(dropped), dropped[:20])

    cfg = _c4_config(args)
    res = _run_c4_reporting(w, s, cfg)
    labels = relabel_by_size(res.labels)
    write_labels(w.ids, labels, out / "labels.csv")
    result = res.to_dict()
    result.update(n_nodes=w.n, dropped_nodes=list(dropped), cluster_sizes=[int(x) for x in labels.sizes()])
    (out / "result.json").write_text(json.dumps(result, indent=2) + "\n", encoding="utf-8")
    write_manifest(
        out, "cluster", _config_snapshot(args, cfg), {"kmeans": args.seed}, inputs, started,
        ["labels.csv", "result.json"],
    )
    print(f"alpha_opt={res.alpha_opt:g} k_opt={res.k_opt} silhouette={res.silhouette:.4f}")
    return 0


def _config_snapshot(args, cfg: C4Config = None) -> dict:
    snap = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items() if k != "func"}
    if cfg is not None:
        snap["c4"] = {
            "alpha_grid": list(cfg.alpha_grid), "k_true": cfg.k_true, "epsilon_sil": cfg.epsilon_sil,
            "k_max": cfg.k_max, "kmeans": asdict(cfg.kmeans),
        }
    return snap


def _weighting_arg(text):
    return None if text == "unweighted" else float(text)


def cmd_benchmark(args) -> int:
    started = time.time()
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    cells = select_cells(
        n=args.n, k=args.k, sigma=args.sigma, b_btw=args.b_btw, weighting=args.weighting, b_win=args.b_win
    )
    if not cells:
        raise C4Error("lattice selection is empty")
    report = run_benchmark(
        cells, args.replicates, seed=args.seed, parallelism=args.parallelism,
        kmeans_restarts=args.kmeans_restarts, external=args.external_method,
    )
    paths = report.write(out)
    write_manifest(
        out, "benchmark", _config_snapshot(args), {"base_seed": args.seed}, [], started,
        [Path(p).name for p in paths.values()],
    )
    total = len(report.rows)
    print(f"{total} rows, {report.n_failed} failed -> {out}")
    if total and report.n_failed == total:
        print("error: every replicate failed", file=sys.stderr)
        return 1
    return 0


def cmd_arn(args) -> int:
    started = time.time()
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    net = parse_arn(args.edges, args.cities, unit=args.unit)
    counts = net.summary()
    print("parsed: " + ", ".join(f"{k}={v}" for k, v in counts.items()))
    w = symmetrize(net)
    s = population_similarity(net)
    w, keep, dropped = drop_isolated(w)
    if dropped:
        log.warning("dropped %d cities isolated after symmetrization: %s", len(dropped), dropped)
        s = s.subset(keep)
    names = [net.names[i] for i in keep]
    populations = net.populations[keep]

    cfg = _c4_config(args)
    res = _run_c4_reporting(w, s, cfg)
    labels = relabel_by_size(res.labels)

    write_labels(w.ids, labels, out / "labels.csv")
    write_edge_list(w, out / "graph.tsv")
    write_covariates(log_populations(net), out / "covariates.csv")
    write_node_metadata(net, out / "node_metadata.csv")
    summary = community_summary(w, labels, populations, names)
    write_community_summary(summary, out / "community_summary.csv")
    dens = density_table(w, labels)
    dens.to_csv(out / "density.csv")
    strength = node_strength(w)
    with open(out / "strength.csv", "w", encoding="utf-8") as fh:
        fh.write("node_id,name,strength,cluster\n")
        for cid, name, st, lab in zip(w.ids, names, strength, labels.labels):
            fh.write(f"{cid},\"{name}\",{st!r},{lab}\n")
    result = res.to_dict()
    result.update(
        parse_counts=counts, n_nodes=w.n, dropped_nodes=dropped,
        cluster_sizes=[int(x) for x in labels.sizes()],
        within_density=[float(dens.densities[i, i]) for i in range(dens.k)],
    )
    (out / "result.json").write_text(json.dumps(result, indent=2) + "\n", encoding="utf-8")
    write_manifest(
        out, "arn", _config_snapshot(args, cfg), {"kmeans": args.seed}, [args.edges, args.cities], started,
        ["labels.csv", "graph.tsv", "covariates.csv", "node_metadata.csv", "community_summary.csv",
         "density.csv", "strength.csv", "result.json"],
    )
    print(f"alpha_opt={res.alpha_opt:g} k_opt={res.k_opt} sizes={result['cluster_sizes']}")
    return 0


def cmd_simulate(args) -> int:
    started = time.time()
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    cfg = SimConfig(
        n=args.n, k=args.k, sigma=args.sigma, b_win=args.b_win, b_btw=args.b_btw,
        theta_win=args.weighting, seed=args.seed,
    )
    inst = generate(cfg)
    write_edge_list(inst.graph, out / "graph.tsv")
    write_covariates(inst.covariates, out / "covariates.csv")
    write_labels(inst.graph.ids, inst.truth, out / "truth.csv")
    write_manifest(out, "simulate", _config_snapshot(args), {"generator": args.seed}, [], started,
                   ["graph.tsv", "covariates.csv", "truth.csv"])
    print(f"wrote instance with {inst.graph.n} nodes and {inst.graph.n_edges()} edges to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="c4cluster", description="Covariate-assisted spectral community detection")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster a graph with node covariates")
    p.add_argument("--graph", type=Path, required=True)
    p.add_argument("--graph-format", choices=("edgelist", "dense"), default="edgelist")
    p.add_argument("--covariates", type=Path)
    p.add_argument("--similarity-file", type=Path)
    p.add_argument("--similarity", choices=("inverse_euclidean", "mean_value", "precomputed"), default="inverse_euclidean")
    p.add_argument("--drop-isolated", action="store_true")
    _add_c4_flags(p)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("benchmark", help="run the simulation lattice")
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--k", type=int, nargs="+")
    p.add_argument("--sigma", type=float, nargs="+")
    p.add_argument("--b-btw", type=float, nargs="+")
    p.add_argument("--b-win", type=float, default=0.6)
    p.add_argument("--weighting", type=_weighting_arg, nargs="+", help="'unweighted' and/or theta_win values")
    p.add_argument("--replicates", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--parallelism", type=int, default=1)
    p.add_argument("--kmeans-restarts", type=int, default=20)
    p.add_argument("--external-method", help="extra labeler as 'module:function'")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("arn", help="airline reachability network pipeline")
    p.add_argument("--edges", type=Path, required=True)
    p.add_argument("--cities", type=Path, required=True)
    p.add_argument("--unit", choices=("minutes", "hours"), default="minutes")
    _add_c4_flags(p)
    p.set_defaults(func=cmd_arn)

    p = sub.add_parser("simulate", help="write one synthetic instance")
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--sigma", type=float, default=2.0)
    p.add_argument("--b-win", type=float, default=0.6)
    p.add_argument("--b-btw", type=float, default=0.3)
    p.add_argument("--weighting", type=_weighting_arg, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (C4Error, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
