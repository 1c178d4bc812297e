"""Seeded Monte Carlo benchmark over the simulation lattice.

Every (cell, replicate) task draws its own instance from a derived seed and
runs the structure-only, covariate-only and C4 methods with K known and
with K unknown. Rows are sorted before writing, so the output does not
depend on the number of worker processes. Wall times go to a separate
file because they are the only non-reproducible quantity.
"""

from __future__ import annotations

import csv
import importlib
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from threadpoolctl import threadpool_limits

from .c4 import C4Config, run_baseline, run_c4
from .errors import ConfigError
from .graph import Partition
from .kmeans import KMeansConfig
from .metrics import adjusted_rand_index
from .simgen import SimConfig, derive_seed, generate
from .similarity import inverse_euclidean_similarity

log = logging.getLogger(__name__)

METHODS = ("alpha0", "alpha1", "c4")
MODES = ("known", "unknown")
K_BINS = ("2", "3", "4", "5", "6", "7", "8", ">=9")

CELL_FIELDS = ("n", "k", "sigma", "b_win", "b_btw", "weighting")
ROW_FIELDS = CELL_FIELDS + (
    "replicate", "seed", "mode", "method", "status", "ari",
    "k_selected", "k_realized", "alpha", "silhouette", "error",
)


@dataclass
class BenchmarkReport:
    rows: list
    timings: list = field(default_factory=list)

    @property
    def n_failed(self) -> int:
        return sum(r["status"] != "ok" for r in self.rows)

    def aggregates(self) -> list:
        return aggregate(self.rows)

    def k_histogram(self) -> list:
        return k_histogram(self.rows)

    def write(self, out_dir) -> dict:
        """Write all report files into ``out_dir``; return their paths."""
        from pathlib import Path

        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "rows": out / "benchmark_rows.csv",
            "aggregates": out / "benchmark_aggregates.csv",
            "k_histogram": out / "benchmark_k_histogram.csv",
            "plot_ari": out / "plot_ari_long.csv",
            "timings": out / "benchmark_timings.csv",
        }
        _write_csv(paths["rows"], ROW_FIELDS, [_fmt_row(r) for r in self.rows])
        aggs = self.aggregates()
        _write_csv(paths["aggregates"], list(aggs[0]) if aggs else CELL_FIELDS, [_fmt_row(a) for a in aggs])
        hist = self.k_histogram()
        _write_csv(paths["k_histogram"], list(hist[0]) if hist else CELL_FIELDS, hist)
        plot_fields = CELL_FIELDS + ("mode", "method", "replicate", "ari")
        plot_rows = [{k: r[k] for k in plot_fields} for r in self.rows if r["status"] == "ok"]
        _write_csv(paths["plot_ari"], plot_fields, [_fmt_row(r) for r in plot_rows])
        _write_csv(paths["timings"], list(self.timings[0]) if self.timings else ["replicate"], self.timings)
        return {k: str(v) for k, v in paths.items()}


def _fmt(v):
    if isinstance(v, float):
        return "" if np.isnan(v) else repr(v)
    return "" if v is None else v


def _fmt_row(r):
    return {k: _fmt(v) for k, v in r.items()}


def _write_csv(path, fields, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.DictWriter(fh, fieldnames=list(fields), lineterminator="\n")
        wr.writeheader()
        wr.writerows(rows)


def read_rows(path) -> list:
    """Read a row-level CSV back with numeric fields restored."""
    ints = ("n", "k", "replicate", "seed", "k_selected", "k_realized")
    floats = ("sigma", "b_win", "b_btw", "ari", "alpha", "silhouette")
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for r in csv.DictReader(fh):
            for key in ints:
                r[key] = int(r[key]) if r[key] != "" else None
            for key in floats:
                r[key] = float(r[key]) if r[key] != "" else float("nan")
            out.append(r)
    return out


def _cell_of(r) -> tuple:
    return tuple(r[k] for k in CELL_FIELDS)


def aggregate(rows) -> list:
    """Median / quartile ARI and selection summaries per (cell, mode, method)."""
    groups = {}
    for r in rows:
        groups.setdefault((_cell_of(r), r["mode"], r["method"]), []).append(r)
    out = []
    for (cell, mode, method), rs in sorted(groups.items(), key=lambda kv: _group_sort_key(kv[0])):
        ok = [r for r in rs if r["status"] == "ok"]
        ari = np.array([r["ari"] for r in ok], dtype=float)
        ks = np.array([r["k_selected"] for r in ok])
        alphas = np.array([r["alpha"] for r in ok], dtype=float)
        rec = dict(zip(CELL_FIELDS, cell))
        rec.update(mode=mode, method=method, replicates=len(rs), failed=len(rs) - len(ok))
        if ok:
            q1, med, q3 = np.percentile(ari, [25, 50, 75])
            rec.update(
                ari_median=float(med), ari_q1=float(q1), ari_q3=float(q3), ari_mean=float(ari.mean()),
                k_correct=float(np.mean(ks == cell[1])), alpha_mean=float(alphas.mean()),
            )
        else:
            rec.update(ari_median=float("nan"), ari_q1=float("nan"), ari_q3=float("nan"),
                       ari_mean=float("nan"), k_correct=float("nan"), alpha_mean=float("nan"))
        out.append(rec)
    return out


def k_histogram(rows, mode: str = "unknown") -> list:
    """Counts of selected K in bins 2..8 and >=9 per (cell, method)."""
    groups = {}
    for r in rows:
        if r["mode"] != mode or r["status"] != "ok":
            continue
        key = (_cell_of(r), r["method"])
        counts = groups.setdefault(key, dict.fromkeys(K_BINS, 0))
        k = r["k_selected"]
        counts[">=9" if k >= 9 else str(k)] += 1
    out = []
    for (cell, method), counts in sorted(groups.items(), key=lambda kv: _group_sort_key((kv[0][0], mode, kv[0][1]))):
        rec = dict(zip(CELL_FIELDS, cell))
        rec["method"] = method
        rec.update(counts)
        out.append(rec)
    return out


def _method_rank(m):
    return METHODS.index(m) if m in METHODS else len(METHODS)


def _group_sort_key(key):
    cell, mode, method = key
    return (cell, MODES.index(mode), _method_rank(method), method)


def _row_sort_key(r):
    return (_cell_of(r), r["replicate"], MODES.index(r["mode"]), _method_rank(r["method"]), r["method"])


def load_external(spec: str):
    """Resolve ``"package.module:function"``.

    The callable receives ``(weights, similarity, k)`` as numpy arrays and an
    int or None, and returns a length-n label vector.
    """
    mod, _, name = spec.partition(":")
    if not name:
        raise ConfigError(f"external method must be 'module:function', got {spec!r}")
    try:
        return getattr(importlib.import_module(mod), name)
    except (ImportError, AttributeError) as exc:
        raise ConfigError(f"cannot load external method {spec!r}: {exc}") from exc


@dataclass(frozen=True)
class _Task:
    cell: SimConfig
    replicate: int
    base_seed: int
    modes: tuple
    kmeans_restarts: int
    alpha_grid: tuple
    external: Optional[str]


def _run_method(method, inst, s, cfg, external):
    if method == "c4":
        return run_c4(inst.graph, s, cfg)
    if method == "alpha0":
        return run_baseline(inst.graph, s, "structure_only", cfg)
    if method == "alpha1":
        return run_baseline(inst.graph, s, "covariate_only", cfg)
    labels = external(np.array(inst.graph.weights), np.array(s.sims), cfg.k_true)
    return Partition.from_labels(labels)


def _run_task(task: _Task):
    cell = task.cell
    seed = derive_seed(task.base_seed, cell, task.replicate)
    kmeans_seed = int(np.random.SeedSequence(seed, spawn_key=(1,)).generate_state(1)[0])
    base = {
        "n": cell.n, "k": cell.k, "sigma": float(cell.sigma), "b_win": float(cell.b_win),
        "b_btw": float(cell.b_btw), "weighting": cell.weighting, "replicate": task.replicate, "seed": seed,
    }
    rows, timings = [], []
    methods = METHODS + (("external",) if task.external else ())
    external = load_external(task.external) if task.external else None
    try:
        inst = generate(cell, seed=seed)
        s = inverse_euclidean_similarity(inst.covariates)
    except Exception as exc:  # noqa: BLE001 - recorded as a failed row
        for mode in task.modes:
            for method in methods:
                rows.append(_error_row(base, mode, method, exc))
        return rows, timings
    for mode in task.modes:
        cfg = C4Config(
            alpha_grid=task.alpha_grid,
            k_true=cell.k if mode == "known" else None,
            kmeans=KMeansConfig(restarts=task.kmeans_restarts, seed=kmeans_seed),
        )
        for method in methods:
            t0 = time.perf_counter()
            try:
                res = _run_method(method, inst, s, cfg, external)
            except Exception as exc:  # noqa: BLE001 - recorded as a failed row
                rows.append(_error_row(base, mode, method, exc))
                continue
            elapsed = time.perf_counter() - t0
            if isinstance(res, Partition):
                labels, k_sel, alpha, sil = res, res.k_realized, float("nan"), float("nan")
            else:
                labels, k_sel, alpha, sil = res.labels, res.k_opt, float(res.alpha_opt), float(res.silhouette)
            rows.append({
                **base, "mode": mode, "method": method, "status": "ok",
                "ari": adjusted_rand_index(labels, inst.truth), "k_selected": int(k_sel),
                "k_realized": labels.k_realized, "alpha": alpha, "silhouette": sil, "error": "",
            })
            timings.append({**base, "mode": mode, "method": method, "seconds": round(elapsed, 6)})
    return rows, timings


def _error_row(base, mode, method, exc):
    return {
        **base, "mode": mode, "method": method, "status": "error", "ari": float("nan"),
        "k_selected": None, "k_realized": None, "alpha": float("nan"), "silhouette": float("nan"),
        "error": type(exc).__name__,
    }


def _worker_init():
    threadpool_limits(1)


def _serial(tasks):
    with threadpool_limits(1):
        return [_run_task(t) for t in tasks]


def run_benchmark(
    cells,
    replicates: int,
    seed: int = 0,
    parallelism: int = 1,
    modes=MODES,
    kmeans_restarts: int = 20,
    alpha_grid=None,
    external: Optional[str] = None,
) -> BenchmarkReport:
    """Run every cell for ``replicates`` replicates.

    BLAS is pinned to one thread per process so that results are identical
    for any ``parallelism``.
    """
    if external:
        load_external(external)  # fail fast on a bad hook
    grid = C4Config().alpha_grid if alpha_grid is None else C4Config(alpha_grid=alpha_grid).alpha_grid
    tasks = [
        _Task(replace(c, seed=0), r, int(seed), tuple(modes), int(kmeans_restarts), grid, external)
        for c in cells
        for r in range(replicates)
    ]
    log.info("benchmark: %d cells x %d replicates, %d workers", len(cells), replicates, parallelism)
    if parallelism <= 1 or len(tasks) <= 1:
        results = _serial(tasks)
    else:
        with ProcessPoolExecutor(max_workers=parallelism, initializer=_worker_init) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=1))
    rows = [r for rs, _ in results for r in rs]
    timings = [t for _, ts in results for t in ts]
    rows.sort(key=_row_sort_key)
    timings.sort(key=_row_sort_key)
    return BenchmarkReport(rows, timings)


def select_cells(
    n=None, k=None, sigma=None, b_btw=None, weighting=None, b_win: float = 0.6
) -> list:
    """Filter the simulation lattice. Each argument is a collection of allowed
    values or None for all; ``weighting`` entries are ``None`` (unweighted)
    or a theta_win value."""
    from .simgen import simulation_grid

    base = SimConfig(b_win=b_win)
    out = []
    for c in simulation_grid(base):
        if n is not None and c.n not in n:
            continue
        if k is not None and c.k not in k:
            continue
        if sigma is not None and c.sigma not in sigma:
            continue
        if b_btw is not None and c.b_btw not in b_btw:
            continue
        if weighting is not None and c.theta_win not in weighting:
            continue
        out.append(c)
    return out
