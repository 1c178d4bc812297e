"""Readers and writers for the on-disk formats.

* edge list: ``<node_i>\\t<node_j>\\t<weight>`` per line, undirected, each pair
  once, ``#`` comments ignored, node ids indexed in first-appearance order;
* dense matrix: CSV of n x n numbers with an optional header row of node ids;
* covariates: CSV with the node id in the first column and p numeric columns;
* labels: CSV ``node_id,cluster``.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .errors import C4Error, MalformedLineError
from .graph import CovariateTable, Partition, WeightedGraph


def _num(x: float) -> str:
    # repr round-trips float64 exactly
    return repr(float(x))


def read_edge_list(path, nodes=None) -> WeightedGraph:
    """Read an undirected edge list.

    ``nodes`` fixes the node order up front (and admits nodes with no
    edges); ids met in the file but not listed are appended in
    first-appearance order.
    """
    path = Path(path)
    index = {}
    if nodes is not None:
        for v in nodes:
            index.setdefault(str(v), len(index))
    edges = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise MalformedLineError(path, lineno, "expected 3 tab-separated fields")
            a, b, wtxt = parts[0].strip(), parts[1].strip(), parts[2].strip()
            try:
                wt = float(wtxt)
            except ValueError:
                raise MalformedLineError(path, lineno, f"bad weight {wtxt!r}") from None
            if a == b:
                raise MalformedLineError(path, lineno, f"self-loop on {a!r}")
            i = index.setdefault(a, len(index))
            j = index.setdefault(b, len(index))
            edges.append((lineno, i, j, wt))
    n = len(index)
    w = np.zeros((n, n))
    for lineno, i, j, wt in edges:
        if w[i, j] != 0:
            raise MalformedLineError(path, lineno, "pair listed twice")
        w[i, j] = w[j, i] = wt
    return WeightedGraph(w, tuple(index))


def write_edge_list(graph: WeightedGraph, path) -> None:
    ids = graph.ids
    iu, ju = np.nonzero(np.triu(graph.weights, 1))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# undirected weighted edge list: {graph.n} nodes, {iu.size} edges\n")
        for i, j in zip(iu, ju):
            fh.write(f"{ids[i]}\t{ids[j]}\t{_num(graph.weights[i, j])}\n")


def read_dense_matrix(path):
    """Return ``(matrix, node_ids or None)`` from a dense CSV."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if not rows:
        return np.zeros((0, 0)), None
    header = None
    try:
        [float(x) for x in rows[0]]
    except ValueError:
        header, rows = tuple(x.strip() for x in rows[0]), rows[1:]
    try:
        m = np.array([[float(x) for x in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise C4Error(f"{path}: non-numeric matrix entry ({exc})") from None
    return m, header


def write_dense_matrix(matrix, path, node_ids=None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        if node_ids is not None:
            wr.writerow(node_ids)
        for row in np.asarray(matrix):
            wr.writerow([_num(x) for x in row])


def read_covariates(path) -> CovariateTable:
    """Covariate CSV. A first row whose value columns are non-numeric is a header."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if rows:
        try:
            [float(x) for x in rows[0][1:]]
        except ValueError:
            rows = rows[1:]
    ids, vals = [], []
    for k, r in enumerate(rows, 1):
        try:
            vals.append([float(x) for x in r[1:]])
        except ValueError:
            raise MalformedLineError(path, k, "non-numeric covariate") from None
        ids.append(r[0].strip())
    if len({len(v) for v in vals}) > 1:
        raise C4Error(f"{path}: ragged covariate rows")
    return CovariateTable(np.array(vals, dtype=float).reshape(len(ids), -1), tuple(ids))


def write_covariates(table: CovariateTable, path) -> None:
    ids = table.node_ids or tuple(str(i) for i in range(table.n))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["node_id"] + [f"x{k + 1}" for k in range(table.p)])
        for v, row in zip(ids, table.rows):
            wr.writerow([v] + [_num(x) for x in row])


def write_labels(node_ids, part: Partition, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["node_id", "cluster"])
        for v, lab in zip(node_ids, part.labels):
            wr.writerow([v, int(lab)])


def read_labels(path):
    """Return ``(node_ids, Partition)``."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if rows and rows[0][:2] == ["node_id", "cluster"]:
        rows = rows[1:]
    ids = tuple(r[0] for r in rows)
    try:
        return ids, Partition(np.array([int(r[1]) for r in rows], dtype=np.int64))
    except (ValueError, C4Error):
        return ids, Partition.from_labels([r[1] for r in rows])
