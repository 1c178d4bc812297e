"""Airline reachability network ingestion.

Inputs are two CSV files:

* edges: ``origin,destination,travel_time`` (directed, one row per edge);
* cities: ``city_id,name,population``.

Header names are configurable; files without a header are read
positionally. Mutually connected city pairs become undirected edges weighted
by the inverse mean travel time of the two directions.
"""

from __future__ import annotations

import csv
import logging
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import MalformedLineError, NonpositivePopulationError, UnknownCityError
from .graph import CovariateTable, SimilarityMatrix, WeightedGraph
from .similarity import mean_value_similarity

log = logging.getLogger(__name__)

MAX_TRAVEL_MINUTES = 48 * 60
UNIT_TO_MINUTES = {"minutes": 1.0, "hours": 60.0}


class DuplicateEdgeWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class DirectedReachability:
    city_ids: tuple
    names: tuple
    populations: np.ndarray
    origins: np.ndarray  # city indices
    destinations: np.ndarray
    minutes: np.ndarray

    @property
    def n(self) -> int:
        return len(self.city_ids)

    @property
    def n_directed(self) -> int:
        return self.origins.size

    def travel_matrix(self) -> np.ndarray:
        """``t[i, j]`` travel time i -> j in minutes; 0 where absent."""
        t = np.zeros((self.n, self.n))
        t[self.origins, self.destinations] = self.minutes
        return t

    def pair_counts(self) -> tuple:
        """``(mutual pairs, one-directional pairs)``."""
        present = self.travel_matrix() > 0
        mutual = int(np.count_nonzero(np.triu(present & present.T, 1)))
        one_way = int(np.count_nonzero(np.triu(present ^ present.T, 1)))
        return mutual, one_way

    def summary(self) -> dict:
        mutual, one_way = self.pair_counts()
        return {"nodes": self.n, "directed_edges": self.n_directed, "mutual_pairs": mutual, "one_directional_pairs": one_way}


def _read_table(path, columns):
    """Yield ``(lineno, tuple of column values)`` using header names or position."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [(k, r) for k, r in enumerate(csv.reader(fh), 1) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        return []
    header = [h.strip() for h in rows[0][1]]
    if all(c in header for c in columns):
        pos = [header.index(c) for c in columns]
        rows = rows[1:]
    else:
        pos = list(range(len(columns)))
        try:
            float(rows[0][1][pos[-1]])
        except (ValueError, IndexError):
            raise MalformedLineError(path, rows[0][0], f"header must contain columns {list(columns)}") from None
    out = []
    for k, r in rows:
        if len(r) <= max(pos):
            raise MalformedLineError(path, k, f"expected at least {max(pos) + 1} fields")
        out.append((k, tuple(r[p].strip() for p in pos)))
    return out


def parse_arn(
    edge_file,
    population_file,
    unit: str = "minutes",
    edge_columns=("origin", "destination", "travel_time"),
    city_columns=("city_id", "name", "population"),
    max_minutes: float = MAX_TRAVEL_MINUTES,
) -> DirectedReachability:
    """Parse the directed network and city table.

    Duplicate directed edges keep the first occurrence and emit a
    :class:`DuplicateEdgeWarning`.
    """
    if unit not in UNIT_TO_MINUTES:
        raise ValueError(f"unit must be one of {sorted(UNIT_TO_MINUTES)}")
    to_min = UNIT_TO_MINUTES[unit]
    population_file = Path(population_file)
    ids, names, pops, index = [], [], [], {}
    for k, (cid, name, pop) in _read_table(population_file, city_columns):
        try:
            p = float(pop.replace(",", ""))
        except ValueError:
            raise MalformedLineError(population_file, k, f"bad population {pop!r}") from None
        if cid in index:
            raise MalformedLineError(population_file, k, f"duplicate city id {cid!r}")
        index[cid] = len(ids)
        ids.append(cid)
        names.append(name)
        pops.append(p)

    edge_file = Path(edge_file)
    seen = set()
    o, d, t = [], [], []
    dupes = 0
    for k, (a, b, tt) in _read_table(edge_file, edge_columns):
        if a not in index or b not in index:
            raise UnknownCityError(f"{edge_file}:{k}: unknown city {a if a not in index else b!r}")
        try:
            minutes = float(tt) * to_min
        except ValueError:
            raise MalformedLineError(edge_file, k, f"bad travel time {tt!r}") from None
        if not np.isfinite(minutes) or minutes <= 0:
            raise MalformedLineError(edge_file, k, f"travel time must be positive, got {tt!r}")
        if max_minutes is not None and minutes > max_minutes * (1 + 1e-9):
            raise MalformedLineError(edge_file, k, f"travel time {minutes:g} min exceeds {max_minutes:g}")
        i, j = index[a], index[b]
        if i == j:
            raise MalformedLineError(edge_file, k, f"self-edge on {a!r}")
        if (i, j) in seen:
            dupes += 1
            continue
        seen.add((i, j))
        o.append(i)
        d.append(j)
        t.append(minutes)
    if dupes:
        warnings.warn(f"{dupes} duplicate directed edges ignored (first kept)", DuplicateEdgeWarning, stacklevel=2)
    if not o:
        warnings.warn(f"{edge_file} contains no edges", UserWarning, stacklevel=2)
    net = DirectedReachability(
        tuple(ids), tuple(names), np.array(pops, dtype=float),
        np.array(o, dtype=np.int64), np.array(d, dtype=np.int64), np.array(t, dtype=float),
    )
    log.info("parsed reachability network: %s", net.summary())
    return net


def symmetrize(d: DirectedReachability) -> WeightedGraph:
    """Keep mutual pairs only, weight ``1 / mean(t_ij, t_ji)`` (1/minutes)."""
    t = d.travel_matrix()
    mutual = (t > 0) & (t.T > 0)
    w = np.zeros_like(t)
    w[mutual] = 2.0 / (t[mutual] + t.T[mutual])
    return WeightedGraph(w, d.city_ids)


def log_populations(d: DirectedReachability) -> CovariateTable:
    if np.any(d.populations <= 0):
        bad = [d.city_ids[i] for i in np.flatnonzero(d.populations <= 0)]
        raise NonpositivePopulationError(f"nonpositive population for {bad[:10]}")
    return CovariateTable(np.log(d.populations)[:, None], d.city_ids)


def population_similarity(d: DirectedReachability) -> SimilarityMatrix:
    """Mean of the natural-log populations of each city pair."""
    return mean_value_similarity(log_populations(d))


def write_node_metadata(d: DirectedReachability, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["node_id", "name", "population", "log_population"])
        for cid, name, pop in zip(d.city_ids, d.names, d.populations):
            wr.writerow([cid, name, repr(float(pop)), repr(float(np.log(pop))) if pop > 0 else ""])
