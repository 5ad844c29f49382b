"""Shortest-path proximity to seeds: median path confidence over mean hop length."""

from __future__ import annotations

import enum
import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .diffusion import Provenance, ScoreVector
from .graph import InteractionNetwork, SeedSet

# relative slack under which two path costs count as equal
COST_TIE_RTOL = 1e-12


class DistanceTransform(str, enum.Enum):
    INVERSE = "INVERSE"
    ONE_MINUS = "ONE_MINUS"
    NEG_LOG = "NEG_LOG"

    def apply(self, confidence: np.ndarray) -> np.ndarray:
        if self is DistanceTransform.INVERSE:
            return 1.0 / confidence
        if self is DistanceTransform.ONE_MINUS:
            return 1.0 - confidence
        return -np.log(confidence)


class PathWeight(str, enum.Enum):
    """What "weight of the shortest path" accumulates along the chosen path.

    CONFIDENCE sums edge confidences (higher score = closer to the seeds);
    COST sums transformed edge costs, so there a lower score means closer.
    """

    CONFIDENCE = "CONFIDENCE"
    COST = "COST"


@dataclass(frozen=True, eq=False)
class PathResult:
    """Single-source result; ``predecessor`` is -1 at the source and for unreachable nodes."""

    source: int
    cost: np.ndarray
    hops: np.ndarray
    path_weight: np.ndarray
    predecessor: np.ndarray

    @property
    def reachable(self) -> np.ndarray:
        return np.isfinite(self.cost)


def dijkstra_distances(
    network: InteractionNetwork,
    source: int,
    transform: DistanceTransform = DistanceTransform.INVERSE,
) -> PathResult:
    """Minimum-cost paths from ``source``.

    Candidate paths are ordered by (cost, hops, predecessor index), costs
    within ``COST_TIE_RTOL`` counting as equal, so the chosen path and its
    accumulated confidence are reproducible.
    """
    n = network.node_count
    adj = network.adjacency
    indptr, indices, conf = adj.indptr, adj.indices, adj.data
    length = DistanceTransform(transform).apply(conf)

    cost = np.full(n, np.inf)
    hops = np.zeros(n, dtype=np.int64)
    weight = np.zeros(n)
    pred = np.full(n, -1, dtype=np.int64)
    done = np.zeros(n, dtype=bool)

    cost[source] = 0.0
    heap = [(0.0, 0, source)]
    while heap:
        c, h, u = heapq.heappop(heap)
        if done[u] or c != cost[u] or h != hops[u]:
            continue
        done[u] = True
        wu = weight[u]
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if done[v]:
                continue
            cv = c + length[k]
            cur = cost[v]
            if cur == np.inf:
                better = True
            elif abs(cv - cur) <= COST_TIE_RTOL * max(1.0, abs(cur)):
                better = (h + 1, u) < (hops[v], pred[v])
            else:
                better = cv < cur
            if better:
                cost[v] = cv
                hops[v] = h + 1
                weight[v] = wu + conf[k]
                pred[v] = u
                heapq.heappush(heap, (cv, h + 1, v))
    return PathResult(source, cost, hops, weight, pred)


@dataclass(frozen=True, eq=False)
class SeedPathTable:
    """Hop lengths and path confidences from each seed (rows) to every node (columns).

    Unreachable pairs have ``hops == 0``.
    """

    seeds: np.ndarray
    hops: np.ndarray
    weights: np.ndarray
    costs: np.ndarray | None = None

    def rows_for(self, seeds: Sequence[int]) -> np.ndarray:
        pos = {int(s): i for i, s in enumerate(self.seeds)}
        try:
            return np.array([pos[int(s)] for s in seeds], dtype=np.int64)
        except KeyError as e:
            raise KeyError(f"seed {e.args[0]} not in path table") from None


def seed_path_table(
    network: InteractionNetwork,
    seeds: SeedSet | Sequence[int],
    transform: DistanceTransform = DistanceTransform.INVERSE,
    workers: int = 1,
) -> SeedPathTable:
    idx = seeds.as_array() if isinstance(seeds, SeedSet) else np.asarray(seeds, dtype=np.int64)

    def run(s: int) -> PathResult:
        return dijkstra_distances(network, int(s), transform)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, idx))
    else:
        results = [run(s) for s in idx]
    n = network.node_count
    hops = np.zeros((idx.size, n), dtype=np.int64)
    weights = np.zeros((idx.size, n))
    costs = np.zeros((idx.size, n))
    for i, r in enumerate(results):
        hops[i] = np.where(r.reachable, r.hops, 0)
        weights[i] = np.where(r.reachable, r.path_weight, 0.0)
        costs[i] = np.where(r.reachable, r.cost, 0.0)
    return SeedPathTable(idx, hops, weights, costs)


def sp_score_from_table(
    table: SeedPathTable,
    seeds: Sequence[int] | None = None,
    path_weight: PathWeight = PathWeight.CONFIDENCE,
) -> ScoreVector:
    """Score using only the table rows for ``seeds`` (all rows when omitted)."""
    if seeds is None:
        rows = np.arange(table.seeds.size)
        seed_idx = table.seeds
    else:
        seed_idx = np.asarray(seeds, dtype=np.int64)
        rows = table.rows_for(seed_idx)
    if rows.size == 0:
        raise ValueError("seed set is empty")
    hops = table.hops[rows]
    if path_weight is PathWeight.COST:
        if table.costs is None:
            raise ValueError("path table carries no costs")
        weights = table.costs[rows].astype(float)
    else:
        weights = table.weights[rows].astype(float)
    reach = hops > 0
    counts = reach.sum(axis=0)

    # unreachable entries become NaN so nanmedian/nanmean skip them
    w = np.where(reach, weights, np.nan)
    h = np.where(reach, hops.astype(float), np.nan)
    scores = np.zeros(hops.shape[1])
    has = counts > 0
    if np.any(has):
        scores[has] = np.nanmedian(w[:, has], axis=0) / np.nanmean(h[:, has], axis=0)
    scores[seed_idx] = 0.0
    return ScoreVector(scores, Provenance.SP)


def sp_score(
    network: InteractionNetwork,
    seeds: SeedSet | Sequence[int],
    transform: DistanceTransform = DistanceTransform.INVERSE,
    path_weight: PathWeight = PathWeight.CONFIDENCE,
) -> ScoreVector:
    return sp_score_from_table(seed_path_table(network, seeds, transform), path_weight=path_weight)
