"""Weighted undirected interaction network: loading, pruning, components, seeds."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _cc


class NetworkFormatError(ValueError):
    """Raised for malformed edge records or seed lists."""


class NoSeedsMappedError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class InteractionNetwork:
    """Symmetric sparse network over densely indexed entities.

    ``adjacency`` is a CSR matrix with ``adjacency[u, v] == adjacency[v, u]``
    holding the edge confidence; absent edges are structural zeros.
    """

    ids: tuple[str, ...]
    adjacency: sp.csr_matrix
    skipped_self_loops: int = 0
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "index", {g: i for i, g in enumerate(self.ids)})
        if len(self.index) != len(self.ids):
            raise NetworkFormatError("duplicate entity ids")
        n = len(self.ids)
        if self.adjacency.shape != (n, n):
            raise NetworkFormatError("adjacency shape does not match node count")

    @property
    def node_count(self) -> int:
        return len(self.ids)

    @property
    def edge_count(self) -> int:
        return self.adjacency.nnz // 2

    def degree(self) -> np.ndarray:
        return np.diff(self.adjacency.indptr)

    def weighted_degree(self) -> np.ndarray:
        return np.asarray(self.adjacency.sum(axis=1)).ravel()

    def neighbors(self, u: int) -> tuple[np.ndarray, np.ndarray]:
        """Neighbor indices and confidences of node ``u``."""
        a = self.adjacency
        lo, hi = a.indptr[u], a.indptr[u + 1]
        return a.indices[lo:hi], a.data[lo:hi]

    def weight(self, u: int, v: int) -> float:
        return float(self.adjacency[u, v])

    def edges(self) -> Iterator[tuple[str, str, float]]:
        """Each undirected edge once, as ``(id_a, id_b, weight)`` with ``a < b`` by index."""
        coo = sp.triu(self.adjacency, k=1).tocoo()
        order = np.lexsort((coo.col, coo.row))
        for k in order:
            yield self.ids[coo.row[k]], self.ids[coo.col[k]], float(coo.data[k])


@dataclass(frozen=True)
class SeedSet:
    indices: tuple[int, ...]
    unmapped_ids: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.indices)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=np.int64)


def _check_weight(w: float, where: str) -> float:
    if not math.isfinite(w):
        raise NetworkFormatError(f"{where}: non-finite weight {w!r}")
    if w <= 0:
        raise NetworkFormatError(f"{where}: non-positive weight {w!r}")
    if w > 1:
        raise NetworkFormatError(f"{where}: weight {w!r} exceeds 1; confidences must lie in (0, 1]")
    return w


def load_network(
    edge_records: Iterable[tuple[str, str, float]],
    extra_nodes: Iterable[str] = (),
) -> InteractionNetwork:
    """Build a network from ``(id_a, id_b, weight)`` records.

    Nodes are indexed by first appearance. Duplicate undirected edges keep
    the maximum weight; self-loops are skipped and counted. ``extra_nodes``
    adds entities that may carry no edges (they are appended in order after
    any node already seen).
    """
    index: dict[str, int] = {}
    best: dict[tuple[int, int], float] = {}
    self_loops = 0

    def intern(g: str) -> int:
        i = index.get(g)
        if i is None:
            i = index[g] = len(index)
        return i

    for lineno, rec in enumerate(edge_records, start=1):
        try:
            a, b, w = rec
        except (TypeError, ValueError):
            raise NetworkFormatError(f"record {lineno}: expected (id_a, id_b, weight)") from None
        if not a or not b:
            raise NetworkFormatError(f"record {lineno}: empty id")
        try:
            w = float(w)
        except (TypeError, ValueError):
            raise NetworkFormatError(f"record {lineno}: weight {w!r} is not a number") from None
        _check_weight(w, f"record {lineno}")
        if a == b:
            self_loops += 1
            continue
        u, v = intern(a), intern(b)
        key = (u, v) if u < v else (v, u)
        if w > best.get(key, 0.0):
            best[key] = w

    for g in extra_nodes:
        if not g:
            raise NetworkFormatError("empty node id")
        intern(g)

    if self_loops:
        warnings.warn(f"skipped {self_loops} self-loop record(s)", stacklevel=2)

    n = len(index)
    if best:
        keys = np.array(list(best.keys()), dtype=np.int64)
        vals = np.fromiter(best.values(), dtype=float, count=len(best))
        rows = np.concatenate([keys[:, 0], keys[:, 1]])
        cols = np.concatenate([keys[:, 1], keys[:, 0]])
        data = np.concatenate([vals, vals])
    else:
        rows = cols = np.empty(0, dtype=np.int64)
        data = np.empty(0)
    adj = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
    adj.sort_indices()
    ids = tuple(sorted(index, key=index.__getitem__))
    return InteractionNetwork(ids, adj, skipped_self_loops=self_loops)


def parse_edge_lines(lines: Iterable[str]) -> tuple[list[tuple[str, str, float]], list[str]]:
    """Parse tab-separated edge lines.

    A line with a single field declares an isolated node. Returns the edge
    records and the declared node ids.
    """
    records: list[tuple[str, str, float]] = []
    nodes: list[str] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = [p.strip() for p in line.split("\t")]
        if len(parts) == 1:
            nodes.append(parts[0])
            continue
        if len(parts) != 3 or not parts[0] or not parts[1]:
            raise NetworkFormatError(f"line {lineno}: expected id_a<TAB>id_b<TAB>weight")
        try:
            w = float(parts[2])
        except ValueError:
            raise NetworkFormatError(f"line {lineno}: weight {parts[2]!r} is not a number") from None
        _check_weight(w, f"line {lineno}")
        records.append((parts[0], parts[1], w))
    return records, nodes


def read_network(path: str | Path) -> InteractionNetwork:
    with open(path, encoding="utf-8") as fh:
        records, nodes = parse_edge_lines(fh)
    return load_network(records, extra_nodes=nodes)


def write_network(network: InteractionNetwork, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for a, b, w in network.edges():
            fh.write(f"{a}\t{b}\t{w!r}\n")
        deg = network.degree()
        for i in np.flatnonzero(deg == 0):
            fh.write(f"{network.ids[i]}\n")


def subnetwork(network: InteractionNetwork, keep: Sequence[int]) -> InteractionNetwork:
    """Induced subnetwork on ``keep``, re-indexed in the given order."""
    keep = np.asarray(keep, dtype=np.int64)
    adj = network.adjacency[keep][:, keep].tocsr()
    adj.sort_indices()
    return InteractionNetwork(tuple(network.ids[i] for i in keep), adj)


def prune_isolated(network: InteractionNetwork) -> tuple[InteractionNetwork, int]:
    """Drop degree-0 nodes. Returns the pruned network and the removed count."""
    keep = np.flatnonzero(network.degree() > 0)
    removed = network.node_count - keep.size
    if removed == 0:
        return network, 0
    return subnetwork(network, keep), removed


def connected_components(network: InteractionNetwork) -> tuple[np.ndarray, int]:
    """Component label per node and the number of components."""
    if network.node_count == 0:
        return np.empty(0, dtype=np.int32), 0
    count, labels = _cc(network.adjacency, directed=False)
    return labels, int(count)


def map_seeds(network: InteractionNetwork, seed_ids: Iterable[str]) -> SeedSet:
    seed_ids = list(seed_ids)
    if not seed_ids:
        raise NetworkFormatError("seed list is empty")
    found: set[int] = set()
    unmapped: list[str] = []
    for g in seed_ids:
        i = network.index.get(g)
        if i is None:
            if g not in unmapped:
                unmapped.append(g)
        else:
            found.add(i)
    if not found:
        raise NoSeedsMappedError(f"none of {len(seed_ids)} seed id(s) were found in the network")
    return SeedSet(tuple(sorted(found)), tuple(unmapped))


def read_id_list(path: str | Path) -> list[str]:
    """One id per line; blank lines and ``#`` comments ignored."""
    out: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            s = line.strip()
            if s and not s.startswith("#"):
                out.append(s.split("\t")[0])
    return out
