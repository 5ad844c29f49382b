"""Leave-one-out cross-validation over artificial linkage intervals."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .graph import InteractionNetwork, NetworkFormatError, SeedSet

# (fold seed indices, candidate indices) -> one score per candidate
Pipeline = Callable[[np.ndarray, np.ndarray], np.ndarray]


class FoldError(RuntimeError):
    def __init__(self, target: str, cause: BaseException):
        super().__init__(f"fold for target {target!r} failed: {cause}")
        self.target = target


@dataclass(frozen=True)
class GenePositionTable:
    positions: dict[str, tuple[str, int]]

    def __contains__(self, gene: str) -> bool:
        return gene in self.positions

    def __getitem__(self, gene: str) -> tuple[str, int]:
        return self.positions[gene]


def read_positions(path: str | Path) -> GenePositionTable:
    out: dict[str, tuple[str, int]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = [p.strip() for p in line.split("\t")]
            if len(parts) != 3 or not parts[0] or not parts[1]:
                raise NetworkFormatError(f"{path}: line {lineno}: expected gene<TAB>chromosome<TAB>start")
            try:
                start = int(parts[2])
            except ValueError:
                raise NetworkFormatError(f"{path}: line {lineno}: start {parts[2]!r} is not an integer") from None
            if start < 0:
                raise NetworkFormatError(f"{path}: line {lineno}: negative start")
            if parts[0] in out:
                raise NetworkFormatError(f"{path}: line {lineno}: duplicate position for {parts[0]!r}")
            out[parts[0]] = (parts[1], start)
    return GenePositionTable(out)


@dataclass(frozen=True)
class LinkageInterval:
    target: int
    candidates: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.target not in self.candidates:
            raise ValueError("target must be among the candidates")


class _ChromosomeIndex:
    """Network genes grouped per chromosome, sorted by start."""

    def __init__(self, positions: GenePositionTable, network: InteractionNetwork):
        by_chrom: dict[str, list[tuple[int, str, int]]] = {}
        for gene, (chrom, start) in positions.positions.items():
            i = network.index.get(gene)
            if i is not None:
                by_chrom.setdefault(chrom, []).append((start, gene, i))
        self.by_chrom = {c: sorted(v) for c, v in by_chrom.items()}


def linkage_interval(
    target: int,
    positions: GenePositionTable,
    network: InteractionNetwork,
    n: int = 99,
    exclude: Iterable[int] = (),
    _index: _ChromosomeIndex | None = None,
) -> LinkageInterval:
    """Target plus its ``n`` nearest same-chromosome network genes not in ``exclude``.

    Distance is ``|start - start(target)|``; ties go to the smaller gene id.
    """
    gene = network.ids[target]
    if gene not in positions:
        raise KeyError(f"no chromosomal position for target {gene!r}")
    chrom, start = positions[gene]
    index = _index or _ChromosomeIndex(positions, network)
    banned = set(int(e) for e in exclude)
    banned.add(target)
    pool = [(abs(s - start), g, i) for s, g, i in index.by_chrom.get(chrom, ()) if i not in banned]
    pool.sort()
    if len(pool) < n:
        warnings.warn(
            f"only {len(pool)} chromosomal neighbor(s) available for {gene!r}; wanted {n}", stacklevel=2
        )
    return LinkageInterval(target, (target, *(i for _, _, i in pool[:n])))


def mean_tie_rank(scores: np.ndarray, pos: int) -> float:
    """Rank of ``scores[pos]`` in descending order; ties share the mean of their positions."""
    s = np.asarray(scores, dtype=float)
    t = s[pos]
    above = int(np.count_nonzero(s > t))
    tied = int(np.count_nonzero(s == t))
    return above + (tied + 1) / 2.0


def mrr(ranks: Sequence[float]) -> float:
    r = np.asarray(ranks, dtype=float)
    if r.size == 0:
        raise ValueError("no ranks")
    return float(np.mean(1.0 / r))


def average_rank(ranks: Sequence[float]) -> float:
    return float(np.mean(np.asarray(ranks, dtype=float)))


def top_fraction(ranks: Sequence[float], interval_sizes: Sequence[int], pct: float) -> float:
    """Share of folds whose target rank is within the top ``pct`` percent of its interval."""
    r = np.asarray(ranks, dtype=float)
    m = np.asarray(interval_sizes, dtype=float)
    if r.shape != m.shape:
        raise ValueError("ranks and sizes must align")
    thresh = np.array([math.ceil(round(pct * size / 100.0, 9)) for size in m])
    return float(np.mean(r <= thresh))


def roc_and_auc(ranks: Sequence[float], interval_sizes: Sequence[int]) -> tuple[list[tuple[int, float, float]], float]:
    """ROC over rank thresholds ``k = 0..max size``.

    Returns ``[(k, 1 - specificity, sensitivity), ...]`` and the trapezoidal AUC.
    """
    r = np.asarray(ranks, dtype=float)
    m = np.asarray(interval_sizes, dtype=np.int64)
    if r.size == 0:
        raise ValueError("no folds")
    if np.any(m < 2):
        raise ValueError("specificity is undefined for an interval of size 1")
    points = []
    for k in range(0, int(m.max()) + 1):
        hit = r <= k
        sens = float(np.mean(hit))
        fpr = float(np.mean((np.minimum(k, m) - hit) / (m - 1)))
        points.append((k, fpr, sens))
    x = np.array([p[1] for p in points])
    y = np.array([p[2] for p in points])
    auc = float(np.sum((x[1:] - x[:-1]) * (y[1:] + y[:-1]) / 2.0))
    return points, auc


@dataclass(frozen=True)
class CvReport:
    fold_ranks: tuple[tuple[str, float, int], ...]
    auc: float
    mrr: float
    ar: float
    top1: float
    top5: float
    roc_points: tuple[tuple[int, float, float], ...]

    @classmethod
    def from_folds(cls, folds: Sequence[tuple[str, float, int]]) -> "CvReport":
        if not folds:
            raise ValueError("no folds")
        ranks = [f[1] for f in folds]
        sizes = [f[2] for f in folds]
        roc, auc = roc_and_auc(ranks, sizes)
        return cls(
            fold_ranks=tuple(folds),
            auc=auc,
            mrr=mrr(ranks),
            ar=average_rank(ranks),
            top1=top_fraction(ranks, sizes, 1),
            top5=top_fraction(ranks, sizes, 5),
            roc_points=tuple(roc),
        )

    def metrics(self) -> dict[str, float]:
        return {"AUC": self.auc, "MRR": self.mrr, "AR": self.ar, "top1": self.top1, "top5": self.top5}


@dataclass(frozen=True)
class Fold:
    target: int
    seeds: np.ndarray
    interval: LinkageInterval


def build_folds(
    seeds: SeedSet,
    positions: GenePositionTable,
    network: InteractionNetwork,
    n_neighbors: int = 99,
    targets: Sequence[int] | None = None,
) -> list[Fold]:
    """One fold per held-out seed, ordered by target id."""
    if len(seeds) < 2:
        raise ValueError("leave-one-out needs at least two seeds")
    all_seeds = seeds.as_array()
    held = all_seeds if targets is None else np.asarray(sorted(set(int(t) for t in targets)), dtype=np.int64)
    if not set(held.tolist()) <= set(all_seeds.tolist()):
        raise ValueError("every held-out target must be a seed")
    index = _ChromosomeIndex(positions, network)
    folds = []
    for s in sorted(held.tolist(), key=lambda i: network.ids[i]):
        rest = all_seeds[all_seeds != s]
        try:
            interval = linkage_interval(s, positions, network, n_neighbors, exclude=rest, _index=index)
        except Exception as e:
            raise FoldError(network.ids[s], e) from e
        folds.append(Fold(s, rest, interval))
    return folds


def evaluate_folds(
    folds: Sequence[Fold],
    pipeline: Pipeline,
    network: InteractionNetwork,
    workers: int = 1,
) -> CvReport:
    def run(fold: Fold) -> tuple[str, float, int]:
        cands = np.asarray(fold.interval.candidates, dtype=np.int64)
        try:
            scores = np.asarray(pipeline(fold.seeds, cands), dtype=float)
            if scores.shape != cands.shape:
                raise ValueError(f"pipeline returned {scores.shape} scores for {cands.size} candidates")
        except Exception as e:
            raise FoldError(network.ids[fold.target], e) from e
        rank = mean_tie_rank(scores, 0)
        return network.ids[fold.target], rank, int(cands.size)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, folds))
    else:
        results = [run(f) for f in folds]
    return CvReport.from_folds(results)


def loocv(
    pipeline: Pipeline,
    seeds: SeedSet,
    positions: GenePositionTable,
    network: InteractionNetwork,
    n_neighbors: int = 99,
    targets: Sequence[int] | None = None,
    workers: int = 1,
) -> CvReport:
    """Hold out each seed in turn, rank it within its linkage interval, and summarize."""
    folds = build_folds(seeds, positions, network, n_neighbors, targets)
    return evaluate_folds(folds, pipeline, network, workers)
