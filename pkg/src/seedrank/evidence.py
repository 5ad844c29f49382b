"""Set-overlap evidence from symptom-similar diseases."""

from __future__ import annotations

import math
import warnings
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .diffusion import Provenance, ScoreVector
from .graph import InteractionNetwork, NetworkFormatError, SeedSet


@dataclass(frozen=True)
class DiseaseSimilarityNetwork:
    neighbors: dict[str, dict[str, float]]

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str, float]]) -> "DiseaseSimilarityNetwork":
        nb: dict[str, dict[str, float]] = defaultdict(dict)
        for a, b, s in edges:
            s = float(s)
            if not math.isfinite(s) or s < 0:
                raise NetworkFormatError(f"similarity {a}-{b} must be finite and >= 0, got {s!r}")
            if a == b:
                continue
            if b in nb[a]:
                raise NetworkFormatError(f"duplicate similarity pair {a}-{b}")
            nb[a][b] = s
            nb[b][a] = s
        return cls(dict(nb))


@dataclass(frozen=True)
class DiseaseGeneMap:
    associations: dict[str, frozenset[str]]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "DiseaseGeneMap":
        acc: dict[str, set[str]] = defaultdict(set)
        for disease, gene in pairs:
            acc[disease].add(gene)
        return cls({d: frozenset(g) for d, g in acc.items()})


def _tsv_rows(path: str | Path, ncols: int) -> Iterable[tuple[int, list[str]]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = [p.strip() for p in line.split("\t")]
            if len(parts) != ncols or not all(parts):
                raise NetworkFormatError(f"{path}: line {lineno}: expected {ncols} tab-separated fields")
            yield lineno, parts


def read_similarity(path: str | Path) -> DiseaseSimilarityNetwork:
    edges = []
    for lineno, (a, b, s) in _tsv_rows(path, 3):
        try:
            edges.append((a, b, float(s)))
        except ValueError:
            raise NetworkFormatError(f"{path}: line {lineno}: bad similarity {s!r}") from None
    return DiseaseSimilarityNetwork.from_edges(edges)


def read_disease_genes(path: str | Path) -> DiseaseGeneMap:
    return DiseaseGeneMap.from_pairs((d, g) for _, (d, g) in _tsv_rows(path, 2))


def top_similar_diseases(sim: DiseaseSimilarityNetwork, query: str, k: int = 10) -> list[tuple[str, float]]:
    if k < 1:
        raise ValueError("k must be positive")
    nb = sim.neighbors.get(query)
    if not nb:
        raise KeyError(f"disease {query!r} has no similarity entries")
    ranked = sorted(nb.items(), key=lambda kv: (-kv[1], kv[0]))
    if len(ranked) < k:
        warnings.warn(f"{query!r} has only {len(ranked)} similar disease(s); wanted {k}", stacklevel=2)
    return ranked[:k]


def evidence_score(
    top: Sequence[str],
    genes: DiseaseGeneMap,
    network: InteractionNetwork,
    seeds: SeedSet | Sequence[int] = (),
) -> ScoreVector:
    """Count, per gene, the diseases in ``top`` that list it. Seeds score 0."""
    if not top:
        raise ValueError("no diseases given")
    counts = np.zeros(network.node_count)
    for disease in top:
        assoc = genes.associations.get(disease)
        if assoc is None:
            warnings.warn(f"disease {disease!r} has no gene associations; counted as empty", stacklevel=2)
            continue
        idx = [network.index[g] for g in assoc if g in network.index]
        counts[idx] += 1
    seed_idx = seeds.as_array() if isinstance(seeds, SeedSet) else np.asarray(seeds, dtype=np.int64)
    counts[seed_idx] = 0.0
    return ScoreVector(counts, Provenance.EVIDENCE)
