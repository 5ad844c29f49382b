"""Synthetic networks with known answers, for tests and experiment scripts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evaluation import GenePositionTable
from .evidence import DiseaseGeneMap, DiseaseSimilarityNetwork
from .graph import InteractionNetwork, SeedSet, load_network, map_seeds
from .pipeline import EvidenceInputs


@dataclass
class World:
    network: InteractionNetwork
    seeds: SeedSet
    positions: GenePositionTable
    evidence: EvidenceInputs = EvidenceInputs()
    control_seeds: SeedSet | None = None


def interval_world(n_seeds: int, interval_size: int = 100) -> World:
    """Each seed sits alone on its own chromosome with ``interval_size - 1`` non-seed genes.

    The network is one long path with unit confidences; it exists only so
    every gene is indexable. Suited to pipelines that ignore the graph.
    """
    ids, pos = [], {}
    for c in range(n_seeds):
        chrom = f"chr{c}"
        seed = f"S{c:04d}"
        ids.append(seed)
        pos[seed] = (chrom, 0)
        for j in range(1, interval_size):
            g = f"G{c:04d}_{j:03d}"
            ids.append(g)
            pos[g] = (chrom, 1000 * j)
    net = load_network((a, b, 1.0) for a, b in zip(ids[:-1], ids[1:]))
    seeds = map_seeds(net, [f"S{c:04d}" for c in range(n_seeds)])
    return World(net, seeds, GenePositionTable(pos))


def planted_module(
    seed: int = 0,
    n_seeds: int = 60,
    n_background: int = 1200,
    n_chromosomes: int = 6,
    module_degree: int = 5,
    background_degree: int = 3,
) -> World:
    """Seed module hidden in a random background.

    Construction:
      * background genes ``B*`` each link to ``background_degree`` random
        other background genes (confidence U(0.3, 1));
      * seed genes ``S*`` each link to ``module_degree`` random other seeds
        (confidence U(0.6, 1)) and to one random background gene
        (confidence U(0.3, 1)), so the graph is connected but seeds are far
        more tightly knit with each other than with anything else;
      * genes are spread over ``n_chromosomes``; seeds are placed evenly
        among the background genes of their chromosome, so each held-out
        seed's linkage interval is filled with background decoys;
      * evidence: query disease ``Q`` with twelve similar diseases; the
        five most similar each list a random 40% of the seeds plus twenty
        random background genes, the rest list background genes only;
      * ``control_seeds`` is a same-size random set of background genes,
        for which no structure was planted.
    """
    rng = np.random.default_rng(seed)
    seeds = [f"S{i:03d}" for i in range(n_seeds)]
    background = [f"B{i:04d}" for i in range(n_background)]

    edges: dict[tuple[str, str], float] = {}

    def add(a: str, b: str, lo: float) -> None:
        if a != b:
            key = (a, b) if a < b else (b, a)
            edges.setdefault(key, float(np.round(rng.uniform(lo, 1.0), 4)))

    for g in background:
        for j in rng.choice(n_background, background_degree, replace=False):
            add(g, background[j], 0.3)
    for s in seeds:
        for j in rng.choice(n_seeds, module_degree, replace=False):
            add(s, seeds[j], 0.6)
        add(s, background[rng.integers(n_background)], 0.3)
    net = load_network((a, b, w) for (a, b), w in sorted(edges.items()))

    pos: dict[str, tuple[str, int]] = {}
    per_chrom = np.array_split(rng.permutation(n_background), n_chromosomes)
    seeds_per = np.array_split(np.arange(n_seeds), n_chromosomes)
    for c, (bg_idx, sd_idx) in enumerate(zip(per_chrom, seeds_per)):
        chrom = f"chr{c + 1}"
        for k, j in enumerate(bg_idx):
            pos[background[j]] = (chrom, 10_000 * (k + 1))
        step = 10_000 * len(bg_idx) // (len(sd_idx) + 1)
        for k, i in enumerate(sd_idx):
            pos[seeds[i]] = (chrom, step * (k + 1) + 5_000)

    sim_edges = [("Q", f"D{i:02d}", float(1.0 - 0.05 * i)) for i in range(12)]
    assoc = []
    for i in range(12):
        d = f"D{i:02d}"
        if i < 5:
            assoc += [(d, seeds[j]) for j in rng.choice(n_seeds, int(0.4 * n_seeds), replace=False)]
        assoc += [(d, background[j]) for j in rng.choice(n_background, 20, replace=False)]
    evidence = EvidenceInputs(DiseaseSimilarityNetwork.from_edges(sim_edges), DiseaseGeneMap.from_pairs(assoc), "Q")

    control = [background[j] for j in rng.choice(n_background, n_seeds, replace=False)]
    return World(
        net,
        map_seeds(net, seeds),
        GenePositionTable(pos),
        evidence,
        control_seeds=map_seeds(net, control),
    )
