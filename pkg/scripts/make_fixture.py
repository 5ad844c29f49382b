"""Write the small bundled fixture under tests/data/minimal.

Forty genes on two chromosomes: an eight-gene seed module plus a sparse
background. Deterministic; rerunning reproduces the committed files.
"""

import argparse
import json
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]


def build(rng):
    seeds = [f"S{i}" for i in range(8)]
    bg = [f"G{i:02d}" for i in range(32)]
    edges = {}

    def add(a, b, lo):
        if a != b:
            key = tuple(sorted((a, b)))
            edges.setdefault(key, round(float(rng.uniform(lo, 1.0)), 3))

    for i, s in enumerate(seeds):
        add(s, seeds[(i + 1) % 8], 0.6)
        add(s, seeds[(i + 3) % 8], 0.6)
        add(s, bg[i * 4], 0.2)
    for i, g in enumerate(bg):
        add(g, bg[(i + 1) % 32], 0.2)
        add(g, bg[int(rng.integers(32))], 0.2)

    positions = {}
    genes = seeds + bg
    for k, g in enumerate(rng.permutation(genes)):
        positions[str(g)] = (f"chr{k % 2 + 1}", 1000 * (k // 2 + 1))

    candidates = bg[::3][:10]
    sim = [("QD", f"D{i}", round(0.9 - 0.1 * i, 2)) for i in range(6)] + [("D0", "D1", 0.5)]
    assoc = []
    for i in range(6):
        pool = seeds + bg
        for g in rng.choice(pool, 5, replace=False):
            assoc.append((f"D{i}", str(g)))
    return edges, seeds, candidates, positions, sim, assoc


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(ROOT / "tests" / "data" / "minimal"))
    ap.add_argument("--seed", type=int, default=7)
    a = ap.parse_args()
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    edges, seeds, cands, pos, sim, assoc = build(np.random.default_rng(a.seed))
    (out / "network.tsv").write_text("".join(f"{u}\t{v}\t{w}\n" for (u, v), w in sorted(edges.items())))
    (out / "seeds.txt").write_text("".join(s + "\n" for s in seeds))
    (out / "candidates.txt").write_text("".join(c + "\n" for c in cands))
    (out / "positions.tsv").write_text("".join(f"{g}\t{c}\t{p}\n" for g, (c, p) in sorted(pos.items())))
    (out / "similarity.tsv").write_text("".join(f"{x}\t{y}\t{s}\n" for x, y, s in sim))
    (out / "disease_genes.tsv").write_text("".join(f"{d}\t{g}\n" for d, g in assoc))
    cfg = {"weights": "0.1,0.3,0.2,0.4", "tolerance": 1e-10, "evidence_k": 4, "n_neighbors": 15}
    (out / "config.json").write_text(json.dumps(cfg, indent=2) + "\n")


if __name__ == "__main__":
    main()
