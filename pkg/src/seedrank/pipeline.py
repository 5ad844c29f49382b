"""End-to-end prioritization and LOOCV-driven step weighting."""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .aggregation import STEPS, FusionConfig, discounted_rating, ndos_scores, scores_to_ranks, weighted_sum
from .diffusion import DiffusionConfig, Provenance, ScoreVector, column_normalize, diffuse, symmetric_normalize
from .evaluation import CvReport, GenePositionTable, Pipeline, build_folds, evaluate_folds
from .evidence import DiseaseGeneMap, DiseaseSimilarityNetwork, evidence_score, top_similar_diseases
from .graph import InteractionNetwork, SeedSet
from .madm import (
    DEFAULT_CRITERIA,
    DecisionMatrix,
    PairwiseMatrix,
    Supermatrix,
    WeightVector,
    hierarchy_supermatrix,
    pairwise_from_ordering,
    topsis_anp_weights,
)
from .shortest_path import DistanceTransform, PathWeight, seed_path_table, sp_score_from_table


class MadmMode(str, enum.Enum):
    TOPSIS_ANP = "topsis-anp"
    TOPSIS_AHP = "topsis-ahp"
    WDRS = "wdrs"
    NDOS = "ndos"
    FIXED = "fixed"


class PipelineError(ValueError):
    pass


@dataclass(frozen=True)
class EvidenceInputs:
    """Similarity network, disease-gene map and query disease; all optional."""

    similarity: Optional[DiseaseSimilarityNetwork] = None
    disease_genes: Optional[DiseaseGeneMap] = None
    disease: Optional[str] = None

    @property
    def empty(self) -> bool:
        return self.similarity is None or self.disease_genes is None or self.disease is None


@dataclass(frozen=True)
class PipelineConfig:
    diffusion: DiffusionConfig = DiffusionConfig()
    # NP falls back to ``diffusion`` when unset
    np_diffusion: Optional[DiffusionConfig] = None
    transform: DistanceTransform = DistanceTransform.INVERSE
    path_weight: PathWeight = PathWeight.CONFIDENCE
    evidence_k: int = 10
    # None means AUTO: derive step weights by the MADM mode
    fusion: Optional[FusionConfig] = None
    normalization: str = "MINMAX"
    mode: MadmMode = MadmMode.TOPSIS_ANP
    comparisons: PairwiseMatrix | Supermatrix | None = None
    saaty_step: int = 2
    feedback: float = 0.5
    gamma: float = 0.95
    topsis_normalization: str = "vector"
    n_neighbors: int = 99
    workers: int = 1

    def __post_init__(self) -> None:
        if self.fusion is None and self.mode is MadmMode.FIXED:
            raise PipelineError("FIXED mode needs explicit step weights")
        if self.evidence_k < 1:
            raise PipelineError("evidence_k must be positive")


class StepScorer:
    """Computes the four step score vectors for arbitrary subsets of a fixed seed set.

    Per-seed shortest-path tables and the evidence counts are computed once;
    results for a given seed subset are memoized.
    """

    def __init__(
        self,
        network: InteractionNetwork,
        seeds: SeedSet,
        evidence: EvidenceInputs = EvidenceInputs(),
        cfg: PipelineConfig = PipelineConfig(),
    ):
        if len(seeds) >= network.node_count:
            raise PipelineError("every node is a seed; nothing to rank")
        self.network = network
        self.seeds = seeds
        self.cfg = cfg
        self._col = column_normalize(network)
        self._sym = symmetric_normalize(network)
        self._paths = seed_path_table(network, seeds, cfg.transform, workers=cfg.workers)
        if evidence.empty:
            self.top_diseases: list[str] = []
            self._evidence = np.zeros(network.node_count)
        else:
            top = top_similar_diseases(evidence.similarity, evidence.disease, cfg.evidence_k)
            self.top_diseases = [d for d, _ in top]
            self._evidence = evidence_score(self.top_diseases, evidence.disease_genes, network).values
        self._cache: dict[bytes, dict[str, ScoreVector]] = {}
        self._lock = threading.Lock()

    def scores(self, seed_idx: Sequence[int] | None = None) -> dict[str, ScoreVector]:
        idx = self.seeds.as_array() if seed_idx is None else np.unique(np.asarray(seed_idx, dtype=np.int64))
        key = idx.tobytes()
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        cfg = self.cfg
        ev = self._evidence.copy()
        ev[idx] = 0.0
        out = {
            "NP": diffuse(self._sym, idx, cfg.np_diffusion or cfg.diffusion),
            "RWR": diffuse(self._col, idx, cfg.diffusion),
            "SP": sp_score_from_table(self._paths, idx, cfg.path_weight),
            "EVIDENCE": ScoreVector(ev, Provenance.EVIDENCE),
        }
        with self._lock:
            self._cache[key] = out
        return out

    def raw(self, seed_idx) -> dict[str, np.ndarray]:
        return {k: v.values for k, v in self.scores(seed_idx).items()}

    # candidate-level pipelines, usable with evaluation.loocv

    def step_pipeline(self, step: str) -> Pipeline:
        return lambda seeds, cands: self.scores(seeds)[step].values[cands]

    def fused_pipeline(self, weights: WeightVector, normalization: str = "MINMAX") -> Pipeline:
        fc = FusionConfig(weights, normalization)
        return lambda seeds, cands: weighted_sum(self.raw(seeds), fc, cands)

    def candidate_ranks(self, seeds, cands) -> np.ndarray:
        raw = self.raw(seeds)
        ids = np.array([self.network.ids[c] for c in cands])
        return np.vstack([scores_to_ranks(raw[s][cands], ids) for s in STEPS])

    def wdrs_pipeline(self, weights: Sequence[float], gamma: float = 0.95) -> Pipeline:
        return lambda seeds, cands: discounted_rating(self.candidate_ranks(seeds, cands), weights, gamma)

    def ndos_pipeline(self) -> Pipeline:
        return lambda seeds, cands: 1.0 - ndos_scores(self.candidate_ranks(seeds, cands))


def score_all(
    network: InteractionNetwork,
    seeds: SeedSet,
    evidence: EvidenceInputs = EvidenceInputs(),
    cfg: PipelineConfig = PipelineConfig(),
) -> dict[str, ScoreVector]:
    """NP, RWR, SP and EVIDENCE vectors for the full seed set."""
    return StepScorer(network, seeds, evidence, cfg).scores()


def default_comparisons(cfg: PipelineConfig) -> PairwiseMatrix | Supermatrix:
    names = [c.name for c in DEFAULT_CRITERIA]
    if cfg.comparisons is not None:
        comp = cfg.comparisons
    else:
        comp = pairwise_from_ordering(names, cfg.saaty_step)
    if cfg.mode is MadmMode.TOPSIS_ANP and isinstance(comp, PairwiseMatrix):
        comp = hierarchy_supermatrix(comp, cfg.feedback)
    if cfg.mode is MadmMode.TOPSIS_AHP and isinstance(comp, Supermatrix):
        raise PipelineError("topsis-ahp needs pairwise comparisons, not a supermatrix")
    return comp


def decision_matrix(reports: dict[str, CvReport]) -> DecisionMatrix:
    perf = np.array([[reports[s].metrics()[c.name] for c in DEFAULT_CRITERIA] for s in STEPS])
    return DecisionMatrix(STEPS, DEFAULT_CRITERIA, perf)


@dataclass
class StepWeighting:
    weights: WeightVector
    matrix: DecisionMatrix
    reports: dict[str, CvReport] = field(default_factory=dict)


def derive_step_weights(
    network: InteractionNetwork,
    seeds: SeedSet,
    positions: GenePositionTable,
    evidence: EvidenceInputs = EvidenceInputs(),
    cfg: PipelineConfig = PipelineConfig(),
    targets: Sequence[int] | None = None,
    scorer: StepScorer | None = None,
) -> StepWeighting:
    """Run LOOCV for each step alone, tabulate the metrics, and weight the steps by TOPSIS."""
    scorer = scorer or StepScorer(network, seeds, evidence, cfg)
    folds = build_folds(seeds, positions, network, cfg.n_neighbors, targets)
    reports = {
        s: evaluate_folds(folds, scorer.step_pipeline(s), network, cfg.workers) for s in STEPS
    }
    dm = decision_matrix(reports)
    mode = cfg.mode if cfg.mode in (MadmMode.TOPSIS_ANP, MadmMode.TOPSIS_AHP) else MadmMode.TOPSIS_ANP
    comp = default_comparisons(replace(cfg, mode=mode, fusion=cfg.fusion))
    w = topsis_anp_weights(dm, comp, cfg.topsis_normalization)
    return StepWeighting(w, dm, reports)


def _uniform() -> WeightVector:
    return WeightVector(STEPS, np.full(len(STEPS), 1.0 / len(STEPS)))


def candidate_pipeline(scorer: StepScorer, cfg: PipelineConfig, weights: WeightVector | None) -> Pipeline:
    if cfg.mode is MadmMode.NDOS:
        return scorer.ndos_pipeline()
    if cfg.mode is MadmMode.WDRS:
        w = weights if weights is not None else _uniform()
        return scorer.wdrs_pipeline([w.as_dict()[s] for s in STEPS], cfg.gamma)
    if weights is None:
        raise PipelineError("weighted summation needs step weights")
    return scorer.fused_pipeline(weights, cfg.normalization)


@dataclass
class Evaluation:
    report: CvReport
    weighting: Optional[StepWeighting]
    weights: Optional[WeightVector]


def evaluate(
    network: InteractionNetwork,
    seeds: SeedSet,
    positions: GenePositionTable,
    evidence: EvidenceInputs = EvidenceInputs(),
    cfg: PipelineConfig = PipelineConfig(),
    split_weights: bool = False,
    rng_seed: int = 0,
) -> Evaluation:
    """Full LOOCV of the configured method.

    With ``split_weights``, step weights are derived from folds on a random
    half of the seeds and the final report covers only the other half.
    """
    scorer = StepScorer(network, seeds, evidence, cfg)
    weight_targets = eval_targets = None
    if split_weights:
        idx = seeds.as_array()
        if idx.size < 4:
            raise PipelineError("split weighting needs at least four seeds")
        perm = np.random.default_rng(rng_seed).permutation(idx)
        half = idx.size // 2
        weight_targets, eval_targets = perm[:half], perm[half:]

    weighting = None
    if cfg.fusion is not None:
        weights = cfg.fusion.step_weights
    elif cfg.mode in (MadmMode.TOPSIS_ANP, MadmMode.TOPSIS_AHP):
        weighting = derive_step_weights(network, seeds, positions, evidence, cfg, weight_targets, scorer)
        weights = weighting.weights
    else:
        weights = None
    pipe = candidate_pipeline(scorer, cfg, weights)
    folds = build_folds(seeds, positions, network, cfg.n_neighbors, eval_targets)
    report = evaluate_folds(folds, pipe, network, cfg.workers)
    return Evaluation(report, weighting, weights)


@dataclass(frozen=True)
class RankedGene:
    gene_id: str
    fused: float
    steps: dict[str, float]


def prioritize(
    network: InteractionNetwork,
    seeds: SeedSet,
    candidates: Sequence[int],
    evidence: EvidenceInputs = EvidenceInputs(),
    cfg: PipelineConfig = PipelineConfig(),
    weights: WeightVector | None = None,
    scorer: StepScorer | None = None,
) -> list[RankedGene]:
    """Rank ``candidates`` by fused score, descending; ties listed by gene id.

    ``weights`` overrides ``cfg.fusion``; one of them is required for the
    weighted-summation modes.
    """
    cands = np.asarray(candidates, dtype=np.int64)
    if cands.size == 0:
        raise PipelineError("candidate set is empty")
    if np.intersect1d(cands, seeds.as_array()).size:
        raise PipelineError("candidate set overlaps the seed set")
    scorer = scorer or StepScorer(network, seeds, evidence, cfg)
    if weights is None and cfg.fusion is not None:
        weights = cfg.fusion.step_weights
    fused = candidate_pipeline(scorer, cfg, weights)(seeds.as_array(), cands)
    raw = scorer.raw(None)
    rows = [
        RankedGene(network.ids[c], float(f), {s: float(raw[s][c]) for s in STEPS})
        for c, f in zip(cands.tolist(), fused.tolist())
    ]
    rows.sort(key=lambda r: (-r.fused, r.gene_id))
    return rows
