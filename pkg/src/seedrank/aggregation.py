"""Score fusion and rank-combination baselines."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .madm import WeightVector

STEPS = ("NP", "RWR", "SP", "EVIDENCE")


@dataclass(frozen=True)
class FusionConfig:
    step_weights: WeightVector = field(
        default_factory=lambda: WeightVector(STEPS, np.full(len(STEPS), 1 / len(STEPS)))
    )
    normalization: str = "MINMAX"

    def __post_init__(self) -> None:
        if self.normalization not in ("MINMAX", "NONE"):
            raise ValueError(f"unknown normalization {self.normalization!r}")


def normalize_scores(values: np.ndarray, candidates: Sequence[int] | None = None) -> np.ndarray:
    """Min-max scale ``values[candidates]`` to [0, 1]; a constant slice maps to zeros.

    The result is aligned with ``candidates`` (or with ``values`` when omitted).
    """
    v = np.asarray(values, dtype=float)
    if candidates is not None:
        v = v[np.asarray(candidates, dtype=np.int64)]
    if v.size == 0:
        raise ValueError("no candidates to normalize")
    lo, hi = v.min(), v.max()
    if hi == lo:
        return np.zeros_like(v)
    return (v - lo) / (hi - lo)


def weighted_sum(
    scores: Mapping[str, np.ndarray],
    cfg: FusionConfig,
    candidates: Sequence[int],
) -> np.ndarray:
    """Fused score per candidate: sum over steps of weight times (normalized) step score."""
    lengths = {np.asarray(v).shape for v in scores.values()}
    if len(lengths) != 1:
        raise ValueError(f"score vectors have mismatched shapes {sorted(lengths)}")
    idx = np.asarray(candidates, dtype=np.int64)
    out = np.zeros(idx.size)
    for step, w in cfg.step_weights.as_dict().items():
        if step not in scores:
            raise KeyError(f"missing score vector for step {step!r}")
        if cfg.normalization == "MINMAX":
            s = normalize_scores(scores[step], idx)
        else:
            s = np.asarray(scores[step], dtype=float)[idx]
        out += w * s
    return out


def order_statistics_q(rank_ratios: Sequence[float]) -> float:
    """Joint cumulative probability of N uniform order statistics at the given ratios.

    Uses the recursion ``V_k = sum_{i=1..k} (-1)^(i-1) V_{k-i} r_{N-k+1}^i / i!``
    with ``V_0 = 1`` and returns ``N! V_N``. Ratios must be sorted ascending.
    The alternating sum cancels badly in floating point, so it is evaluated
    exactly over the rationals.
    """
    r = np.asarray(rank_ratios, dtype=float)
    n = r.size
    if n == 0:
        raise ValueError("no rank ratios")
    if np.any(r < 0) or np.any(r > 1) or not np.all(np.isfinite(r)):
        raise ValueError("rank ratios must lie in [0, 1]")
    if np.any(np.diff(r) < 0):
        raise ValueError("rank ratios must be sorted ascending")
    x = [Fraction(float(t)) for t in r]
    v = [Fraction(1)]
    for k in range(1, n + 1):
        xk = x[n - k]
        acc = Fraction(0)
        for i in range(1, k + 1):
            term = v[k - i] * xk**i / math.factorial(i)
            acc += term if i % 2 else -term
        v.append(acc)
    return float(math.factorial(n) * v[n])


def scores_to_ranks(scores: np.ndarray, tie_key: Sequence | None = None) -> np.ndarray:
    """Ordinal ranks (1 = highest score). Ties go to the smaller ``tie_key`` (default: position)."""
    s = np.asarray(scores, dtype=float)
    key = np.arange(s.size) if tie_key is None else np.asarray(tie_key)
    order = np.lexsort((key, -s))
    ranks = np.empty(s.size, dtype=np.int64)
    ranks[order] = np.arange(1, s.size + 1)
    return ranks


def _check_ranks(ranks: np.ndarray) -> np.ndarray:
    r = np.atleast_2d(np.asarray(ranks))
    m = r.shape[1]
    if np.any(r < 1) or np.any(r > m):
        raise ValueError(f"ranks must lie in 1..{m}")
    return r


def ndos_scores(ranks: np.ndarray) -> np.ndarray:
    """Q statistic per candidate from a (sources x candidates) rank array; lower is better."""
    r = _check_ranks(ranks)
    ratios = np.sort(r / r.shape[1], axis=0)
    return np.array([order_statistics_q(ratios[:, j]) for j in range(r.shape[1])])


def discounted_rating(ranks: np.ndarray, weights: Sequence[float], gamma: float = 0.95) -> np.ndarray:
    """``sum_i w_i * gamma**(rank_i - 1)`` per candidate; ranks is (sources x candidates)."""
    r = _check_ranks(ranks)
    w = np.asarray(weights, dtype=float)
    if w.size != r.shape[0]:
        raise ValueError("one weight per rank source required")
    if not 0 < gamma <= 1:
        raise ValueError("gamma must lie in (0, 1]")
    return w @ gamma ** (r - 1.0)
