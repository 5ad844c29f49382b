"""Random walk with restart and network propagation on sparse transition matrices."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp

from .graph import InteractionNetwork, SeedSet


class Provenance(str, enum.Enum):
    RWR = "RWR"
    NP = "NP"
    SP = "SP"
    EVIDENCE = "EVIDENCE"
    FUSED = "FUSED"


class Normalization(str, enum.Enum):
    COLUMN = "COLUMN"
    SYMMETRIC = "SYMMETRIC"


class ConvergenceError(RuntimeError):
    def __init__(self, iterations: int, residual: float):
        super().__init__(f"no convergence after {iterations} iterations (last residual {residual:.3e})")
        self.iterations = iterations
        self.residual = residual


class IsolatedNodeError(ValueError):
    pass


@dataclass(frozen=True)
class DiffusionConfig:
    alpha: float = 0.15
    tolerance: float = 1e-6
    max_iterations: int = 1000

    def __post_init__(self) -> None:
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")


@dataclass(frozen=True, eq=False)
class ScoreVector:
    values: np.ndarray
    provenance: Provenance
    iterations: int = 0
    residual: float = 0.0

    def __post_init__(self) -> None:
        v = self.values
        if v.ndim != 1 or not np.all(np.isfinite(v)) or np.any(v < 0):
            raise ValueError("score values must be a finite non-negative 1-d array")

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    matrix: sp.csr_matrix
    normalization: Normalization


def _weighted_degree(network: InteractionNetwork) -> np.ndarray:
    deg = network.weighted_degree()
    if np.any(deg <= 0):
        bad = network.ids[int(np.flatnonzero(deg <= 0)[0])]
        raise IsolatedNodeError(f"node {bad!r} has no edges; run prune_isolated first")
    return deg


def column_normalize(network: InteractionNetwork) -> TransitionMatrix:
    """``W[u, v] = w(u, v) / deg_w(v)``: every column sums to one."""
    deg = _weighted_degree(network)
    w = network.adjacency @ sp.diags(1.0 / deg)
    return TransitionMatrix(sp.csr_matrix(w), Normalization.COLUMN)


def symmetric_normalize(network: InteractionNetwork) -> TransitionMatrix:
    """``W[u, v] = w(u, v) / sqrt(deg_w(u) deg_w(v))``."""
    d = 1.0 / np.sqrt(_weighted_degree(network))
    a = network.adjacency.tocoo()
    data = a.data * d[a.row] * d[a.col]
    w = sp.csr_matrix((data, (a.row, a.col)), shape=a.shape)
    w.sort_indices()
    return TransitionMatrix(w, Normalization.SYMMETRIC)


def restart_vector(n: int, seeds: SeedSet | np.ndarray) -> np.ndarray:
    idx = seeds.as_array() if isinstance(seeds, SeedSet) else np.asarray(seeds, dtype=np.int64)
    if idx.size == 0:
        raise ValueError("seed set is empty")
    y0 = np.zeros(n)
    y0[idx] = 1.0 / idx.size
    return y0


def diffuse(
    matrix: TransitionMatrix,
    seeds: SeedSet | np.ndarray,
    config: DiffusionConfig = DiffusionConfig(),
    callback: Optional[Callable[[int, np.ndarray], None]] = None,
) -> ScoreVector:
    """Iterate ``y <- (1 - alpha) W y + alpha y0`` until the L1 step is below tolerance.

    ``callback(t, y)`` is invoked with every iterate, starting from ``y0`` at ``t = 0``.
    """
    W = matrix.matrix
    y0 = restart_vector(W.shape[0], seeds)
    a = config.alpha
    y = y0
    if callback is not None:
        callback(0, y)
    residual = np.inf
    for t in range(1, config.max_iterations + 1):
        y_next = (1.0 - a) * (W @ y) + a * y0
        residual = float(np.abs(y_next - y).sum())
        y = y_next
        if callback is not None:
            callback(t, y)
        if residual < config.tolerance:
            prov = Provenance.RWR if matrix.normalization is Normalization.COLUMN else Provenance.NP
            return ScoreVector(y, prov, iterations=t, residual=residual)
    raise ConvergenceError(config.max_iterations, residual)


def rwr(network: InteractionNetwork, seeds, config: DiffusionConfig = DiffusionConfig()) -> ScoreVector:
    return diffuse(column_normalize(network), seeds, config)


def network_propagation(
    network: InteractionNetwork, seeds, config: DiffusionConfig = DiffusionConfig()
) -> ScoreVector:
    return diffuse(symmetric_normalize(network), seeds, config)
