"""Criterion weighting (AHP, ANP) and alternative ranking (TOPSIS)."""

from __future__ import annotations

import csv
import enum
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np


class MadmInputError(ValueError):
    pass


class Direction(str, enum.Enum):
    BENEFIT = "BENEFIT"
    COST = "COST"


@dataclass(frozen=True)
class Criterion:
    name: str
    direction: Direction = Direction.BENEFIT


# order of preference used when building default comparisons
DEFAULT_CRITERIA = (
    Criterion("AUC", Direction.BENEFIT),
    Criterion("MRR", Direction.BENEFIT),
    Criterion("AR", Direction.COST),
    Criterion("top1", Direction.BENEFIT),
    Criterion("top5", Direction.BENEFIT),
)

# Saaty random consistency index by matrix order
RANDOM_INDEX = {3: 0.58, 4: 0.90, 5: 1.12, 6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45, 10: 1.49}


@dataclass(frozen=True, eq=False)
class WeightVector:
    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.shape != (len(self.labels),):
            raise MadmInputError("weight count does not match label count")
        if np.any(~np.isfinite(v)) or np.any(v < 0) or abs(v.sum() - 1.0) > 1e-9:
            raise MadmInputError(f"weights must be non-negative and sum to 1, got {v}")

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.labels, self.values.tolist()))

    @classmethod
    def normalized(cls, labels: Sequence[str], raw: Sequence[float]) -> "WeightVector":
        raw = np.asarray(raw, dtype=float)
        return cls(tuple(labels), raw / raw.sum())


@dataclass(frozen=True, eq=False)
class DecisionMatrix:
    alternatives: tuple[str, ...]
    criteria: tuple[Criterion, ...]
    performance: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.performance, dtype=float)
        object.__setattr__(self, "performance", p)
        if p.shape != (len(self.alternatives), len(self.criteria)):
            raise MadmInputError(f"performance shape {p.shape} does not match alternatives x criteria")
        if len(self.alternatives) < 2 or len(self.criteria) < 1:
            raise MadmInputError("need at least 2 alternatives and 1 criterion")
        if not np.all(np.isfinite(p)):
            raise MadmInputError("performance entries must be finite")
        if len({c.name for c in self.criteria}) != len(self.criteria):
            raise MadmInputError("criterion names must be unique")

    @property
    def criterion_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.criteria)


@dataclass(frozen=True, eq=False)
class PairwiseMatrix:
    labels: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        n = len(self.labels)
        if m.shape != (n, n) or n == 0:
            raise MadmInputError("pairwise matrix must be square and match its labels")
        if np.any(~np.isfinite(m)) or np.any(m <= 0):
            raise MadmInputError("pairwise entries must be positive and finite")
        if not np.allclose(np.diag(m), 1.0):
            raise MadmInputError("pairwise diagonal must be 1")
        if not np.allclose(m * m.T, 1.0, rtol=1e-9, atol=1e-9):
            raise MadmInputError("pairwise matrix is not reciprocal")
        if np.any(m < 1 / 9 - 1e-12) or np.any(m > 9 + 1e-12):
            raise MadmInputError("pairwise entries must lie in [1/9, 9]")


@dataclass(frozen=True, eq=False)
class Supermatrix:
    """Column-stochastic influence matrix; ``labels`` name its rows and columns."""

    labels: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        n = len(self.labels)
        if m.shape != (n, n) or n == 0:
            raise MadmInputError("supermatrix must be square and match its labels")
        if len(set(self.labels)) != n:
            raise MadmInputError("supermatrix labels must be unique")


def pairwise_from_ordering(ordered_names: Sequence[str], step: int = 2) -> PairwiseMatrix:
    """Reciprocal comparisons from a strict preference order.

    Item ``i`` is preferred over every later item ``j`` with intensity
    ``1 + step * (j - i)``, capped at 9.
    """
    names = tuple(ordered_names)
    if not names:
        raise MadmInputError("ordering is empty")
    if len(set(names)) != len(names):
        raise MadmInputError("ordering has duplicate names")
    if not 1 <= step <= 8:
        raise MadmInputError("step must lie in [1, 8]")
    n = len(names)
    m = np.ones((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            m[i, j] = min(9.0, 1.0 + step * (j - i))
            m[j, i] = 1.0 / m[i, j]
    return PairwiseMatrix(names, m)


def principal_eigenvector(m: np.ndarray, tol: float = 1e-10, max_iter: int = 10_000) -> tuple[np.ndarray, float]:
    """Power iteration on a positive matrix; returns (unit-sum vector, eigenvalue)."""
    n = m.shape[0]
    w = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        mw = m @ w
        lam = mw.sum()
        w_next = mw / lam
        if np.abs(m @ w_next - lam * w_next).sum() < tol * lam:
            return w_next, float((m @ w_next).sum())
        w = w_next
    raise ArithmeticError("power iteration did not converge")


def ahp_weights(m: PairwiseMatrix) -> WeightVector:
    w, _ = principal_eigenvector(m.matrix)
    return WeightVector.normalized(m.labels, w)


def consistency_ratio(m: PairwiseMatrix) -> float:
    n = len(m.labels)
    if n <= 2:
        return 0.0
    if n not in RANDOM_INDEX:
        raise MadmInputError(f"no random index tabulated for order {n}")
    _, lam = principal_eigenvector(m.matrix)
    ci = (lam - n) / (n - 1)
    return max(0.0, ci / RANDOM_INDEX[n])


def anp_weights(
    supermatrix: Supermatrix,
    criteria: Sequence[str] | None = None,
    damping: float = 1e-6,
    max_squarings: int = 200,
    tol: float = 1e-13,
) -> WeightVector:
    """Limit priorities of a column-stochastic supermatrix.

    A small uniform mix makes the chain primitive; the limit is reached by
    repeated squaring. The stationary column is restricted to ``criteria``
    (all labels by default) and renormalized.
    """
    W = supermatrix.matrix
    n = W.shape[0]
    if np.any(W < 0) or not np.allclose(W.sum(axis=0), 1.0, rtol=0, atol=1e-9):
        raise MadmInputError("supermatrix columns must be non-negative and sum to 1")
    P = (1.0 - damping) * W + damping / n
    for _ in range(max_squarings):
        P_next = P @ P
        P_next /= P_next.sum(axis=0, keepdims=True)
        if np.abs(P_next - P).max() < tol:
            P = P_next
            break
        P = P_next
    else:
        raise ArithmeticError(f"limit supermatrix did not converge in {max_squarings} squarings")
    # columns of the limit are identical; average them to damp round-off
    limit = P.mean(axis=1)
    labels = list(supermatrix.labels) if criteria is None else list(criteria)
    pos = {g: i for i, g in enumerate(supermatrix.labels)}
    missing = [c for c in labels if c not in pos]
    if missing:
        raise MadmInputError(f"criteria missing from supermatrix: {missing}")
    vals = limit[[pos[c] for c in labels]]
    if vals.sum() <= 0:
        raise MadmInputError("criteria receive no limit priority")
    return WeightVector.normalized(labels, vals)


def hierarchy_supermatrix(pairwise: PairwiseMatrix, feedback: float = 0.0, goal: str = "goal") -> Supermatrix:
    """Goal-plus-criteria supermatrix.

    The goal column holds the AHP priorities of ``pairwise``. Each criterion
    column sends ``1 - feedback`` back to the goal and spreads ``feedback``
    uniformly over the criteria. ``feedback = 0`` is a plain hierarchy.
    """
    if not 0 <= feedback <= 1:
        raise MadmInputError("feedback must lie in [0, 1]")
    if goal in pairwise.labels:
        raise MadmInputError(f"goal label {goal!r} clashes with a criterion")
    w = ahp_weights(pairwise).values
    k = w.size
    m = np.zeros((k + 1, k + 1))
    m[1:, 0] = w
    m[0, 1:] = 1.0 - feedback
    m[1:, 1:] = feedback / k
    return Supermatrix((goal, *pairwise.labels), m)


def topsis(d: DecisionMatrix, w: WeightVector, normalization: str = "vector") -> np.ndarray:
    """Relative closeness of each alternative to the positive ideal, in [0, 1]."""
    if tuple(w.labels) != d.criterion_names:
        raise MadmInputError(f"weight labels {w.labels} do not match criteria {d.criterion_names}")
    x = d.performance
    if normalization == "vector":
        norms = np.sqrt((x**2).sum(axis=0))
        zero = norms == 0
        if np.any(zero):
            warnings.warn(f"all-zero criterion column(s) {np.flatnonzero(zero).tolist()} ignored", stacklevel=2)
        r = np.divide(x, norms, out=np.zeros_like(x), where=~zero)
    elif normalization == "minmax":
        lo, hi = x.min(axis=0), x.max(axis=0)
        span = hi - lo
        r = np.divide(x - lo, span, out=np.zeros_like(x), where=span > 0)
    else:
        raise MadmInputError(f"unknown normalization {normalization!r}")
    v = r * w.values
    benefit = np.array([c.direction is Direction.BENEFIT for c in d.criteria])
    best = np.where(benefit, v.max(axis=0), v.min(axis=0))
    worst = np.where(benefit, v.min(axis=0), v.max(axis=0))
    d_pos = np.sqrt(((v - best) ** 2).sum(axis=1))
    d_neg = np.sqrt(((v - worst) ** 2).sum(axis=1))
    total = d_pos + d_neg
    return np.divide(d_neg, total, out=np.full_like(total, 0.5), where=total > 0)


def criterion_weights(
    d: DecisionMatrix, comparisons: PairwiseMatrix | Supermatrix
) -> WeightVector:
    names = d.criterion_names
    if isinstance(comparisons, Supermatrix):
        return anp_weights(comparisons, names)
    if set(comparisons.labels) != set(names):
        raise MadmInputError(f"comparison labels {comparisons.labels} do not match criteria {names}")
    w = ahp_weights(comparisons).as_dict()
    return WeightVector(names, np.array([w[c] for c in names]))


def topsis_anp_weights(
    d: DecisionMatrix, comparisons: PairwiseMatrix | Supermatrix, normalization: str = "vector"
) -> WeightVector:
    """Alternative weights: TOPSIS closeness under ANP (or AHP) criterion weights, renormalized."""
    closeness = topsis(d, criterion_weights(d, comparisons), normalization)
    if closeness.sum() <= 0:
        closeness = np.ones_like(closeness)
    return WeightVector.normalized(d.alternatives, closeness)


# --- file formats ---------------------------------------------------------


def read_decision_matrix(path: str | Path) -> DecisionMatrix:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if len(rows) < 3:
        raise MadmInputError(f"{path}: need a header and at least two alternatives")
    criteria = []
    for h in rows[0][1:]:
        h = h.strip()
        if not h or h[0] not in "+-" or len(h) < 2:
            raise MadmInputError(f"{path}: criterion header {h!r} must start with + or -")
        criteria.append(Criterion(h[1:], Direction.BENEFIT if h[0] == "+" else Direction.COST))
    alts, perf = [], []
    for r in rows[1:]:
        if len(r) != len(criteria) + 1:
            raise MadmInputError(f"{path}: row {r[0]!r} has {len(r) - 1} values, expected {len(criteria)}")
        alts.append(r[0].strip())
        try:
            perf.append([float(x) for x in r[1:]])
        except ValueError as e:
            raise MadmInputError(f"{path}: {e}") from None
    return DecisionMatrix(tuple(alts), tuple(criteria), np.array(perf))


def decision_matrix_rows(d: DecisionMatrix) -> list[list[str]]:
    head = ["alternative"] + [("+" if c.direction is Direction.BENEFIT else "-") + c.name for c in d.criteria]
    return [head] + [[a] + [repr(float(x)) for x in row] for a, row in zip(d.alternatives, d.performance)]


def read_square_matrix(path: str | Path) -> tuple[tuple[str, ...], np.ndarray]:
    """CSV square matrix whose header row and first column carry the labels."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if not rows:
        raise MadmInputError(f"{path}: empty matrix file")
    labels = tuple(h.strip() for h in rows[0][1:])
    body = rows[1:]
    if len(body) != len(labels):
        raise MadmInputError(f"{path}: {len(body)} rows for {len(labels)} labels")
    vals = []
    for label, r in zip(labels, body):
        if r[0].strip() != label or len(r) != len(labels) + 1:
            raise MadmInputError(f"{path}: row {r[0]!r} does not match header order or width")
        try:
            vals.append([float(x) for x in r[1:]])
        except ValueError as e:
            raise MadmInputError(f"{path}: {e}") from None
    return labels, np.array(vals)


def read_supermatrix(path: str | Path) -> Supermatrix:
    labels, m = read_square_matrix(path)
    sm = Supermatrix(labels, m)
    if np.any(m < 0) or not np.allclose(m.sum(axis=0), 1.0, rtol=0, atol=1e-9):
        raise MadmInputError(f"{path}: supermatrix columns must be non-negative and sum to 1")
    return sm


def read_comparisons(path: str | Path) -> PairwiseMatrix | Supermatrix:
    """A stochastic-column matrix is read as a supermatrix, otherwise as pairwise comparisons."""
    labels, m = read_square_matrix(path)
    if np.all(m >= 0) and np.allclose(m.sum(axis=0), 1.0, rtol=0, atol=1e-9):
        return Supermatrix(labels, m)
    return PairwiseMatrix(labels, m)
