"""Soft and hard fusion of per-strategy TOPSIS closeness scores.

The soft ensemble averages closeness across training strategies; the
hard ensemble converts each strategy's closeness column into points
(best model gets m points) and sums them.
"""

from dataclasses import dataclass

import numpy as np

from .mcdm import competition_ranks

# Points are awarded on closeness rounded to this many decimals so
# near-identical scores share a point value.
TIE_DECIMALS = 2


@dataclass
class ClosenessTable:
    """m models x T strategies of relative closeness values."""

    models: list
    strategies: list
    closeness: np.ndarray

    def __post_init__(self):
        self.closeness = np.asarray(self.closeness, dtype=np.float64)
        m, t = len(self.models), len(self.strategies)
        if self.closeness.shape != (m, t):
            raise ValueError("closeness shape must match labels")
        if t < 1:
            raise ValueError("at least one strategy required")
        if not np.all(np.isfinite(self.closeness)):
            raise ValueError("closeness values must be finite")
        if np.any((self.closeness < 0) | (self.closeness > 1)):
            raise ValueError("closeness values must lie in [0, 1]")


@dataclass
class EnsembleResult:
    models: list
    strategies: list
    soft_scores: np.ndarray
    soft_ranks: np.ndarray
    hard_points: np.ndarray
    hard_totals: np.ndarray
    hard_ranks: np.ndarray
    soft_best: str
    hard_best: str


def soft_ensemble(ct):
    """Average closeness per model and rank descending (ties share rank)."""
    scores = ct.closeness.mean(axis=1)
    return scores, competition_ranks(scores)


def hard_points(ct, tie_eps=0.0):
    """Per-strategy points: m + 1 - competition rank of the closeness.

    Closeness values are rounded to 2 decimals first; values within
    `tie_eps` of each other after rounding form one tied cluster and
    share the cluster's best point.
    """
    if tie_eps < 0:
        raise ValueError("tie_eps must be nonnegative")
    m, t = ct.closeness.shape
    points = np.zeros((m, t), dtype=int)
    rounded = np.round(ct.closeness, TIE_DECIMALS)
    for j in range(t):
        col = rounded[:, j]
        order = np.argsort(-col, kind="stable")
        cluster_of = np.empty(m, dtype=int)
        clusters = []
        for idx in order:
            if clusters and clusters[-1][-1] - col[idx] <= tie_eps:
                clusters[-1].append(col[idx])
            else:
                clusters.append([col[idx]])
            cluster_of[idx] = len(clusters) - 1
        # competition rank of each cluster = 1 + members in better clusters
        sizes = [len(c) for c in clusters]
        starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
        points[:, j] = m - starts[cluster_of]
    return points


def hard_ensemble(ct, tie_eps=0.0):
    """Sum per-strategy points and rank descending."""
    points = hard_points(ct, tie_eps)
    totals = points.sum(axis=1)
    return totals, competition_ranks(totals)


def fuse(ct, tie_eps=0.0):
    """Run both ensembles and name the winners.

    A tie for soft_best breaks by hard total, then model name; ties
    for hard_best break by soft score, then model name.
    """
    soft_scores, soft_ranks = soft_ensemble(ct)
    points = hard_points(ct, tie_eps)
    hard_totals = points.sum(axis=1)
    hard_ranks = competition_ranks(hard_totals)
    order = np.arange(len(ct.models))
    soft_best = min(
        order[soft_ranks == 1],
        key=lambda i: (-hard_totals[i], ct.models[i]),
    )
    hard_best = min(
        order[hard_ranks == 1],
        key=lambda i: (-soft_scores[i], ct.models[i]),
    )
    return EnsembleResult(
        models=list(ct.models),
        strategies=list(ct.strategies),
        soft_scores=soft_scores,
        soft_ranks=soft_ranks,
        hard_points=points,
        hard_totals=hard_totals,
        hard_ranks=hard_ranks,
        soft_best=ct.models[soft_best],
        hard_best=ct.models[hard_best],
    )
