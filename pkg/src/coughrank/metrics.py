"""Evaluation criteria for binary classifier outputs.

Turns per-sample scores into the eight-criterion report (accuracy,
AUC, precision, recall, specificity, F1, FPR, FNR) and assembles
decision matrices over a set of models.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.stats

METRIC_NAMES = (
    "acc",
    "auc",
    "precision",
    "recall",
    "specificity",
    "f1",
    "fpr",
    "fnr",
)

BENEFIT = "benefit"
COST = "cost"


@dataclass
class PredictionSet:
    """True labels and classifier scores for one (model, strategy)."""

    model_name: str
    strategy_id: str
    sample_ids: list
    true_labels: np.ndarray
    scores: np.ndarray
    threshold: float = 0.5

    def __post_init__(self):
        self.true_labels = np.asarray(self.true_labels, dtype=int)
        self.scores = np.asarray(self.scores, dtype=np.float64)
        if self.true_labels.shape != self.scores.shape:
            raise ValueError("labels and scores must align")
        if not set(np.unique(self.true_labels)) <= {0, 1}:
            raise ValueError("labels must be binary 0/1")
        if not np.all(np.isfinite(self.scores)):
            raise ValueError("scores must be finite")
        if np.any((self.scores < 0) | (self.scores > 1)):
            raise ValueError("scores must lie in [0, 1]")
        if not (0.0 < self.threshold < 1.0):
            raise ValueError("threshold must lie in (0, 1)")


@dataclass
class EvaluationReport:
    """The eight criteria of one classifier run.

    `degenerate` lists metrics that hit a 0/0 ratio and were reported
    as 0 instead of NaN.
    """

    acc: float
    auc: float
    precision: float
    recall: float
    specificity: float
    f1: float
    fpr: float
    fnr: float
    degenerate: list = field(default_factory=list)

    def as_dict(self):
        return {name: getattr(self, name) for name in METRIC_NAMES}


@dataclass(frozen=True)
class CriterionSpec:
    """A named criterion and whether larger (benefit) or smaller (cost) wins."""

    name: str
    direction: str

    def __post_init__(self):
        if self.direction not in (BENEFIT, COST):
            raise ValueError("direction must be 'benefit' or 'cost'")


DEFAULT_CRITERIA = tuple(
    CriterionSpec(name, COST if name in ("fpr", "fnr") else BENEFIT)
    for name in METRIC_NAMES
)


@dataclass
class DecisionMatrix:
    """m alternatives x n criteria with per-criterion direction."""

    alternatives: list
    criteria: list
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        m, n = len(self.alternatives), len(self.criteria)
        if self.values.shape != (m, n):
            raise ValueError("values shape must match labels")
        if m < 2:
            raise ValueError("a decision matrix needs at least 2 alternatives")
        if n < 1:
            raise ValueError("a decision matrix needs at least 1 criterion")
        if len(set(self.alternatives)) != m:
            raise ValueError("alternative names must be unique")
        if len(set(c.name for c in self.criteria)) != n:
            raise ValueError("criterion names must be unique")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("decision matrix values must be finite")

    @property
    def cost_mask(self):
        return np.array([c.direction == COST for c in self.criteria])


def confusion_counts(preds):
    """(TP, FP, TN, FN); predicted positive iff score >= threshold."""
    if preds.scores.size == 0:
        raise ValueError("empty prediction set")
    pred_pos = preds.scores >= preds.threshold
    pos = preds.true_labels == 1
    tp = int(np.sum(pred_pos & pos))
    fp = int(np.sum(pred_pos & ~pos))
    tn = int(np.sum(~pred_pos & ~pos))
    fn = int(np.sum(~pred_pos & pos))
    return tp, fp, tn, fn


def rank_auc(true_labels, scores):
    """ROC-AUC via the Mann-Whitney rank statistic, ties counted 1/2."""
    true_labels = np.asarray(true_labels, dtype=int)
    scores = np.asarray(scores, dtype=np.float64)
    n_pos = int(np.sum(true_labels == 1))
    n_neg = int(np.sum(true_labels == 0))
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC requires both classes present")
    ranks = scipy.stats.rankdata(scores)
    rank_sum = ranks[true_labels == 1].sum()
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def _safe_ratio(num, den, name, degenerate):
    if den == 0:
        degenerate.append(name)
        return 0.0
    return num / den


def evaluate(preds):
    """Compute the eight-criterion EvaluationReport for one PredictionSet."""
    tp, fp, tn, fn = confusion_counts(preds)
    n = tp + fp + tn + fn
    degenerate = []
    precision = _safe_ratio(tp, tp + fp, "precision", degenerate)
    recall = _safe_ratio(tp, tp + fn, "recall", degenerate)
    specificity = _safe_ratio(tn, tn + fp, "specificity", degenerate)
    f1 = _safe_ratio(2 * precision * recall, precision + recall, "f1", degenerate)
    return EvaluationReport(
        acc=(tp + tn) / n,
        auc=rank_auc(preds.true_labels, preds.scores),
        precision=precision,
        recall=recall,
        specificity=specificity,
        f1=f1,
        fpr=1.0 - specificity,
        fnr=1.0 - recall,
        degenerate=degenerate,
    )


DEFAULT_THRESHOLD_GRID = tuple(np.round(np.arange(0.01, 1.0, 0.01), 2))


def threshold_sweep(preds, grid=DEFAULT_THRESHOLD_GRID, objective="f1"):
    """Pick the grid cutoff maximizing `objective` on the predictions.

    Ties break toward the cutoff nearest 0.5, then the smaller cutoff.
    """
    grid = list(grid)
    if not grid:
        raise ValueError("threshold grid must be non-empty")
    if any(not (0.0 < t < 1.0) for t in grid):
        raise ValueError("grid cutoffs must lie in (0, 1)")
    if objective not in METRIC_NAMES:
        raise ValueError(f"unknown objective {objective!r}")
    best = None
    n_defined = 0
    for cutoff in grid:
        trial = PredictionSet(
            preds.model_name,
            preds.strategy_id,
            preds.sample_ids,
            preds.true_labels,
            preds.scores,
            threshold=float(cutoff),
        )
        report = evaluate(trial)
        if objective in report.degenerate:
            continue
        n_defined += 1
        key = (-getattr(report, objective), abs(cutoff - 0.5), cutoff)
        if best is None or key < best[0]:
            best = (key, float(cutoff))
    if best is None:
        raise ValueError(f"objective {objective!r} undefined at every cutoff")
    return best[1]


def build_decision_matrix(reports, criteria=DEFAULT_CRITERIA):
    """Assemble model reports into a DecisionMatrix, rows in input order.

    `reports` maps model name -> EvaluationReport (or plain dict of
    metric values).
    """
    criteria = list(criteria)
    rows = []
    for model, report in reports.items():
        values = report.as_dict() if hasattr(report, "as_dict") else dict(report)
        missing = [c.name for c in criteria if c.name not in values]
        if missing:
            raise ValueError(f"model {model!r} is missing criteria {missing}")
        rows.append([values[c.name] for c in criteria])
    return DecisionMatrix(
        alternatives=list(reports.keys()), criteria=criteria, values=np.array(rows)
    )
