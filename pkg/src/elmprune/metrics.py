"""Binary classification metrics and run aggregation."""

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata


@dataclass(frozen=True)
class MetricSummary:
    """Mean and sample (n-1) standard deviation over runs; sd is 0 for a single run."""

    mean: float
    sd: float
    n_runs: int

    def __str__(self):
        return f"{self.mean:.3f} ± {self.sd:.3f}"


def _pair(a, b, name_a, name_b):
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise ValueError(f"{name_a} and {name_b} differ in length: {a.shape[0]} vs {b.shape[0]}")
    if a.shape[0] < 1:
        raise ValueError("need at least one sample")
    return a, b


def accuracy(predicted, actual):
    predicted, actual = _pair(predicted, actual, "predicted", "actual")
    return float(np.mean(predicted == actual))


def auc(scores, actual):
    """Area under the ROC curve with half credit for tied scores.

    Computed from average ranks (Mann-Whitney U), so it equals the fraction
    of (positive, negative) pairs where the positive scores higher, plus
    half the fraction of tied pairs.
    """
    scores, actual = _pair(scores, actual, "scores", "actual")
    pos = actual == 1.0
    n_pos = int(pos.sum())
    n_neg = actual.shape[0] - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC is undefined unless both classes are present")
    ranks = rankdata(scores, method="average")
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def summarize(values):
    values = np.asarray(list(values), dtype=np.float64)
    if values.size == 0:
        raise ValueError("cannot summarize an empty list")
    sd = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return MetricSummary(float(values.mean()), sd, int(values.size))


def score_model(model_scores, actual, metric="accuracy"):
    """Evaluate raw scores with ``metric`` ("accuracy" or "auc"); higher is better."""
    if metric == "accuracy":
        return accuracy(np.where(np.asarray(model_scores) >= 0.0, 1.0, -1.0), actual)
    if metric == "auc":
        return auc(model_scores, actual)
    raise ValueError(f"unknown metric {metric!r}")
