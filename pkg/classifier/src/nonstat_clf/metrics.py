"""Binary-classification metrics: accuracy, EER, F1, ROC/AUC.

Everything is computed from raw scores by explicit threshold sweeps — no
external metric library, so the test suite can check each piece against hand
values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


@dataclass
class EvalMetrics:
    accuracy: float
    eer: float | None          # None when only one class is present
    f1: float | None           # None when positives are absent from truth and preds
    auc: float | None
    roc: list[tuple[float, float]]  # (fpr, tpr), threshold-descending

    def to_json(self) -> str:
        return json.dumps(
            {
                "accuracy": self.accuracy,
                "eer": self.eer,
                "f1": self.f1,
                "auc": self.auc,
                "roc": [list(p) for p in self.roc],
            }
        )


def f1_score(tp: int, fp: int, fn: int) -> float | None:
    denom = 2 * tp + fp + fn
    return 2.0 * tp / denom if denom else None


def roc_points(scores: np.ndarray, labels: np.ndarray) -> list[tuple[float, float]]:
    """ROC by sweeping every score as a threshold (>= keeps the point)."""
    order = np.argsort(-scores, kind="stable")
    sorted_labels = labels[order]
    n_pos = int(labels.sum())
    n_neg = len(labels) - n_pos
    tps = np.cumsum(sorted_labels)
    fps = np.cumsum(1 - sorted_labels)
    # collapse ties: only the last point of each distinct score is a corner
    distinct = np.flatnonzero(np.diff(scores[order], append=np.nan))
    points = [(0.0, 0.0)]
    for i in distinct:
        fpr = fps[i] / n_neg if n_neg else 0.0
        tpr = tps[i] / n_pos if n_pos else 0.0
        points.append((float(fpr), float(tpr)))
    return points


def auc_trapezoid(roc: list[tuple[float, float]]) -> float:
    fpr = np.array([p[0] for p in roc])
    tpr = np.array([p[1] for p in roc])
    return float(np.trapezoid(tpr, fpr))


def equal_error_rate(scores: np.ndarray, labels: np.ndarray) -> float:
    """Operating point where false-positive and false-negative rates cross,
    linearly interpolated between adjacent thresholds."""
    roc = roc_points(scores, labels)
    fpr = np.array([p[0] for p in roc])
    fnr = 1.0 - np.array([p[1] for p in roc])
    diff = fpr - fnr  # ascending: starts at -1-ish, ends at +1-ish
    idx = int(np.argmax(diff >= 0))
    if idx == 0:
        return float(fpr[0])
    x0, x1 = diff[idx - 1], diff[idx]
    t = 0.0 if x1 == x0 else -x0 / (x1 - x0)
    return float(fnr[idx - 1] + t * (fnr[idx] - fnr[idx - 1]))


def evaluate_scores(scores, labels, threshold: float = 0.5) -> EvalMetrics:
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if scores.shape != labels.shape or scores.ndim != 1 or scores.size == 0:
        raise ValueError("scores and labels must be equal-length non-empty 1-D arrays")

    preds = (scores >= threshold).astype(np.int64)
    acc = float((preds == labels).mean())
    tp = int(np.sum((preds == 1) & (labels == 1)))
    fp = int(np.sum((preds == 1) & (labels == 0)))
    fn = int(np.sum((preds == 0) & (labels == 1)))
    f1 = f1_score(tp, fp, fn)

    single_class = labels.min() == labels.max()
    if single_class:
        return EvalMetrics(accuracy=acc, eer=None, f1=f1, auc=None, roc=[])

    roc = roc_points(scores, labels)
    return EvalMetrics(
        accuracy=acc,
        eer=equal_error_rate(scores, labels),
        f1=f1,
        auc=auc_trapezoid(roc),
        roc=roc,
    )
