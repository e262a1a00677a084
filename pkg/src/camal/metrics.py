"""Binary classification metrics for detection and localization scoring.

Undefined ratios (zero denominator) are reported as 0.0 together with an
explicit flag, so result tables stay rectangular across degenerate cases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from camal.errors import EmptyInput, LengthMismatch, ShapeMismatch


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self):
        return self.tp + self.fp + self.tn + self.fn


def confusion_counts(pred, truth) -> ConfusionCounts:
    pred = np.asarray(pred, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    if pred.shape != truth.shape:
        raise LengthMismatch(f"pred shape {pred.shape} != truth shape {truth.shape}")
    if pred.size == 0:
        raise EmptyInput("no items to score")
    return ConfusionCounts(
        tp=int(np.sum((pred == 1) & (truth == 1))),
        fp=int(np.sum((pred == 1) & (truth == 0))),
        tn=int(np.sum((pred == 0) & (truth == 0))),
        fn=int(np.sum((pred == 0) & (truth == 1))),
    )


def detection_metrics(pred, truth) -> dict:
    """Accuracy, balanced accuracy, precision, recall, F1 over binary vectors.

    Returns a flat dict; the "undefined" key lists metric names whose
    denominator was zero (each reported as 0.0).
    """
    c = confusion_counts(pred, truth)
    undefined = []

    def ratio(name, num, denom):
        if denom == 0:
            undefined.append(name)
            return 0.0
        return num / denom

    precision = ratio("precision", c.tp, c.tp + c.fp)
    recall = ratio("recall", c.tp, c.tp + c.fn)
    recall_neg = ratio("recall_negative", c.tn, c.tn + c.fp)
    f1 = ratio("f1", 2 * precision * recall, precision + recall)
    return {
        "accuracy": (c.tp + c.tn) / c.total,
        "balanced_accuracy": 0.5 * (recall + recall_neg),
        "precision": precision,
        "recall": recall,
        "f1": f1,
        "tp": c.tp,
        "fp": c.fp,
        "tn": c.tn,
        "fn": c.fn,
        "undefined": undefined,
    }


def run_iou(pred, truth) -> float:
    """Intersection-over-union of the active regions of two binary vectors.

    Both empty means perfect agreement (1.0) rather than 0/0.
    """
    pred = np.asarray(pred, dtype=bool)
    truth = np.asarray(truth, dtype=bool)
    union = np.sum(pred | truth)
    if union == 0:
        return 1.0
    return float(np.sum(pred & truth) / union)


def localization_metrics(pred_windows, truth_windows) -> dict:
    """Timestep metrics pooled across windows, plus mean per-window IoU.

    pred_windows / truth_windows: sequences of equal-shape binary vectors.
    Pooling concatenates every timestep before scoring (micro-average);
    the IoU diagnostic is computed per window, then averaged.
    """
    if len(pred_windows) != len(truth_windows):
        raise ShapeMismatch(
            f"{len(pred_windows)} prediction windows vs {len(truth_windows)} truth windows"
        )
    if len(pred_windows) == 0:
        raise EmptyInput("no windows to score")
    preds = []
    truths = []
    ious = []
    for p, t in zip(pred_windows, truth_windows):
        p = np.asarray(p, dtype=np.int64)
        t = np.asarray(t, dtype=np.int64)
        if p.shape != t.shape:
            raise ShapeMismatch(f"window shapes differ: {p.shape} vs {t.shape}")
        preds.append(p)
        truths.append(t)
        ious.append(run_iou(p, t))
    metrics = detection_metrics(np.concatenate(preds), np.concatenate(truths))
    metrics["mean_iou"] = float(np.mean(ious))
    return metrics


def label_accounting(windows, supervision: str) -> int:
    """Labels consumed by a training regime over a window set.

    weak charges one bit per window; strong charges one label per
    timestep, so mixed lengths sum each window's own length.
    """
    if len(windows) == 0:
        raise EmptyInput("no windows")
    if supervision == "weak":
        return len(windows)
    if supervision == "strong":
        return int(sum(len(w.values) for w in windows))
    raise ValueError(f"unknown supervision regime {supervision!r}")
