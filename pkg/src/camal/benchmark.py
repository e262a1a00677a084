"""Benchmark runs and their append-only persistence.

One store file per dataset; each row is a self-describing JSON record.
Reruns append new timestamped rows, never rewrite old ones, so the
history of a method on a dataset is preserved verbatim for the API.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from camal.errors import HouseOverlap, InvalidConfig
from camal.metrics import detection_metrics, localization_metrics
from camal.pipeline import CamalEnsemble, localize_window
from camal.windows import assign_weak_label, segment_windows

STORE_SCHEMA = 1


@dataclass(frozen=True)
class BenchmarkRecord:
    dataset_id: str
    appliance: str
    method_id: str
    task: str
    metrics: dict
    labels_used: int
    windows_evaluated: int
    created_at: float = field(default_factory=time.time)

    def __post_init__(self):
        if self.task not in ("detection", "localization"):
            raise InvalidConfig(f"unknown task {self.task!r}")
        if self.labels_used < 1:
            raise InvalidConfig("labels_used must be >= 1")


class BenchmarkStore:
    """Append-only JSONL store, one file per dataset."""

    def __init__(self, root):
        self.root = str(root)
        os.makedirs(self.root, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, dataset_id):
        return os.path.join(self.root, f"{dataset_id}.jsonl")

    def append(self, record: BenchmarkRecord):
        row = {"schema_version": STORE_SCHEMA, **asdict(record)}
        with self._lock:
            with open(self._path(record.dataset_id), "a") as fh:
                fh.write(json.dumps(row) + "\n")

    def datasets(self):
        if not os.path.isdir(self.root):
            return []
        return sorted(
            name[: -len(".jsonl")]
            for name in os.listdir(self.root)
            if name.endswith(".jsonl")
        )

    def rows(self, dataset_id, task=None, metric=None):
        """Newest-first records; metric narrows the metrics map to one value."""
        path = self._path(dataset_id)
        if not os.path.exists(path):
            return []
        out = []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                row = json.loads(line)
                if task is not None and row["task"] != task:
                    continue
                if metric is not None:
                    if metric not in row["metrics"]:
                        continue
                    row = {**row, "metrics": {metric: row["metrics"][metric]}}
                out.append(row)
        out.sort(key=lambda r: r["created_at"], reverse=True)
        return out


def evaluate_houses(ens: CamalEnsemble, houses, kind):
    """Window detection and timestep localization over full house series.

    Returns (detection metrics, localization metrics, windows evaluated).
    Localization pools every complete window, so a detection miss counts
    against localization recall too.
    """
    det_pred = []
    det_truth = []
    loc_pred = []
    loc_truth = []
    for series in houses:
        for window in segment_windows(series, ens.window_length):
            assign_weak_label(window, kind)
            result, status = localize_window(ens, window)
            det_pred.append(int(result.detected))
            det_truth.append(window.weak_label)
            loc_pred.append(status.status)
            loc_truth.append(window.truth)
    detection = detection_metrics(np.array(det_pred), np.array(det_truth))
    localization = localization_metrics(loc_pred, loc_truth)
    return detection, localization, len(det_pred)


def run_benchmark(
    ens: CamalEnsemble,
    test_houses,
    kind,
    dataset_id,
    store: BenchmarkStore = None,
    method_id: str = "camal",
    train_house_ids=(),
):
    """Score an ensemble on held-out houses and persist one record per task.

    Training and test houses must be disjoint; any overlap is a hard
    failure rather than a warning, because leakage silently inflates
    every metric downstream.
    """
    test_ids = {s.house_id for s in test_houses}
    overlap = test_ids & set(train_house_ids)
    if overlap:
        raise HouseOverlap(f"houses in both train and test: {sorted(overlap)}")
    detection, localization, n_windows = evaluate_houses(ens, test_houses, kind)
    records = [
        BenchmarkRecord(
            dataset_id=dataset_id,
            appliance=kind.name,
            method_id=method_id,
            task="detection",
            metrics=_numeric(detection),
            labels_used=max(1, ens.labels_used),
            windows_evaluated=n_windows,
        ),
        BenchmarkRecord(
            dataset_id=dataset_id,
            appliance=kind.name,
            method_id=method_id,
            task="localization",
            metrics=_numeric(localization),
            labels_used=max(1, ens.labels_used),
            windows_evaluated=n_windows,
        ),
    ]
    if store is not None:
        for record in records:
            store.append(record)
    return records


def _numeric(metrics):
    """Keep the float-valued entries; counts and flags live elsewhere."""
    keep = ("accuracy", "balanced_accuracy", "precision", "recall", "f1", "mean_iou")
    return {k: float(metrics[k]) for k in keep if k in metrics}
