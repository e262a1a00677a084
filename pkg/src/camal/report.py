"""Figure and summary-table rendering for evaluation runs.

Every eval emits a CSV of the scored metrics next to PNG figures: a
window overlay (aggregate signal, predicted status, ground truth), a
metric bar chart, and a label-efficiency scatter built from the
benchmark store.
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def write_metrics_csv(records, path):
    """Flatten benchmark records into one rectangular CSV."""
    metric_names = sorted({name for r in records for name in r.metrics})
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["dataset_id", "appliance", "method_id", "task", "labels_used",
             "windows_evaluated"] + metric_names
        )
        for r in records:
            writer.writerow(
                [r.dataset_id, r.appliance, r.method_id, r.task, r.labels_used,
                 r.windows_evaluated]
                + [format(r.metrics.get(m, ""), ".6f") if m in r.metrics else ""
                   for m in metric_names]
            )
    return path


def plot_window_overlay(window, status, path, kind_name=""):
    """Aggregate watts with predicted status and ground truth bands."""
    t = np.arange(len(window.values))
    fig, (ax0, ax1) = plt.subplots(
        2, 1, figsize=(10, 5), sharex=True, height_ratios=[3, 1]
    )
    ax0.plot(t, window.values, lw=0.8, color="tab:blue")
    ax0.set_ylabel("aggregate (W)")
    title = f"house {window.house_id}, offset {window.start_index}"
    if kind_name:
        title += f", {kind_name}"
    ax0.set_title(title)
    ax1.step(t, status.status, where="post", color="tab:red", label="predicted")
    if window.truth is not None:
        ax1.step(t, window.truth * 0.95, where="post", color="tab:green",
                 alpha=0.7, label="truth")
    ax1.set_ylim(-0.05, 1.1)
    ax1.set_ylabel("status")
    ax1.set_xlabel("timestep")
    ax1.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def plot_metric_bars(records, path):
    """Grouped bars: one group per (appliance, task), one bar per metric."""
    fig, ax = plt.subplots(figsize=(10, 4))
    metric_names = sorted({name for r in records for name in r.metrics})
    groups = [f"{r.appliance}\n{r.task}" for r in records]
    width = 0.8 / max(1, len(metric_names))
    x = np.arange(len(records))
    for i, metric in enumerate(metric_names):
        vals = [r.metrics.get(metric, np.nan) for r in records]
        ax.bar(x + i * width, vals, width, label=metric)
    ax.set_xticks(x + 0.4 - width / 2)
    ax.set_xticklabels(groups, fontsize=8)
    ax.set_ylim(0, 1.05)
    ax.legend(fontsize=8, ncol=3)
    ax.set_ylabel("score")
    fig.tight_layout()
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def plot_label_efficiency(rows, path, metric="f1"):
    """Metric vs labels used, one series per method (log-x scatter)."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    methods = sorted({row["method_id"] for row in rows})
    for method in methods:
        pts = [
            (row["labels_used"], row["metrics"].get(metric))
            for row in rows
            if row["method_id"] == method and row["metrics"].get(metric) is not None
        ]
        if not pts:
            continue
        pts.sort()
        xs, ys = zip(*pts)
        ax.plot(xs, ys, "o-", label=method)
    ax.set_xscale("log")
    ax.set_xlabel("labels used for training")
    ax.set_ylabel(metric)
    ax.set_ylim(0, 1.05)
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path
