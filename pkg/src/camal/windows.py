"""Window segmentation and labelling.

Windows carry the raw watt signal; gaps disqualify a window entirely.
The weak label is a single bit per window and is the only supervision
the trainer is allowed to see.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from camal.errors import InvalidConfig, LengthMismatch, NoGroundTruthAvailable

WINDOW_LENGTHS = (360, 720, 1440)


@dataclass
class Window:
    """One gap-free subsequence of a house's aggregate signal."""

    house_id: str
    start_index: int
    values: np.ndarray
    weak_label: int | None = None
    truth: np.ndarray | None = None
    appliance_channels: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1:
            raise InvalidConfig(f"window values must be 1-D, got shape {self.values.shape}")
        if np.isnan(self.values).any():
            raise InvalidConfig("window contains missing readings")
        if self.truth is not None:
            self.truth = np.asarray(self.truth, dtype=np.int8)
            if self.truth.shape != self.values.shape:
                raise LengthMismatch(f"truth {self.truth.shape} vs values {self.values.shape}")

    def __len__(self):
        return len(self.values)


def segment_windows(series, length, stride=None):
    """Cut a series into complete, gap-free windows of `length` timesteps.

    Default stride = length (non-overlapping). Windows containing any missing
    reading are omitted; a series shorter than `length` yields no windows.
    Appliance channels are carried along when present and themselves gap-free.
    """
    if length <= 0:
        raise InvalidConfig(f"window length must be > 0, got {length}")
    stride = length if stride is None else stride
    if stride <= 0:
        raise InvalidConfig(f"stride must be > 0, got {stride}")

    windows = []
    n = len(series)
    for start in range(0, n - length + 1, stride):
        values = series.aggregate[start : start + length]
        if np.isnan(values).any():
            continue
        channels = {}
        complete = True
        for name, ch in series.appliances.items():
            chunk = ch[start : start + length]
            if np.isnan(chunk).any():
                complete = False
                break
            channels[name] = chunk.copy()
        if not complete:
            continue
        windows.append(Window(house_id=series.house_id, start_index=start,
                              values=values.copy(), appliance_channels=channels))
    return windows


def filter_short_runs(status, min_length):
    """Zero out 1-runs shorter than `min_length` timesteps."""
    status = np.asarray(status, dtype=np.int8)
    if min_length <= 1:
        return status.copy()
    out = status.copy()
    padded = np.concatenate(([0], status, [0]))
    edges = np.flatnonzero(np.diff(padded))
    starts, stops = edges[::2], edges[1::2]
    for a, b in zip(starts, stops):
        if b - a < min_length:
            out[a:b] = 0
    return out


def active_runs(status):
    """(start, stop) index pairs of the 1-runs in a binary series."""
    padded = np.concatenate(([0], np.asarray(status, dtype=np.int8), [0]))
    edges = np.flatnonzero(np.diff(padded))
    return list(zip(edges[::2], edges[1::2]))


def pointwise_truth(window, appliance_channel, kind):
    """Per-timestep status from an appliance channel.

    ON where power exceeds the kind's on_power_threshold; runs shorter than
    min_on_duration are treated as standby blips and zeroed.
    """
    channel = np.asarray(appliance_channel, dtype=np.float64)
    if channel.shape != window.values.shape:
        raise LengthMismatch(f"channel {channel.shape} vs window {window.values.shape}")
    if np.isnan(channel).any():
        raise InvalidConfig("appliance channel contains missing readings")
    status = (channel > kind.on_power_threshold).astype(np.int8)
    return filter_short_runs(status, kind.min_on_duration)


def assign_weak_label(window, kind, channel_name=None):
    """One presence bit for the whole window.

    Uses window.truth when already set, else derives it from the appliance
    channel named `channel_name` (default: the kind's name).
    """
    if window.truth is not None:
        truth = window.truth
    else:
        name = kind.name if channel_name is None else channel_name
        if name not in window.appliance_channels:
            raise NoGroundTruthAvailable(
                f"window {window.house_id}@{window.start_index} has no channel {name!r}"
            )
        truth = pointwise_truth(window, window.appliance_channels[name], kind)
        window.truth = truth
    label = int(truth.max()) if len(truth) else 0
    window.weak_label = label
    return label
