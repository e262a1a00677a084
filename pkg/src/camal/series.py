"""Power series ingestion: regular-grid representation, CSV I/O, resampling.

A PowerSeries always lives on a regular time grid: timestamps are epoch
seconds spaced exactly ``sample_period`` apart, and missing readings are
explicit NaN slots. Loading fills grid gaps with NaN rather than dropping
or interpolating them, so a wrong imputation can never poison weak labels.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from camal.errors import (
    DuplicateTimestamp,
    InvalidConfig,
    LengthMismatch,
    MalformedRow,
    NonMonotonicTimestamps,
    UpsamplingRequested,
)

CSV_TIMESTAMP = "timestamp"
CSV_AGGREGATE = "aggregate"


@dataclass(frozen=True)
class PowerSeries:
    """Aggregate (and optional per-appliance) power readings for one house.

    timestamps: int64 epoch seconds, strictly increasing, uniform spacing.
    aggregate: watts, NaN where the reading is missing.
    appliances: appliance name -> watts array of the same length.
    """

    house_id: str
    sample_period: int
    timestamps: np.ndarray
    aggregate: np.ndarray
    appliances: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        if self.sample_period <= 0:
            raise InvalidConfig(f"sample_period must be positive, got {self.sample_period}")
        ts = np.asarray(self.timestamps, dtype=np.int64)
        agg = np.asarray(self.aggregate, dtype=np.float64)
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "aggregate", agg)
        ts.setflags(write=False)
        agg.setflags(write=False)
        if ts.shape != agg.shape or ts.ndim != 1:
            raise LengthMismatch(f"timestamps {ts.shape} vs aggregate {agg.shape}")
        if len(ts) > 1:
            diffs = np.diff(ts)
            if np.any(diffs == 0):
                raise DuplicateTimestamp(f"house {self.house_id}: repeated timestamp")
            if np.any(diffs < 0):
                raise NonMonotonicTimestamps(f"house {self.house_id}: timestamps not strictly increasing")
            if np.any(diffs != self.sample_period):
                raise InvalidConfig(
                    f"house {self.house_id}: grid spacing must equal sample_period={self.sample_period}"
                )
        cleaned = {}
        for name, values in self.appliances.items():
            arr = np.asarray(values, dtype=np.float64)
            if arr.shape != agg.shape:
                raise LengthMismatch(f"appliance {name!r}: {arr.shape} vs aggregate {agg.shape}")
            arr.setflags(write=False)
            cleaned[name] = arr
        object.__setattr__(self, "appliances", cleaned)

    def __len__(self):
        return len(self.timestamps)

    @property
    def appliance_names(self):
        return sorted(self.appliances)

    def slice(self, start, length):
        """Grid-aligned sub-series of `length` timesteps starting at index `start`."""
        if start < 0 or start + length > len(self):
            raise InvalidConfig(f"slice [{start}, {start + length}) out of range for length {len(self)}")
        return PowerSeries(
            house_id=self.house_id,
            sample_period=self.sample_period,
            timestamps=self.timestamps[start : start + length].copy(),
            aggregate=self.aggregate[start : start + length].copy(),
            appliances={k: v[start : start + length].copy() for k, v in self.appliances.items()},
        )


def _parse_timestamp(token, line_number):
    """Epoch seconds (int/float) or RFC3339 text -> int epoch seconds."""
    token = token.strip()
    if not token:
        raise MalformedRow(line_number, "empty timestamp")
    try:
        value = float(token)
    except ValueError:
        try:
            dt = datetime.fromisoformat(token.replace("Z", "+00:00"))
        except ValueError:
            raise MalformedRow(line_number, f"unparseable timestamp {token!r}") from None
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        return int(dt.timestamp())
    if not math.isfinite(value):
        raise MalformedRow(line_number, f"non-finite timestamp {token!r}")
    if value != int(value):
        raise MalformedRow(line_number, f"timestamp {token!r} is not a whole number of seconds")
    return int(value)


def _parse_power(token, line_number, column):
    """Watts or empty-for-missing -> float (NaN for missing)."""
    token = token.strip()
    if not token:
        return math.nan
    try:
        value = float(token)
    except ValueError:
        raise MalformedRow(line_number, f"bad number {token!r} in column {column!r}") from None
    if math.isnan(value):
        return math.nan
    if not math.isfinite(value):
        raise MalformedRow(line_number, f"non-finite power {token!r} in column {column!r}")
    return value


def load_csv(path, house_id=None, timestamp_column=CSV_TIMESTAMP, aggregate_column=CSV_AGGREGATE,
             appliance_columns=None, sample_period=None):
    """Load the wide CSV format `timestamp,aggregate[,<appliance>...]`.

    Rows must be strictly increasing in time. Grid gaps become explicit NaN
    slots; the grid period is inferred (GCD of the observed spacings) unless
    `sample_period` is given. Appliance columns default to every remaining
    header column.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedRow(1, "empty file") from None
        header = [h.strip() for h in header]
        if timestamp_column not in header:
            raise MalformedRow(1, f"missing timestamp column {timestamp_column!r}")
        if aggregate_column not in header:
            raise MalformedRow(1, f"missing aggregate column {aggregate_column!r}")
        ts_idx = header.index(timestamp_column)
        agg_idx = header.index(aggregate_column)
        if appliance_columns is None:
            appliance_columns = [h for h in header if h not in (timestamp_column, aggregate_column)]
        app_idx = {}
        for name in appliance_columns:
            if name not in header:
                raise MalformedRow(1, f"missing appliance column {name!r}")
            app_idx[name] = header.index(name)

        timestamps, aggregate = [], []
        channels = {name: [] for name in appliance_columns}
        for line_number, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise MalformedRow(line_number, f"expected {len(header)} fields, got {len(row)}")
            ts = _parse_timestamp(row[ts_idx], line_number)
            if timestamps:
                if ts == timestamps[-1]:
                    raise DuplicateTimestamp(f"line {line_number}: timestamp {ts} repeated")
                if ts < timestamps[-1]:
                    raise NonMonotonicTimestamps(f"line {line_number}: timestamp {ts} goes backwards")
            timestamps.append(ts)
            aggregate.append(_parse_power(row[agg_idx], line_number, aggregate_column))
            for name, idx in app_idx.items():
                channels[name].append(_parse_power(row[idx], line_number, name))

    if not timestamps:
        raise MalformedRow(2, "no data rows")

    ts = np.asarray(timestamps, dtype=np.int64)
    if sample_period is None:
        if len(ts) > 1:
            sample_period = int(np.gcd.reduce(np.diff(ts)))
        else:
            sample_period = 60
    diffs = np.diff(ts)
    if np.any(diffs % sample_period != 0):
        raise InvalidConfig(f"timestamps do not align to a {sample_period}s grid")

    # Place observed rows onto the full regular grid; everything else is NaN.
    n = int((ts[-1] - ts[0]) // sample_period) + 1
    grid_ts = ts[0] + sample_period * np.arange(n, dtype=np.int64)
    slots = ((ts - ts[0]) // sample_period).astype(np.int64)
    agg = np.full(n, np.nan)
    agg[slots] = aggregate
    apps = {}
    for name, values in channels.items():
        ch = np.full(n, np.nan)
        ch[slots] = values
        apps[name] = ch

    if house_id is None:
        import os

        house_id = os.path.splitext(os.path.basename(path))[0]
    return PowerSeries(house_id=house_id, sample_period=sample_period,
                       timestamps=grid_ts, aggregate=agg, appliances=apps)


def save_csv(series, path):
    """Write the wide CSV format; missing readings become empty fields.

    Uses repr-precision floats so load_csv(save_csv(s)) round-trips exactly.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        names = series.appliance_names
        writer.writerow([CSV_TIMESTAMP, CSV_AGGREGATE] + names)
        for i in range(len(series)):
            row = [int(series.timestamps[i]), _fmt(series.aggregate[i])]
            row += [_fmt(series.appliances[name][i]) for name in names]
            writer.writerow(row)


def _fmt(value):
    return "" if math.isnan(value) else repr(float(value))


def resample(series, period):
    """Downsample to `period` seconds by averaging readings in each bucket.

    Buckets with no (non-missing) source reading stay missing. Upsampling is
    refused: gaps must never be interpolated.
    """
    period = int(period)
    if period < series.sample_period:
        raise UpsamplingRequested(f"period {period}s finer than grid {series.sample_period}s")
    if period == series.sample_period:
        return series
    if period % series.sample_period != 0:
        raise InvalidConfig(f"period {period}s must be a multiple of the grid {series.sample_period}s")

    t0 = int(series.timestamps[0])
    buckets = ((series.timestamps - t0) // period).astype(np.int64)
    n = int(buckets[-1]) + 1
    grid_ts = t0 + period * np.arange(n, dtype=np.int64)

    def bucket_mean(values):
        ok = ~np.isnan(values)
        sums = np.bincount(buckets[ok], weights=values[ok], minlength=n)
        counts = np.bincount(buckets[ok], minlength=n)
        out = np.full(n, np.nan)
        nonzero = counts > 0
        out[nonzero] = sums[nonzero] / counts[nonzero]
        return out

    return PowerSeries(
        house_id=series.house_id,
        sample_period=period,
        timestamps=grid_ts,
        aggregate=bucket_mean(series.aggregate),
        appliances={k: bucket_mean(v) for k, v in series.appliances.items()},
    )
