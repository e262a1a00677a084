"""Dataset manifest: one JSON file per dataset listing houses, paths, roles."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from camal.errors import InvalidConfig
from camal.series import load_csv, save_csv

MANIFEST_SCHEMA_VERSION = 1
ROLES = ("train", "test")


@dataclass(frozen=True)
class HouseEntry:
    house_id: str
    path: str
    role: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise InvalidConfig(f"role must be one of {ROLES}, got {self.role!r}")


@dataclass(frozen=True)
class DatasetManifest:
    dataset_id: str
    sample_period: int
    houses: tuple[HouseEntry, ...]

    def house_ids(self, role=None):
        return [h.house_id for h in self.houses if role is None or h.role == role]

    def entry(self, house_id):
        for h in self.houses:
            if h.house_id == house_id:
                return h
        raise KeyError(house_id)

    def load_house(self, house_id, base_dir=None):
        entry = self.entry(house_id)
        path = entry.path
        if base_dir is not None and not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        return load_csv(path, house_id=house_id, sample_period=self.sample_period)


def write_manifest(manifest, path):
    payload = {
        "schema_version": MANIFEST_SCHEMA_VERSION,
        "dataset_id": manifest.dataset_id,
        "sample_period": manifest.sample_period,
        "houses": [
            {"house_id": h.house_id, "path": h.path, "role": h.role} for h in manifest.houses
        ],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_manifest(path):
    with open(path) as fh:
        payload = json.load(fh)
    version = payload.get("schema_version")
    if version != MANIFEST_SCHEMA_VERSION:
        raise InvalidConfig(f"manifest schema {version!r} unsupported (expected {MANIFEST_SCHEMA_VERSION})")
    houses = tuple(
        HouseEntry(h["house_id"], h["path"], h["role"]) for h in payload["houses"]
    )
    return DatasetManifest(payload["dataset_id"], int(payload["sample_period"]), houses)


def write_dataset(series_list, out_dir, dataset_id, test_houses=2):
    """Persist a list of PowerSeries as CSVs plus a manifest.

    The last `test_houses` houses are given the test role; all earlier ones
    train. Returns the manifest path.
    """
    if not 0 <= test_houses <= len(series_list):
        raise InvalidConfig(f"test_houses {test_houses} out of range for {len(series_list)} houses")
    os.makedirs(out_dir, exist_ok=True)
    entries = []
    cutoff = len(series_list) - test_houses
    for i, series in enumerate(series_list):
        filename = f"{series.house_id}.csv"
        save_csv(series, os.path.join(out_dir, filename))
        role = "train" if i < cutoff else "test"
        entries.append(HouseEntry(series.house_id, filename, role))
    manifest = DatasetManifest(dataset_id, series_list[0].sample_period, tuple(entries))
    manifest_path = os.path.join(out_dir, "manifest.json")
    write_manifest(manifest, manifest_path)
    return manifest_path
