"""Service configuration: where datasets, bundles, and stores live.

Loaded from a JSON file; CAMAL_DATA_ROOT and CAMAL_PORT environment
variables override the file so deployments can relocate data without
editing it.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from camal.errors import InvalidConfig
from camal.windows import WINDOW_LENGTHS


@dataclass
class AppConfig:
    data_root: str = "data"
    bundle_root: str = "models"
    store_root: str = "benchmarks"
    static_root: str = None
    port: int = 8000
    window_lengths: tuple = WINDOW_LENGTHS

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise InvalidConfig(f"port {self.port} out of range")
        self.window_lengths = tuple(int(v) for v in self.window_lengths)
        if any(v <= 0 for v in self.window_lengths):
            raise InvalidConfig("window lengths must be positive")

    def dataset_dir(self, dataset_id):
        return os.path.join(self.data_root, dataset_id)

    def bundle_dir(self, dataset_id, appliance):
        return os.path.join(self.bundle_root, dataset_id, appliance)


def load_config(path=None, env=None) -> AppConfig:
    """Build an AppConfig from an optional JSON file plus the environment."""
    env = os.environ if env is None else env
    raw = {}
    if path is not None:
        with open(path) as fh:
            raw = json.load(fh)
        unknown = set(raw) - {
            "data_root", "bundle_root", "store_root", "static_root", "port", "window_lengths",
        }
        if unknown:
            raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")
    if "CAMAL_DATA_ROOT" in env:
        raw["data_root"] = env["CAMAL_DATA_ROOT"]
    if "CAMAL_PORT" in env:
        try:
            raw["port"] = int(env["CAMAL_PORT"])
        except ValueError:
            raise InvalidConfig(f"CAMAL_PORT must be an integer, got {env['CAMAL_PORT']!r}")
    return AppConfig(**raw)
