"""HTTP JSON API over datasets, trained bundles, and the benchmark store.

All handlers read from an immutable snapshot assembled at startup; the
reload endpoint builds a fresh snapshot and swaps it in one assignment,
so concurrent requests always see a consistent world. Watts are encoded
with at most 3 fractional digits, probabilities and scores with at most
6; missing readings serialize as null.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from camal.appliances import REGISTRY
from camal.benchmark import BenchmarkStore
from camal.config import AppConfig
from camal.manifest import read_manifest
from camal.pipeline import load_bundle, localize_window
from camal.synth import make_signature


class ApiError(Exception):
    def __init__(self, status, code, message):
        self.status = status
        self.code = code
        self.message = message
        super().__init__(message)


class PredictRequest(BaseModel):
    dataset: str
    house: str
    offset: int
    length: int
    appliances: list[str] = []


@dataclass
class Snapshot:
    """Everything a request may touch, loaded once and never mutated."""

    datasets: dict = field(default_factory=dict)   # dataset_id -> manifest
    series: dict = field(default_factory=dict)     # (dataset_id, house_id) -> PowerSeries
    bundles: dict = field(default_factory=dict)    # (dataset_id, appliance) -> ensemble
    store: BenchmarkStore = None
    signatures: dict = field(default_factory=dict)


def _watts(value):
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return None
    return round(float(value), 3)


def _prob(value):
    return round(float(value), 6)


def build_snapshot(config: AppConfig) -> Snapshot:
    snap = Snapshot(store=BenchmarkStore(config.store_root))
    if os.path.isdir(config.data_root):
        for dataset_id in sorted(os.listdir(config.data_root)):
            manifest_path = os.path.join(config.dataset_dir(dataset_id), "manifest.json")
            if not os.path.exists(manifest_path):
                continue
            manifest = read_manifest(manifest_path)
            snap.datasets[dataset_id] = manifest
            for entry in manifest.houses:
                series = manifest.load_house(entry.house_id, config.dataset_dir(dataset_id))
                snap.series[(dataset_id, entry.house_id)] = series
    if os.path.isdir(config.bundle_root):
        for dataset_id in sorted(os.listdir(config.bundle_root)):
            ds_dir = os.path.join(config.bundle_root, dataset_id)
            if not os.path.isdir(ds_dir):
                continue
            for appliance in sorted(os.listdir(ds_dir)):
                bundle_path = os.path.join(ds_dir, appliance, "bundle.json")
                if os.path.exists(bundle_path):
                    snap.bundles[(dataset_id, appliance)] = load_bundle(
                        os.path.join(ds_dir, appliance)
                    )
    rng = np.random.Generator(np.random.PCG64(7))
    for name in REGISTRY:
        snap.signatures[name] = [_watts(v) for v in make_signature(name, rng)]
    return snap


def create_app(config: AppConfig = None) -> FastAPI:
    config = config or AppConfig()
    app = FastAPI(title="camal", docs_url=None, redoc_url=None)
    app.state.config = config
    app.state.snapshot = build_snapshot(config)

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"code": exc.code, "message": exc.message}},
        )

    def snap() -> Snapshot:
        return app.state.snapshot

    def get_series(dataset, house):
        if dataset not in snap().datasets:
            raise ApiError(404, "unknown_dataset", f"no dataset {dataset!r}")
        series = snap().series.get((dataset, house))
        if series is None:
            raise ApiError(404, "unknown_house", f"no house {house!r} in dataset {dataset!r}")
        return series

    def check_range(series, offset, length):
        if length not in config.window_lengths:
            raise ApiError(
                416, "bad_length",
                f"length {length} not one of {list(config.window_lengths)}",
            )
        if offset < 0 or offset + length > len(series):
            raise ApiError(
                416, "offset_out_of_range",
                f"offset {offset} + length {length} exceeds series length {len(series)}",
            )

    @app.get("/api/datasets")
    def list_datasets():
        out = []
        for dataset_id, manifest in snap().datasets.items():
            out.append({
                "dataset_id": dataset_id,
                "sample_period": manifest.sample_period,
                "houses": len(manifest.houses),
            })
        return {"datasets": out}

    @app.get("/api/datasets/{dataset}/houses")
    def list_houses(dataset: str):
        if dataset not in snap().datasets:
            raise ApiError(404, "unknown_dataset", f"no dataset {dataset!r}")
        manifest = snap().datasets[dataset]
        houses = []
        for entry in manifest.houses:
            series = snap().series[(dataset, entry.house_id)]
            houses.append({
                "house_id": entry.house_id,
                "role": entry.role,
                "total_length": len(series),
                "appliances": list(series.appliances),
            })
        return {"dataset_id": dataset, "houses": houses}

    @app.get("/api/window")
    def get_window(dataset: str, house: str, offset: int, length: int):
        series = get_series(dataset, house)
        check_range(series, offset, length)
        sl = slice(offset, offset + length)
        return {
            "dataset_id": dataset,
            "house_id": house,
            "offset": offset,
            "length": length,
            "total_length": len(series),
            "sample_period": series.sample_period,
            "timestamps": series.timestamps[sl].tolist(),
            "aggregate": [_watts(v) for v in series.aggregate[sl]],
            "appliances": {
                name: [_watts(v) for v in channel[sl]]
                for name, channel in series.appliances.items()
            },
            "has_prev": offset - length >= 0,
            "has_next": offset + 2 * length <= len(series),
        }

    @app.post("/api/predict")
    def predict(req: PredictRequest):
        series = get_series(req.dataset, req.house)
        check_range(series, req.offset, req.length)
        predictions = {}
        for appliance in req.appliances:
            if appliance not in REGISTRY:
                raise ApiError(404, "unknown_appliance", f"no appliance kind {appliance!r}")
            ens = snap().bundles.get((req.dataset, appliance))
            if ens is None:
                raise ApiError(
                    404, "no_bundle",
                    f"no trained bundle for {appliance!r} on dataset {req.dataset!r}",
                )
            if ens.window_length != req.length:
                raise ApiError(
                    409, "length_mismatch",
                    f"bundle expects windows of {ens.window_length}, got {req.length}",
                )
            values = series.aggregate[req.offset:req.offset + req.length]
            if np.isnan(values).any():
                raise ApiError(
                    409, "missing_readings",
                    f"window at offset {req.offset} contains missing readings",
                )
            result, status = localize_window(ens, values)
            predictions[appliance] = {
                "prob_ensemble": _prob(result.prob_ensemble),
                "per_model_probs": [_prob(p) for p in result.per_model_probs],
                "detected": result.detected,
                "y_hat": status.status.tolist(),
                "cam_avg": [_prob(v) for v in status.cam_avg],
                "scores": [_prob(v) for v in status.scores],
            }
        return {
            "dataset_id": req.dataset,
            "house_id": req.house,
            "offset": req.offset,
            "length": req.length,
            "predictions": predictions,
        }

    @app.get("/api/benchmark")
    def get_benchmark(dataset: str, task: str = None, metric: str = None):
        if task is not None and task not in ("detection", "localization"):
            raise ApiError(404, "unknown_task", f"no task {task!r}")
        if dataset not in snap().datasets and dataset not in snap().store.datasets():
            raise ApiError(404, "unknown_dataset", f"no dataset {dataset!r}")
        rows = snap().store.rows(dataset, task=task, metric=metric)
        return {"dataset_id": dataset, "rows": rows}

    @app.get("/api/signatures")
    def get_signatures():
        return {"signatures": snap().signatures}

    @app.post("/api/reload")
    def reload():
        app.state.snapshot = build_snapshot(config)
        return {
            "datasets": len(app.state.snapshot.datasets),
            "bundles": len(app.state.snapshot.bundles),
        }

    # mounted last so /api/* routes keep precedence over the catch-all
    if config.static_root and os.path.isdir(config.static_root):
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.static_root, html=True), name="ui")

    return app
