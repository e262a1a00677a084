"""Single-file model checkpoints: one npz with weights, BN state, and meta."""

from __future__ import annotations

import json
import os

import numpy as np

from camal.errors import CheckpointSchemaMismatch
from camal.nn.resnet import ResNetModel

CHECKPOINT_SCHEMA = 1


def save_checkpoint(model, path, extra_meta=None):
    """Write the model's parameters, BN statistics, and build meta to npz."""
    meta = {
        "schema_version": CHECKPOINT_SCHEMA,
        "kernel_size": model.kernel_size,
        "filters": list(model.filters),
        "in_channels": model.in_channels,
        "seed": model.seed,
        "trained": bool(model.trained),
    }
    if extra_meta:
        meta.update(extra_meta)
    arrays = {}
    for name, arr in model.parameters().items():
        arrays["param:" + name] = arr
    for name, arr in model.bn_state().items():
        arrays["state:" + name] = arr
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    np.savez(path, __meta__=np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8), **arrays)


def load_checkpoint(path):
    """Rebuild a model from npz; returns (model, meta)."""
    with np.load(path) as data:
        meta = json.loads(bytes(data["__meta__"]).decode())
        if meta.get("schema_version") != CHECKPOINT_SCHEMA:
            raise CheckpointSchemaMismatch(
                f"checkpoint schema {meta.get('schema_version')!r}, expected {CHECKPOINT_SCHEMA}"
            )
        model = ResNetModel(
            kernel_size=meta["kernel_size"],
            filters=tuple(meta["filters"]),
            in_channels=meta["in_channels"],
            seed=meta["seed"],
        )
        bn_state = {}
        for key in data.files:
            if key.startswith("param:"):
                model.set_parameter(key[len("param:"):], data[key])
            elif key.startswith("state:"):
                bn_state[key[len("state:"):]] = data[key]
        model.set_bn_state(bn_state)
        model.trained = meta["trained"]
    return model, meta
