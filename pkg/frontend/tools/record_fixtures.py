"""Record real API responses into tests/fixtures/.

Builds a small synthetic dataset, trains compact two-member ensembles for
kettle and dishwasher, benchmarks them, and saves the JSON the service
returns for every endpoint the UI consumes. The component tests assert
against these files, so the frontend is exercised with payloads that are
byte-identical to what the server produces.

Run from the repository root with the camal package installed:

    python3 frontend/tools/record_fixtures.py
"""

import json
import os
import tempfile

import numpy as np
from fastapi.testclient import TestClient

from camal.appliances import get_kind
from camal.benchmark import BenchmarkRecord, BenchmarkStore, run_benchmark
from camal.config import AppConfig
from camal.manifest import write_dataset
from camal.nn.train import TrainConfig
from camal.pipeline import save_bundle, train_ensemble
from camal.server import create_app
from camal.synth import SynthConfig, synth_generate
from camal.windows import assign_weak_label, segment_windows

OUT_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "tests", "fixtures")
DATASET = "synthui"
WLEN = 360
# 60 train windows -> 2 batches/epoch; 12 epochs settle the BN running stats
TRAIN = TrainConfig(epochs=12, learning_rate=1e-2, seed=1)


def weak_windows(houses, kind):
    values, labels = [], []
    for series in houses:
        for window in segment_windows(series, WLEN):
            labels.append(assign_weak_label(window, kind))
            values.append(window.values)
    return np.stack(values), np.array(labels)


def save(name, payload):
    path = os.path.join(OUT_DIR, name)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    print(f"wrote {os.path.relpath(path)}")


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    root = tempfile.mkdtemp(prefix="fixture-recorder-")
    config = AppConfig(
        data_root=os.path.join(root, "data"),
        bundle_root=os.path.join(root, "models"),
        store_root=os.path.join(root, "bench"),
        window_lengths=(360, 720, 1440),
    )

    synth = SynthConfig(houses=4, days=5, appliance_rates={"kettle": 3.0, "dishwasher": 1.2})
    houses = synth_generate(synth, seed=11)
    train_houses, test_houses = houses[:3], houses[3:]
    write_dataset(houses, config.dataset_dir(DATASET), DATASET, test_houses=1)

    store = BenchmarkStore(config.store_root)
    for name in ("kettle", "dishwasher"):
        kind = get_kind(name)
        values, labels = weak_windows(train_houses, kind)
        ens = train_ensemble(values, labels, kind, TRAIN, kernel_sizes=(5, 7))
        save_bundle(ens, config.bundle_dir(DATASET, name))
        run_benchmark(
            ens, test_houses, kind, DATASET, store=store,
            train_house_ids=[s.house_id for s in train_houses],
        )
        print(f"trained and benchmarked {name}")

    # a strongly supervised reference method, as an importer would add it:
    # same store schema, larger label budgets, so the efficiency chart gets
    # a second series with several points
    for labels_used, f1 in ((21600, 0.71), (64800, 0.86)):
        store.append(BenchmarkRecord(
            dataset_id=DATASET,
            appliance="kettle",
            method_id="strong_crf",
            task="localization",
            metrics={"f1": f1, "precision": f1 + 0.04, "recall": f1 - 0.04},
            labels_used=labels_used,
            windows_evaluated=20,
        ))

    client = TestClient(create_app(config))
    test_house = test_houses[0].house_id

    save("datasets.json", client.get("/api/datasets").json())
    save("houses.json", client.get(f"/api/datasets/{DATASET}/houses").json())

    for offset, name in (
        (0, "window_0.json"), (360, "window_360.json"), (720, "window_720.json"),
    ):
        payload = client.get("/api/window", params={
            "dataset": DATASET, "house": test_house, "offset": offset, "length": WLEN,
        })
        assert payload.status_code == 200, payload.text
        save(name, payload.json())

    # pick one window where the kettle fired and one where it did not, so
    # the tests cover both the active strips and the "not detected" path
    active, quiet = None, None
    total = len(test_houses[0].aggregate)
    for offset in range(0, total - WLEN + 1, WLEN):
        body = client.post("/api/predict", json={
            "dataset": DATASET, "house": test_house, "offset": offset,
            "length": WLEN, "appliances": ["kettle", "dishwasher"],
        })
        if body.status_code != 200:
            continue
        payload = body.json()
        detected = payload["predictions"]["kettle"]["detected"]
        if detected and active is None:
            active = payload
        if not detected and quiet is None:
            quiet = payload
        if active and quiet:
            break
    assert active is not None, "no window with a kettle detection"
    assert quiet is not None, "no quiet window"
    save("predict_active.json", active)
    save("predict_quiet.json", quiet)

    save("benchmark.json", client.get("/api/benchmark", params={"dataset": DATASET}).json())
    save("benchmark_loc_f1.json", client.get("/api/benchmark", params={
        "dataset": DATASET, "task": "localization", "metric": "f1",
    }).json())
    save("signatures.json", client.get("/api/signatures").json())

    error = client.get("/api/window", params={
        "dataset": DATASET, "house": test_house, "offset": 0, "length": 100,
    })
    assert error.status_code == 416
    save("error_bad_length.json", error.json())

    print("done")


if __name__ == "__main__":
    main()
