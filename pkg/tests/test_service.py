"""HTTP API contract: navigation, prediction determinism, benchmark parity."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from camal.appliances import get_kind
from camal.benchmark import BenchmarkStore, run_benchmark
from camal.config import AppConfig
from camal.manifest import write_dataset
from camal.nn.train import TrainConfig
from camal.pipeline import save_bundle, train_ensemble
from camal.series import PowerSeries
from camal.server import create_app
from camal.windows import assign_weak_label, segment_windows

WLEN = 30
KIND = get_kind("kettle")


def make_house(house_id, n_windows=6, seed=0, gap_window=None):
    """Quantized aggregate + kettle channel; kettle runs in even windows."""
    t = n_windows * WLEN
    rng = np.random.default_rng(seed)
    channel = np.zeros(t)
    for w in range(0, n_windows, 2):
        start = w * WLEN + 8
        channel[start : start + 4] = 2100.0
    aggregate = np.round(channel + rng.uniform(40.0, 60.0, size=t), 3)
    if gap_window is not None:
        aggregate[gap_window * WLEN + 5 : gap_window * WLEN + 9] = np.nan
    return PowerSeries(
        house_id=house_id,
        sample_period=60,
        timestamps=np.arange(t, dtype=np.int64) * 60,
        aggregate=aggregate,
        appliances={"kettle": np.round(channel, 3)},
    )


@pytest.fixture(scope="module")
def service(tmp_path_factory):
    """Dataset on disk, trained kettle bundle, persisted benchmark rows."""
    root = tmp_path_factory.mktemp("service")
    config = AppConfig(
        data_root=str(root / "data"),
        bundle_root=str(root / "models"),
        store_root=str(root / "bench"),
        window_lengths=(WLEN, 2 * WLEN),
    )

    houses = [make_house(f"h{i}", seed=i) for i in range(3)]
    houses.append(make_house("h3", seed=3, gap_window=1))
    write_dataset(houses, config.dataset_dir("synth"), "synth", test_houses=2)

    train_windows = []
    for series in houses[:2]:
        for w in segment_windows(series, WLEN):
            assign_weak_label(w, KIND)
            train_windows.append(w)
    values = np.stack([w.values for w in train_windows])
    labels = np.array([w.weak_label for w in train_windows])
    ens = train_ensemble(
        values, labels, KIND,
        TrainConfig(epochs=20, learning_rate=1e-2, seed=0),
        kernel_sizes=(5, 7),
    )
    save_bundle(ens, config.bundle_dir("synth", "kettle"))

    store = BenchmarkStore(config.store_root)
    run_benchmark(
        ens, houses[2:3], KIND, dataset_id="synth", store=store,
        train_house_ids=("h0", "h1"),
    )

    app = create_app(config)
    return TestClient(app), config, store


class TestDatasets:
    def test_lists_dataset(self, service):
        client, _, _ = service
        body = client.get("/api/datasets").json()
        assert body == {
            "datasets": [{"dataset_id": "synth", "sample_period": 60, "houses": 4}]
        }

    def test_houses_carry_roles_and_lengths(self, service):
        client, _, _ = service
        body = client.get("/api/datasets/synth/houses").json()
        assert body["dataset_id"] == "synth"
        roles = {h["house_id"]: h["role"] for h in body["houses"]}
        assert roles == {"h0": "train", "h1": "train", "h2": "test", "h3": "test"}
        for h in body["houses"]:
            assert h["total_length"] == 6 * WLEN
            assert h["appliances"] == ["kettle"]

    def test_unknown_dataset_404(self, service):
        client, _, _ = service
        resp = client.get("/api/datasets/nope/houses")
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "unknown_dataset"


class TestWindow:
    def test_payload_matches_stored_series(self, service):
        client, _, _ = service
        series = make_house("h0", seed=0)
        body = client.get(
            "/api/window",
            params={"dataset": "synth", "house": "h0", "offset": 0, "length": WLEN},
        ).json()
        assert body["timestamps"] == series.timestamps[:WLEN].tolist()
        # values are quantized to 3 decimals at generation, so equality is exact
        assert body["aggregate"] == series.aggregate[:WLEN].tolist()
        assert body["appliances"]["kettle"] == series.appliances["kettle"][:WLEN].tolist()
        assert body["total_length"] == 6 * WLEN
        assert body["sample_period"] == 60

    def test_missing_readings_serialize_as_null(self, service):
        client, _, _ = service
        body = client.get(
            "/api/window",
            params={"dataset": "synth", "house": "h3", "offset": WLEN, "length": WLEN},
        ).json()
        assert body["aggregate"][5:9] == [None] * 4
        assert all(v is not None for v in body["aggregate"][9:])

    def test_navigation_walks_forward_and_back(self, service):
        client, _, _ = service

        def fetch(offset):
            return client.get(
                "/api/window",
                params={"dataset": "synth", "house": "h0", "offset": offset, "length": WLEN},
            ).json()

        forward = [fetch(0)]
        assert forward[0]["has_prev"] is False
        while forward[-1]["has_next"]:
            forward.append(fetch(forward[-1]["offset"] + WLEN))
        assert len(forward) == 6
        assert forward[-1]["has_next"] is False

        # stepping back re-fetches exactly the windows just seen
        backward = [forward[-1]]
        while backward[-1]["has_prev"]:
            backward.append(fetch(backward[-1]["offset"] - WLEN))
        assert backward == forward[::-1]

    def test_bad_length_416(self, service):
        client, _, _ = service
        resp = client.get(
            "/api/window",
            params={"dataset": "synth", "house": "h0", "offset": 0, "length": 7},
        )
        assert resp.status_code == 416
        assert resp.json()["error"]["code"] == "bad_length"

    def test_offset_out_of_range_416(self, service):
        client, _, _ = service
        for offset in (-WLEN, 6 * WLEN - WLEN + 1):
            resp = client.get(
                "/api/window",
                params={"dataset": "synth", "house": "h0", "offset": offset, "length": WLEN},
            )
            assert resp.status_code == 416
            assert resp.json()["error"]["code"] == "offset_out_of_range"

    def test_unknown_house_404(self, service):
        client, _, _ = service
        resp = client.get(
            "/api/window",
            params={"dataset": "synth", "house": "h99", "offset": 0, "length": WLEN},
        )
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "unknown_house"


class TestPredict:
    def request(self, offset=0, length=WLEN, appliances=("kettle",), house="h2"):
        return {
            "dataset": "synth",
            "house": house,
            "offset": offset,
            "length": length,
            "appliances": list(appliances),
        }

    def test_shape_and_value_domains(self, service):
        client, _, _ = service
        body = client.post("/api/predict", json=self.request()).json()
        pred = body["predictions"]["kettle"]
        assert isinstance(pred["detected"], bool)
        assert 0.0 <= pred["prob_ensemble"] <= 1.0
        assert len(pred["per_model_probs"]) == 2
        assert len(pred["y_hat"]) == WLEN
        assert set(pred["y_hat"]) <= {0, 1}
        assert len(pred["cam_avg"]) == WLEN
        assert len(pred["scores"]) == WLEN
        np.testing.assert_allclose(
            pred["prob_ensemble"], np.mean(pred["per_model_probs"]), atol=1e-6
        )

    def test_deterministic_across_calls(self, service):
        client, _, _ = service
        a = client.post("/api/predict", json=self.request(offset=2 * WLEN)).json()
        b = client.post("/api/predict", json=self.request(offset=2 * WLEN)).json()
        assert a == b

    def test_detects_the_active_window(self, service):
        client, _, _ = service
        # even windows carry a real kettle event, odd ones only background
        on = client.post("/api/predict", json=self.request(offset=0)).json()
        off = client.post("/api/predict", json=self.request(offset=WLEN)).json()
        assert on["predictions"]["kettle"]["detected"] is True
        assert off["predictions"]["kettle"]["detected"] is False
        assert set(off["predictions"]["kettle"]["y_hat"]) == {0}

    def test_empty_appliance_list_gives_empty_predictions(self, service):
        client, _, _ = service
        body = client.post("/api/predict", json=self.request(appliances=())).json()
        assert body["predictions"] == {}

    def test_unknown_appliance_404(self, service):
        client, _, _ = service
        resp = client.post("/api/predict", json=self.request(appliances=("toaster",)))
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "unknown_appliance"

    def test_untrained_appliance_404(self, service):
        client, _, _ = service
        resp = client.post("/api/predict", json=self.request(appliances=("microwave",)))
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "no_bundle"

    def test_window_length_mismatch_409(self, service):
        client, _, _ = service
        resp = client.post("/api/predict", json=self.request(length=2 * WLEN))
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "length_mismatch"

    def test_missing_readings_409(self, service):
        client, _, _ = service
        resp = client.post("/api/predict", json=self.request(offset=WLEN, house="h3"))
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "missing_readings"


class TestBenchmark:
    def test_rows_equal_store_contents(self, service):
        client, _, store = service
        body = client.get("/api/benchmark", params={"dataset": "synth"}).json()
        assert body["dataset_id"] == "synth"
        assert body["rows"] == store.rows("synth")
        assert len(body["rows"]) == 2

    def test_task_filter(self, service):
        client, _, store = service
        body = client.get(
            "/api/benchmark", params={"dataset": "synth", "task": "detection"}
        ).json()
        assert [r["task"] for r in body["rows"]] == ["detection"]
        assert body["rows"] == store.rows("synth", task="detection")

    def test_metric_narrowing(self, service):
        client, _, _ = service
        body = client.get(
            "/api/benchmark", params={"dataset": "synth", "metric": "f1"}
        ).json()
        for row in body["rows"]:
            assert list(row["metrics"]) == ["f1"]

    def test_unknown_task_404(self, service):
        client, _, _ = service
        resp = client.get("/api/benchmark", params={"dataset": "synth", "task": "forecast"})
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "unknown_task"

    def test_unknown_dataset_404(self, service):
        client, _, _ = service
        resp = client.get("/api/benchmark", params={"dataset": "nope"})
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "unknown_dataset"

    def test_new_rows_visible_without_reload(self, service):
        client, _, store = service
        before = len(client.get("/api/benchmark", params={"dataset": "synth"}).json()["rows"])
        from camal.benchmark import BenchmarkRecord

        store.append(
            BenchmarkRecord(
                dataset_id="synth", appliance="kettle", method_id="other",
                task="detection", metrics={"f1": 0.42}, labels_used=5,
                windows_evaluated=5,
            )
        )
        after = client.get("/api/benchmark", params={"dataset": "synth"}).json()["rows"]
        assert len(after) == before + 1
        assert after[0]["method_id"] == "other"  # newest first


class TestSignatures:
    def test_all_kinds_present(self, service):
        client, _, _ = service
        sigs = client.get("/api/signatures").json()["signatures"]
        assert set(sigs) == {"kettle", "microwave", "dishwasher", "washing_machine", "shower"}
        for values in sigs.values():
            assert len(values) >= 1
            assert all(isinstance(v, (int, float)) for v in values)

    def test_signatures_stable_across_calls(self, service):
        client, _, _ = service
        a = client.get("/api/signatures").json()
        b = client.get("/api/signatures").json()
        assert a == b


class TestReload:
    def test_picks_up_new_dataset(self, service):
        client, config, _ = service
        extra = [make_house("g0", seed=9), make_house("g1", seed=10)]
        write_dataset(extra, config.dataset_dir("extra"), "extra", test_houses=1)

        ids = {d["dataset_id"] for d in client.get("/api/datasets").json()["datasets"]}
        assert "extra" not in ids

        body = client.post("/api/reload").json()
        assert body["datasets"] == 2
        assert body["bundles"] == 1

        ids = {d["dataset_id"] for d in client.get("/api/datasets").json()["datasets"]}
        assert ids == {"synth", "extra"}


class TestStaticBundle:
    def test_serves_ui_when_configured(self, tmp_path):
        static = tmp_path / "dist"
        static.mkdir()
        (static / "index.html").write_text("<h1>devicescope</h1>")
        (static / "main.js").write_text("export {};")
        config = AppConfig(
            data_root=str(tmp_path / "data"),
            bundle_root=str(tmp_path / "models"),
            store_root=str(tmp_path / "bench"),
            static_root=str(static),
        )
        client = TestClient(create_app(config))
        page = client.get("/")
        assert page.status_code == 200
        assert "devicescope" in page.text
        assert client.get("/main.js").status_code == 200
        # API routes keep precedence over the catch-all mount
        assert client.get("/api/datasets").json() == {"datasets": []}

    def test_no_mount_without_static_root(self, tmp_path):
        config = AppConfig(
            data_root=str(tmp_path / "data"),
            bundle_root=str(tmp_path / "models"),
            store_root=str(tmp_path / "bench"),
        )
        client = TestClient(create_app(config))
        assert client.get("/").status_code == 404
        assert client.get("/api/datasets").status_code == 200
