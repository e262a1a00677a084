"""Dataset manifests: entries, roles, round-trip, house loading."""

import json

import numpy as np
import pytest

from camal.errors import InvalidConfig
from camal.manifest import (
    MANIFEST_SCHEMA_VERSION,
    DatasetManifest,
    HouseEntry,
    read_manifest,
    write_dataset,
    write_manifest,
)
from camal.series import PowerSeries


def make_series(house_id, t=20, seed=0):
    rng = np.random.default_rng(seed)
    return PowerSeries(
        house_id=house_id,
        sample_period=60,
        timestamps=np.arange(t, dtype=np.int64) * 60,
        aggregate=rng.uniform(40, 60, size=t),
        appliances={"kettle": np.zeros(t)},
    )


class TestHouseEntry:
    def test_valid_roles(self):
        for role in ("train", "test"):
            assert HouseEntry("h1", "h1.csv", role).role == role

    def test_unknown_role_rejected(self):
        with pytest.raises(InvalidConfig):
            HouseEntry("h1", "h1.csv", "validation")


class TestDatasetManifest:
    def manifest(self):
        return DatasetManifest(
            dataset_id="synth",
            sample_period=60,
            houses=(
                HouseEntry("h1", "h1.csv", "train"),
                HouseEntry("h2", "h2.csv", "train"),
                HouseEntry("h3", "h3.csv", "test"),
            ),
        )

    def test_house_ids_filter_by_role(self):
        m = self.manifest()
        assert m.house_ids() == ["h1", "h2", "h3"]
        assert m.house_ids("train") == ["h1", "h2"]
        assert m.house_ids("test") == ["h3"]

    def test_entry_lookup(self):
        m = self.manifest()
        assert m.entry("h2").path == "h2.csv"
        with pytest.raises(KeyError):
            m.entry("h9")


class TestRoundTrip:
    def test_write_then_read(self, tmp_path):
        m = DatasetManifest(
            dataset_id="d1",
            sample_period=60,
            houses=(HouseEntry("h1", "h1.csv", "train"),),
        )
        path = tmp_path / "manifest.json"
        write_manifest(m, path)
        back = read_manifest(path)
        assert back == m

    def test_schema_mismatch_rejected(self, tmp_path):
        path = tmp_path / "manifest.json"
        payload = {"schema_version": 0, "dataset_id": "d", "sample_period": 60, "houses": []}
        path.write_text(json.dumps(payload))
        with pytest.raises(InvalidConfig):
            read_manifest(path)

    def test_written_schema_is_current(self, tmp_path):
        m = DatasetManifest("d", 60, ())
        path = tmp_path / "manifest.json"
        write_manifest(m, path)
        assert json.loads(path.read_text())["schema_version"] == MANIFEST_SCHEMA_VERSION


class TestWriteDataset:
    def test_roles_split_last_houses_to_test(self, tmp_path):
        series = [make_series(f"h{i}", seed=i) for i in range(4)]
        manifest_path = write_dataset(series, tmp_path / "ds", "synth", test_houses=1)
        m = read_manifest(manifest_path)
        assert m.house_ids("train") == ["h0", "h1", "h2"]
        assert m.house_ids("test") == ["h3"]

    def test_loaded_house_matches_source(self, tmp_path):
        series = [make_series("h0"), make_series("h1", seed=1)]
        manifest_path = write_dataset(series, tmp_path / "ds", "synth", test_houses=1)
        m = read_manifest(manifest_path)
        loaded = m.load_house("h1", base_dir=str(tmp_path / "ds"))
        assert loaded.house_id == "h1"
        np.testing.assert_array_equal(loaded.timestamps, series[1].timestamps)
        np.testing.assert_allclose(loaded.aggregate, series[1].aggregate, atol=5e-4)
        assert set(loaded.appliances) == {"kettle"}

    def test_test_house_count_out_of_range(self, tmp_path):
        with pytest.raises(InvalidConfig):
            write_dataset([make_series("h0")], tmp_path / "ds", "synth", test_houses=2)
