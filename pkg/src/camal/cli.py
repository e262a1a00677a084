"""Command-line lifecycle: ingest, synth, train, eval, predict, serve."""

from __future__ import annotations

import json
import os

import click
import numpy as np

from camal.appliances import REGISTRY, get_kind
from camal.benchmark import BenchmarkStore, run_benchmark
from camal.config import load_config
from camal.errors import CamalError
from camal.manifest import read_manifest, write_dataset
from camal.nn.train import TrainConfig
from camal.pipeline import load_bundle, localize_window, save_bundle, train_ensemble
from camal.report import plot_label_efficiency, plot_metric_bars, plot_window_overlay, write_metrics_csv
from camal.series import load_csv, resample
from camal.synth import SynthConfig, synth_generate
from camal.windows import assign_weak_label, segment_windows

DEFAULT_RATES = {
    "kettle": 3.0,
    "microwave": 2.0,
    "dishwasher": 1.2,
    "washing_machine": 0.8,
    "shower": 1.5,
}


@click.group()
def main():
    """Weakly supervised appliance detection and localization toolkit."""


def _fail(exc):
    raise click.ClickException(str(exc))


@main.command()
@click.argument("csv_files", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path(), help="Dataset directory to create.")
@click.option("--dataset-id", required=True)
@click.option("--sample-period", default=60, show_default=True, help="Target seconds per reading.")
@click.option("--test-houses", default=2, show_default=True)
def ingest(csv_files, out, dataset_id, sample_period, test_houses):
    """Convert exported CSV files into a dataset directory with a manifest."""
    try:
        houses = []
        for path in csv_files:
            series = load_csv(path)
            if series.sample_period != sample_period:
                series = resample(series, sample_period)
            houses.append(series)
        manifest = write_dataset(houses, out, dataset_id, test_houses=test_houses)
        click.echo(f"wrote {len(houses)} houses and manifest to {out}")
        return manifest
    except CamalError as exc:
        _fail(exc)


@main.command()
@click.option("--houses", default=8, show_default=True)
@click.option("--days", default=30, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.option("--dataset-id", default="synth", show_default=True)
@click.option("--appliances", default="kettle,dishwasher", show_default=True,
              help="Comma-separated appliance kinds to inject.")
@click.option("--test-houses", default=2, show_default=True)
def synth(houses, days, seed, out, dataset_id, appliances, test_houses):
    """Generate synthetic houses with known per-appliance ground truth."""
    try:
        names = [n.strip() for n in appliances.split(",") if n.strip()]
        rates = {}
        for name in names:
            get_kind(name)
            rates[name] = DEFAULT_RATES[name]
        config = SynthConfig(houses=houses, days=days, appliance_rates=rates)
        series_list = synth_generate(config, seed=seed)
        write_dataset(series_list, out, dataset_id, test_houses=test_houses)
        click.echo(f"wrote {len(series_list)} houses ({days} days each) to {out}")
    except (CamalError, KeyError) as exc:
        _fail(exc)


def _load_role_houses(manifest_path, role):
    manifest = read_manifest(manifest_path)
    base = os.path.dirname(os.path.abspath(manifest_path))
    return manifest, [manifest.load_house(h, base) for h in manifest.house_ids(role)]


@main.command()
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--appliance", required=True)
@click.option("--out", required=True, type=click.Path(), help="Bundle directory to create.")
@click.option("--window-length", default=360, show_default=True)
@click.option("--epochs", default=30, show_default=True)
@click.option("--learning-rate", default=1e-3, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--select-members", is_flag=True,
              help="Greedy forward selection of members by validation F1.")
def train(manifest_path, appliance, out, window_length, epochs, learning_rate, seed,
          select_members):
    """Train the per-kernel-size ensemble on weak window labels."""
    try:
        kind = get_kind(appliance)
        _, houses = _load_role_houses(manifest_path, "train")
        values = []
        labels = []
        for series in houses:
            for window in segment_windows(series, window_length):
                labels.append(assign_weak_label(window, kind))
                values.append(window.values)
        config = TrainConfig(epochs=epochs, learning_rate=learning_rate, seed=seed)
        ens = train_ensemble(np.array(values), np.array(labels), kind, config,
                             select_members=select_members)
        path = save_bundle(ens, out)
        click.echo(
            f"trained {len(ens.models)} members (k={list(ens.kernel_sizes)}) "
            f"on {ens.labels_used} weak labels; bundle at {path}"
        )
    except CamalError as exc:
        _fail(exc)


@main.command()
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--appliance", required=True)
@click.option("--bundle", "bundle_dir", required=True, type=click.Path(exists=True))
@click.option("--store", "store_root", default="benchmarks", show_default=True)
@click.option("--report-dir", default=None, type=click.Path(),
              help="Where to write metrics.csv and figures (default: <store>/report_<dataset>).")
def eval(manifest_path, appliance, bundle_dir, store_root, report_dir):
    """Score a bundle on the manifest's test houses; write records, CSV, figures."""
    try:
        kind = get_kind(appliance)
        manifest, test_houses = _load_role_houses(manifest_path, "test")
        ens = load_bundle(bundle_dir)
        store = BenchmarkStore(store_root)
        records = run_benchmark(
            ens, test_houses, kind, manifest.dataset_id, store=store,
            train_house_ids=manifest.house_ids("train"),
        )
        report_dir = report_dir or os.path.join(store_root, f"report_{manifest.dataset_id}")
        csv_path = write_metrics_csv(records, os.path.join(report_dir, "metrics.csv"))
        plot_metric_bars(records, os.path.join(report_dir, f"metrics_{kind.name}.png"))
        rows = store.rows(manifest.dataset_id, task="localization")
        plot_label_efficiency(rows, os.path.join(report_dir, "label_efficiency.png"))
        overlay = _first_active_overlay(ens, test_houses, kind, report_dir)
        for record in records:
            line = ", ".join(f"{k}={v:.4f}" for k, v in sorted(record.metrics.items()))
            click.echo(f"{record.task}: {line}")
        click.echo(f"report written to {report_dir}" + (f" (overlay: {overlay})" if overlay else ""))
    except CamalError as exc:
        _fail(exc)


def _first_active_overlay(ens, houses, kind, report_dir):
    for series in houses:
        for window in segment_windows(series, ens.window_length):
            if assign_weak_label(window, kind):
                _, status = localize_window(ens, window)
                path = os.path.join(report_dir, f"window_{kind.name}.png")
                return plot_window_overlay(window, status, path, kind_name=kind.name)
    return None


@main.command()
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--bundle", "bundle_dir", required=True, type=click.Path(exists=True))
@click.option("--house", required=True)
@click.option("--offset", default=0, show_default=True)
@click.option("--out", default=None, type=click.Path(), help="Write JSON here instead of stdout.")
def predict(manifest_path, bundle_dir, house, offset, out):
    """Run detection and localization on one window of one house."""
    try:
        manifest = read_manifest(manifest_path)
        base = os.path.dirname(os.path.abspath(manifest_path))
        series = manifest.load_house(house, base)
        ens = load_bundle(bundle_dir)
        values = series.aggregate[offset:offset + ens.window_length]
        if len(values) < ens.window_length:
            _fail(f"offset {offset} leaves fewer than {ens.window_length} readings")
        if np.isnan(values).any():
            _fail(f"window at offset {offset} contains missing readings")
        result, status = localize_window(ens, values)
        payload = {
            "house_id": house,
            "offset": offset,
            "appliance": ens.kind.name,
            "prob_ensemble": round(result.prob_ensemble, 6),
            "per_model_probs": [round(float(p), 6) for p in result.per_model_probs],
            "detected": result.detected,
            "y_hat": status.status.tolist(),
        }
        text = json.dumps(payload, indent=2)
        if out:
            with open(out, "w") as fh:
                fh.write(text + "\n")
            click.echo(f"wrote {out}")
        else:
            click.echo(text)
    except CamalError as exc:
        _fail(exc)


@main.command()
@click.option("--config", "config_path", default=None, type=click.Path(exists=True))
@click.option("--port", default=None, type=int, help="Override the configured port.")
@click.option("--static", "static_root", default=None, type=click.Path(exists=True),
              help="Directory with the built web UI, served at /.")
def serve(config_path, port, static_root):
    """Serve the HTTP JSON API over the configured data and bundle roots."""
    try:
        import uvicorn

        from camal.server import create_app

        config = load_config(config_path)
        if port is not None:
            config.port = port
        if static_root is not None:
            config.static_root = static_root
        app = create_app(config)
        uvicorn.run(app, host="127.0.0.1", port=config.port, log_level="warning")
    except CamalError as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
