"""Weakly supervised appliance detection and localization from smart-meter data.

The library turns a household's aggregate power signal plus one
presence bit per window into per-timestep appliance status: an ensemble
of small convolutional residual classifiers detects the appliance, and
their class activation maps localize it inside detected windows.
"""

from camal.appliances import (
    DISHWASHER,
    KETTLE,
    MICROWAVE,
    REGISTRY,
    SHOWER,
    WASHING_MACHINE,
    ApplianceKind,
    get_kind,
)
from camal.benchmark import BenchmarkRecord, BenchmarkStore, evaluate_houses, run_benchmark
from camal.config import AppConfig, load_config
from camal.manifest import DatasetManifest, HouseEntry, read_manifest, write_dataset, write_manifest
from camal.metrics import (
    ConfusionCounts,
    confusion_counts,
    detection_metrics,
    label_accounting,
    localization_metrics,
    run_iou,
)
from camal.nn.resnet import ResNetModel, build_resnet
from camal.nn.train import TrainConfig, backward_gradients, train
from camal.pipeline import (
    CamalEnsemble,
    DetectionResult,
    StatusSeries,
    attention_scores,
    binarize_status,
    cam_average,
    cam_extract,
    cam_normalize,
    detect,
    ensemble_predict,
    load_bundle,
    localize_window,
    save_bundle,
    train_ensemble,
)
from camal.series import PowerSeries, load_csv, resample, save_csv
from camal.synth import SynthConfig, make_signature, synth_generate
from camal.windows import (
    WINDOW_LENGTHS,
    Window,
    active_runs,
    assign_weak_label,
    filter_short_runs,
    pointwise_truth,
    segment_windows,
)

__version__ = "0.1.0"

__all__ = [
    "ApplianceKind", "KETTLE", "MICROWAVE", "DISHWASHER", "WASHING_MACHINE",
    "SHOWER", "REGISTRY", "get_kind",
    "PowerSeries", "load_csv", "save_csv", "resample",
    "Window", "WINDOW_LENGTHS", "segment_windows", "assign_weak_label",
    "pointwise_truth", "filter_short_runs", "active_runs",
    "SynthConfig", "synth_generate", "make_signature",
    "DatasetManifest", "HouseEntry", "read_manifest", "write_manifest", "write_dataset",
    "ResNetModel", "build_resnet", "TrainConfig", "train", "backward_gradients",
    "CamalEnsemble", "DetectionResult", "StatusSeries",
    "ensemble_predict", "detect", "cam_extract", "cam_normalize", "cam_average",
    "attention_scores", "binarize_status", "localize_window", "train_ensemble",
    "save_bundle", "load_bundle",
    "ConfusionCounts", "confusion_counts", "detection_metrics",
    "localization_metrics", "label_accounting", "run_iou",
    "BenchmarkRecord", "BenchmarkStore", "run_benchmark", "evaluate_houses",
    "AppConfig", "load_config",
    "__version__",
]
