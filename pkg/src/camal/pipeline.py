"""Weakly supervised appliance localization on top of the ensemble classifier.

Detection decides whether the appliance ran at all inside a window
(ensemble mean probability, strict threshold). Localization turns the
classifiers' class activation maps into a per-timestep ON/OFF status:
each member's map is min-max normalized, the maps are averaged, the
average gates the standardized input through a sigmoid, and the result
is binarized. Windows that fail detection short-circuit to an all-zero
status so downstream consumers never special-case absence.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass

import numpy as np

from camal.appliances import ApplianceKind, get_kind
from camal.errors import InvalidConfig, LengthMismatch
from camal.nn import functional as F
from camal.nn.checkpoint import load_checkpoint, save_checkpoint
from camal.nn.resnet import ResNetModel, build_resnet
from camal.nn.train import TrainConfig, train
from camal.windows import Window

DEFAULT_KERNEL_SIZES = (5, 7, 9, 15)
BUNDLE_SCHEMA = 1


def _window_values(x):
    values = x.values if isinstance(x, Window) else x
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1:
        raise LengthMismatch(f"expected a 1-D window, got shape {values.shape}")
    return values


@dataclass(frozen=True)
class DetectionResult:
    prob_ensemble: float
    per_model_probs: np.ndarray
    detected: bool


@dataclass(frozen=True)
class StatusSeries:
    scores: np.ndarray
    status: np.ndarray
    cam_avg: np.ndarray

    def __post_init__(self):
        if not (len(self.scores) == len(self.status) == len(self.cam_avg)):
            raise LengthMismatch("scores, status, and cam_avg must share length")


@dataclass
class CamalEnsemble:
    """Immutable bundle of per-kernel-size classifiers for one appliance."""

    models: list
    kind: ApplianceKind
    window_length: int
    detection_threshold: float = 0.5
    input_transform: str = "zscore"
    status_threshold: float = 0.5
    labels_used: int = 0
    training_fingerprint: str = ""
    member_seeds: tuple = ()

    def __post_init__(self):
        if not self.models:
            raise InvalidConfig("ensemble needs at least one model")
        if self.input_transform not in ("zscore", "raw"):
            raise InvalidConfig(f"unknown input transform {self.input_transform!r}")
        if not 0.0 < self.detection_threshold < 1.0:
            raise InvalidConfig("detection threshold must lie in (0, 1)")

    @property
    def kernel_sizes(self):
        return tuple(m.kernel_size for m in self.models)


def ensemble_predict(ens: CamalEnsemble, x) -> DetectionResult:
    """Mean class-1 probability across members, strict-threshold detection."""
    values = _window_values(x)
    if values.size != ens.window_length:
        raise LengthMismatch(
            f"window length {values.size} but ensemble trained on {ens.window_length}"
        )
    z = F.standardize(values)[None, None, :]
    probs = np.array([m.predict_proba(z)[0][0, 1] for m in ens.models])
    prob_ens = float(probs.mean())
    return DetectionResult(
        prob_ensemble=prob_ens,
        per_model_probs=probs,
        detected=detect_probability(prob_ens, ens.detection_threshold),
    )


def detect_probability(prob: float, threshold: float = 0.5) -> bool:
    """Strict comparison: a probability exactly at the threshold is negative."""
    if not 0.0 < threshold < 1.0:
        raise InvalidConfig(f"threshold must lie in (0, 1), got {threshold}")
    return bool(prob > threshold)


def detect(result: DetectionResult, threshold: float = 0.5) -> bool:
    return detect_probability(result.prob_ensemble, threshold)


def cam_extract(model: ResNetModel, x, class_index: int) -> np.ndarray:
    """Class activation map: head-weighted sum of final feature maps.

    The head bias is excluded; the map length equals the window length
    because every conv uses same padding.
    """
    if class_index not in (0, 1):
        raise InvalidConfig(f"class index must be 0 or 1, got {class_index}")
    values = _window_values(x)
    z = F.standardize(values)[None, None, :]
    _, feature_maps = model.forward(z, training=False)
    cam = np.tensordot(model.head_w[class_index], feature_maps[0], axes=([0], [0]))
    if cam.shape[0] != values.size:
        raise LengthMismatch(f"CAM length {cam.shape[0]} != window length {values.size}")
    return cam


def cam_normalize(cam) -> np.ndarray:
    """Min-max scale to [0,1]; a constant map carries no evidence -> zeros."""
    cam = np.asarray(cam, dtype=np.float64)
    lo = cam.min()
    hi = cam.max()
    if hi == lo:
        return np.zeros_like(cam)
    return (cam - lo) / (hi - lo)


def cam_average(cams) -> np.ndarray:
    """Pointwise mean of already-normalized maps."""
    cams = [np.asarray(c, dtype=np.float64) for c in cams]
    lengths = {c.shape[0] for c in cams}
    if len(lengths) != 1:
        raise LengthMismatch(f"maps of unequal lengths {sorted(lengths)}")
    return np.mean(np.stack(cams), axis=0)


def attention_scores(cam_avg, x, transform: str = "zscore") -> np.ndarray:
    """sigmoid(cam_avg * transformed input), elementwise.

    zscore centers and scales the window so below-average consumption
    lands below 0.5 after the sigmoid; a constant window falls back to
    plain centering, which is identically zero. raw passes watts through
    unchanged.
    """
    cam_avg = np.asarray(cam_avg, dtype=np.float64)
    values = _window_values(x)
    if cam_avg.shape[0] != values.shape[0]:
        raise LengthMismatch(
            f"cam length {cam_avg.shape[0]} != window length {values.shape[0]}"
        )
    if transform == "zscore":
        transformed = F.standardize(values)
    elif transform == "raw":
        transformed = values
    else:
        raise InvalidConfig(f"unknown input transform {transform!r}")
    return F.sigmoid(cam_avg * transformed)


def binarize_status(scores, threshold: float = 0.5) -> np.ndarray:
    """Strict comparison, so a score exactly at the threshold stays OFF."""
    scores = np.asarray(scores, dtype=np.float64)
    return (scores > threshold).astype(np.int64)


def localize_window(ens: CamalEnsemble, x):
    """Detection plus per-timestep status for one window.

    Not-detected windows return an all-zero StatusSeries; detected ones
    run the full map-normalize-average-attention-binarize chain. Pure:
    identical inputs give bit-identical outputs. Each member is evaluated
    once; its probability and activation map come from the same forward
    pass, which matches composing ensemble_predict with cam_extract.
    """
    values = _window_values(x)
    if values.size != ens.window_length:
        raise LengthMismatch(
            f"window length {values.size} but ensemble trained on {ens.window_length}"
        )
    z = F.standardize(values)[None, None, :]
    probs = np.empty(len(ens.models))
    cams = []
    for i, model in enumerate(ens.models):
        member_probs, feature_maps = model.predict_proba(z)
        probs[i] = member_probs[0, 1]
        cams.append(np.tensordot(model.head_w[1], feature_maps[0], axes=([0], [0])))
    prob_ens = float(probs.mean())
    result = DetectionResult(
        prob_ensemble=prob_ens,
        per_model_probs=probs,
        detected=detect_probability(prob_ens, ens.detection_threshold),
    )
    if not result.detected:
        zeros = np.zeros(values.size)
        return result, StatusSeries(
            scores=zeros, status=zeros.astype(np.int64), cam_avg=zeros.copy()
        )
    cam_avg = cam_average([cam_normalize(c) for c in cams])
    scores = attention_scores(cam_avg, values, ens.input_transform)
    status = binarize_status(scores, ens.status_threshold)
    return result, StatusSeries(scores=scores, status=status, cam_avg=cam_avg)


def _fingerprint(values, labels):
    digest = hashlib.sha256()
    digest.update(np.ascontiguousarray(values).tobytes())
    digest.update(np.ascontiguousarray(labels).tobytes())
    return digest.hexdigest()[:16]


def _weak_f1(ens, values, labels):
    preds = np.array([ensemble_predict(ens, v).detected for v in values], dtype=np.int64)
    tp = int(np.sum((preds == 1) & (labels == 1)))
    fp = int(np.sum((preds == 1) & (labels == 0)))
    fn = int(np.sum((preds == 0) & (labels == 1)))
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0


def train_ensemble(
    values,
    labels,
    kind: ApplianceKind,
    config: TrainConfig = None,
    kernel_sizes=DEFAULT_KERNEL_SIZES,
    select_members: bool = False,
    validation_fraction: float = 0.2,
) -> CamalEnsemble:
    """Fit one classifier per kernel size on weak window labels.

    With select_members, a greedy forward pass keeps the subset (size
    up to 5) with the best validation F1 on held-out windows; ties keep
    the smaller ensemble.
    """
    if config is None:
        config = TrainConfig()
    values = np.asarray(values, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(config.seed).spawn(len(kernel_sizes))]

    train_values, train_labels = values, labels
    val_values = val_labels = None
    if select_members:
        rng = np.random.Generator(np.random.PCG64(config.seed))
        order = rng.permutation(len(labels))
        n_val = max(1, int(len(labels) * validation_fraction))
        val_idx, train_idx = order[:n_val], order[n_val:]
        train_values, train_labels = values[train_idx], labels[train_idx]
        val_values, val_labels = values[val_idx], labels[val_idx]

    models = []
    for k, member_seed in zip(kernel_sizes, seeds):
        model = build_resnet(kernel_size=k, seed=member_seed)
        member_config = TrainConfig(
            epochs=config.epochs,
            learning_rate=config.learning_rate,
            batch_size=config.batch_size,
            beta1=config.beta1,
            beta2=config.beta2,
            adam_eps=config.adam_eps,
            class_balance=config.class_balance,
            seed=member_seed,
        )
        train(model, train_values, train_labels, member_config)
        models.append(model)

    window_length = values.shape[1]
    if select_members:
        chosen = []
        remaining = list(models)
        best_f1 = -1.0
        while remaining and len(chosen) < 5:
            scored = []
            for cand in remaining:
                trial = CamalEnsemble(
                    models=chosen + [cand], kind=kind, window_length=window_length
                )
                scored.append((_weak_f1(trial, val_values, val_labels), cand))
            f1, cand = max(scored, key=lambda t: t[0])
            if f1 <= best_f1:
                break
            best_f1 = f1
            chosen.append(cand)
            remaining.remove(cand)
        models = chosen

    return CamalEnsemble(
        models=models,
        kind=kind,
        window_length=window_length,
        labels_used=len(labels),
        training_fingerprint=_fingerprint(values, labels),
        member_seeds=tuple(seeds),
    )


def save_bundle(ens: CamalEnsemble, out_dir):
    """Write member checkpoints plus a manifest tying the bundle together."""
    os.makedirs(out_dir, exist_ok=True)
    members = []
    for model in ens.models:
        name = f"member_k{model.kernel_size}.npz"
        save_checkpoint(model, os.path.join(out_dir, name))
        members.append(name)
    manifest = {
        "schema_version": BUNDLE_SCHEMA,
        "appliance": ens.kind.name,
        "window_length": ens.window_length,
        "detection_threshold": ens.detection_threshold,
        "input_transform": ens.input_transform,
        "status_threshold": ens.status_threshold,
        "labels_used": ens.labels_used,
        "training_fingerprint": ens.training_fingerprint,
        "member_seeds": list(ens.member_seeds),
        "members": members,
    }
    path = os.path.join(out_dir, "bundle.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2)
    return path


def load_bundle(bundle_dir) -> CamalEnsemble:
    with open(os.path.join(bundle_dir, "bundle.json")) as fh:
        manifest = json.load(fh)
    if manifest.get("schema_version") != BUNDLE_SCHEMA:
        raise InvalidConfig(
            f"bundle schema {manifest.get('schema_version')!r}, expected {BUNDLE_SCHEMA}"
        )
    models = []
    for name in manifest["members"]:
        model, _ = load_checkpoint(os.path.join(bundle_dir, name))
        models.append(model)
    return CamalEnsemble(
        models=models,
        kind=get_kind(manifest["appliance"]),
        window_length=manifest["window_length"],
        detection_threshold=manifest["detection_threshold"],
        input_transform=manifest["input_transform"],
        status_threshold=manifest["status_threshold"],
        labels_used=manifest["labels_used"],
        training_fingerprint=manifest["training_fingerprint"],
        member_seeds=tuple(manifest["member_seeds"]),
    )
