"""Mini-batch training for the residual classifier.

Weak labels are one bit per window, so the loss is a two-class cross
entropy over the head logits. Class imbalance is handled with
inverse-frequency sample weights rather than resampling, which keeps the
pass deterministic for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from camal.errors import InvalidConfig, NonFiniteLoss, SingleClassTrainingSet
from camal.nn import functional as F


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 30
    learning_rate: float = 1e-3
    batch_size: int = 32
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    class_balance: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise InvalidConfig(f"epochs must be >= 1, got {self.epochs}")
        if self.learning_rate <= 0:
            raise InvalidConfig(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.batch_size < 1:
            raise InvalidConfig(f"batch_size must be >= 1, got {self.batch_size}")
        for name in ("beta1", "beta2"):
            value = getattr(self, name)
            if not 0.0 <= value < 1.0:
                raise InvalidConfig(f"{name} must be in [0, 1), got {value}")


@dataclass
class TrainResult:
    loss_history: list = field(default_factory=list)
    epochs_run: int = 0


class Adam:
    """Adam optimizer over a model's named parameter dict."""

    def __init__(self, config: TrainConfig):
        self.config = config
        self.m = {}
        self.v = {}
        self.t = 0

    def step(self, model):
        self.t += 1
        cfg = self.config
        params = model.parameters()
        grads = model.gradients()
        bc1 = 1.0 - cfg.beta1 ** self.t
        bc2 = 1.0 - cfg.beta2 ** self.t
        for name, grad in grads.items():
            if name not in self.m:
                self.m[name] = np.zeros_like(grad)
                self.v[name] = np.zeros_like(grad)
            self.m[name] = cfg.beta1 * self.m[name] + (1.0 - cfg.beta1) * grad
            self.v[name] = cfg.beta2 * self.v[name] + (1.0 - cfg.beta2) * grad * grad
            m_hat = self.m[name] / bc1
            v_hat = self.v[name] / bc2
            update = params[name] - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.adam_eps)
            model.set_parameter(name, update)


def class_weights(labels):
    """Inverse-frequency weight per sample, normalized to mean 1."""
    labels = np.asarray(labels, dtype=np.int64)
    counts = np.bincount(labels, minlength=2).astype(np.float64)
    per_class = labels.size / (2.0 * counts)
    weights = per_class[labels]
    return weights * (labels.size / weights.sum())

def backward_gradients(model, x, labels, sample_weights=None):
    """One combined forward/backward pass through the whole model.

    x: standardized windows (B, C, T). Returns (loss, gradients) where
    gradients is the model's name -> array dict, freshly filled.
    """
    logits, _ = model.forward(x, training=True)
    loss, d_logits = F.cross_entropy(logits, labels, sample_weights)
    if not np.isfinite(loss):
        # bail out before NaN poisons the gradient buffers
        raise NonFiniteLoss(f"loss became {loss}")
    model.backward(d_logits)
    return loss, model.gradients()


def train(model, values, labels, config: TrainConfig):
    """Fit the model on raw window values (B, T) with one bit per window.

    Each window is z-scored independently before entering the network, the
    same transform the inference path applies. Shuffling is driven by the
    config seed, so identical inputs and config reproduce identical weights.
    """
    values = np.asarray(values, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if values.ndim != 2:
        raise InvalidConfig(f"expected (windows, timesteps) values, got shape {values.shape}")
    if values.shape[0] != labels.shape[0]:
        raise InvalidConfig(
            f"{values.shape[0]} windows but {labels.shape[0]} labels"
        )
    present = np.unique(labels)
    if present.size < 2:
        raise SingleClassTrainingSet(
            f"training set has only label {present.tolist()}; need both classes"
        )

    x = np.stack([F.standardize(row) for row in values])[:, None, :]
    weights = class_weights(labels) if config.class_balance else np.ones(labels.size)

    rng = np.random.Generator(np.random.PCG64(config.seed))
    optimizer = Adam(config)
    result = TrainResult()
    n = labels.size
    for _ in range(config.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start:start + config.batch_size]
            loss, _ = backward_gradients(model, x[idx], labels[idx], weights[idx])
            if not np.isfinite(loss):
                raise NonFiniteLoss(f"loss became {loss} at step {optimizer.t}")
            optimizer.step(model)
            epoch_loss += loss * idx.size
        result.loss_history.append(epoch_loss / n)
        result.epochs_run += 1
    model.trained = True
    return result
