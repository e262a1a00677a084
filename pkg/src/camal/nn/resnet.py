"""1D convolutional residual classifier with exposed internals.

The network is a stack of residual blocks (conv-BN-ReLU x3 plus a
shortcut), global average pooling, and a two-logit linear head. The last
block's post-activation feature maps are returned by every forward pass,
since the localization stage consumes them together with the head weights.
"""

from __future__ import annotations

import numpy as np

from camal.errors import ShapeMismatch
from camal.nn import functional as F

DEFAULT_FILTERS = (32, 64, 64)
CONVS_PER_BLOCK = 3


class Conv1d:
    """Same-padding convolution layer with uniform fan-in init.

    Every conv here feeds a batch-norm layer, so it carries no bias: a
    per-channel constant is cancelled exactly by the mean subtraction,
    leaving a parameter with an identically zero gradient.
    """

    def __init__(self, c_in, c_out, kernel_size, rng):
        bound = 1.0 / np.sqrt(c_in * kernel_size)
        self.w = rng.uniform(-bound, bound, size=(c_out, c_in, kernel_size))
        self._x = None
        self.dw = None

    def forward(self, x, training):
        if training:
            self._x = x
        return F.conv1d(x, self.w)

    def backward(self, d_out):
        d_x, self.dw, _ = F.conv1d_backward(d_out, self._x, self.w)
        self._x = None
        return d_x

    def params(self):
        return {"w": self.w}

    def grads(self):
        return {"w": self.dw}


class BatchNorm1d:
    """Channel-wise batch normalization with running inference statistics."""

    def __init__(self, channels, momentum=0.9, eps=1e-5):
        self.gamma = np.ones(channels)
        self.beta = np.zeros(channels)
        self.running_mean = np.zeros(channels)
        self.running_var = np.ones(channels)
        self.momentum = momentum
        self.eps = eps
        self._cache = None
        self.dgamma = None
        self.dbeta = None

    def forward(self, x, training):
        y, cache, self.running_mean, self.running_var = F.batchnorm_forward(
            x, self.gamma, self.beta, self.running_mean, self.running_var,
            training, self.momentum, self.eps,
        )
        if training:
            self._cache = cache
        return y

    def backward(self, d_out):
        d_x, self.dgamma, self.dbeta = F.batchnorm_backward(d_out, self._cache)
        self._cache = None
        return d_x

    def params(self):
        return {"gamma": self.gamma, "beta": self.beta}

    def grads(self):
        return {"gamma": self.dgamma, "beta": self.dbeta}

    def state(self):
        return {"running_mean": self.running_mean, "running_var": self.running_var}


class ResidualBlock:
    """conv-BN-ReLU x3 with an additive shortcut (1x1 projection if needed)."""

    def __init__(self, c_in, c_out, kernel_size, rng):
        self.convs = [
            Conv1d(c_in if i == 0 else c_out, c_out, kernel_size, rng)
            for i in range(CONVS_PER_BLOCK)
        ]
        self.bns = [BatchNorm1d(c_out) for _ in range(CONVS_PER_BLOCK)]
        if c_in != c_out:
            self.proj_conv = Conv1d(c_in, c_out, 1, rng)
            self.proj_bn = BatchNorm1d(c_out)
        else:
            self.proj_conv = None
            self.proj_bn = None
        self._pre_relu = [None] * (CONVS_PER_BLOCK - 1)
        self._pre_out = None

    def forward(self, x, training):
        h = x
        for i in range(CONVS_PER_BLOCK - 1):
            h = self.bns[i].forward(self.convs[i].forward(h, training), training)
            if training:
                self._pre_relu[i] = h
            h = F.relu(h)
        h = self.bns[-1].forward(self.convs[-1].forward(h, training), training)
        if self.proj_conv is not None:
            shortcut = self.proj_bn.forward(self.proj_conv.forward(x, training), training)
        else:
            shortcut = x
        pre = h + shortcut
        if training:
            self._pre_out = pre
        return F.relu(pre)

    def backward(self, d_out):
        d_pre = F.relu_backward(d_out, self._pre_out)
        self._pre_out = None
        if self.proj_conv is not None:
            d_shortcut = self.proj_conv.backward(self.proj_bn.backward(d_pre))
        else:
            d_shortcut = d_pre
        d_h = self.convs[-1].backward(self.bns[-1].backward(d_pre))
        for i in reversed(range(CONVS_PER_BLOCK - 1)):
            d_h = F.relu_backward(d_h, self._pre_relu[i])
            self._pre_relu[i] = None
            d_h = self.convs[i].backward(self.bns[i].backward(d_h))
        return d_h + d_shortcut

    def _units(self):
        units = []
        for i, (conv, bn) in enumerate(zip(self.convs, self.bns)):
            units.append((f"conv{i}", conv))
            units.append((f"bn{i}", bn))
        if self.proj_conv is not None:
            units.append(("proj_conv", self.proj_conv))
            units.append(("proj_bn", self.proj_bn))
        return units


class ResNetModel:
    """Residual classifier for one appliance kind and one kernel size."""

    def __init__(self, kernel_size, filters=DEFAULT_FILTERS, in_channels=1, seed=0):
        if kernel_size % 2 == 0 or kernel_size < 1:
            raise ShapeMismatch(f"kernel size must be odd positive, got {kernel_size}")
        self.kernel_size = kernel_size
        self.filters = tuple(filters)
        self.in_channels = in_channels
        self.seed = seed
        rng = np.random.Generator(np.random.PCG64(seed))
        self.blocks = []
        c_in = in_channels
        for c_out in self.filters:
            self.blocks.append(ResidualBlock(c_in, c_out, kernel_size, rng))
            c_in = c_out
        k_feats = self.filters[-1]
        bound = 1.0 / np.sqrt(k_feats)
        self.head_w = rng.uniform(-bound, bound, size=(2, k_feats))
        self.head_b = rng.uniform(-bound, bound, size=2)
        self.trained = False
        self._feats = None

    @property
    def feature_count(self):
        return self.filters[-1]

    def forward(self, x, training=False):
        """Logits and the last block's post-activation feature maps.

        x: (B, in_channels, T) or (in_channels, T), already standardized.
        """
        xb, squeeze = F._as_batch(x)
        if xb.shape[1] != self.in_channels:
            raise ShapeMismatch(f"expected {self.in_channels} input channels, got {xb.shape[1]}")
        h = xb
        for block in self.blocks:
            h = block.forward(h, training)
        feature_maps = h
        if training:
            self._feats = feature_maps
        pooled = feature_maps.mean(axis=2)
        logits = pooled @ self.head_w.T + self.head_b
        if squeeze:
            return logits[0], feature_maps[0]
        return logits, feature_maps

    def predict_proba(self, x):
        """Class probabilities and feature maps (inference mode)."""
        logits, feature_maps = self.forward(x, training=False)
        return F.softmax(logits), feature_maps

    def backward(self, d_logits):
        """Backpropagate from logit gradients; fills every layer's grads."""
        feats = self._feats
        self._feats = None
        pooled = feats.mean(axis=2)
        self.d_head_w = d_logits.T @ pooled
        self.d_head_b = d_logits.sum(axis=0)
        d_pooled = d_logits @ self.head_w
        d_feats = F.gap_backward(d_pooled, feats.shape[2])
        for block in reversed(self.blocks):
            d_feats = block.backward(d_feats)
        return d_feats

    def parameters(self):
        """Stable name -> live array mapping for every trainable parameter."""
        out = {}
        for b, block in enumerate(self.blocks):
            for unit_name, unit in block._units():
                for pname, arr in unit.params().items():
                    out[f"block{b}.{unit_name}.{pname}"] = arr
        out["head.w"] = self.head_w
        out["head.b"] = self.head_b
        return out

    def gradients(self):
        out = {}
        for b, block in enumerate(self.blocks):
            for unit_name, unit in block._units():
                for pname, arr in unit.grads().items():
                    out[f"block{b}.{unit_name}.{pname}"] = arr
        out["head.w"] = self.d_head_w
        out["head.b"] = self.d_head_b
        return out

    def set_parameter(self, name, value):
        """Overwrite one parameter in place (used by the optimizer and tests)."""
        arr = self.parameters()[name]
        if name == "head.w":
            self.head_w = np.asarray(value, dtype=np.float64).reshape(arr.shape)
        elif name == "head.b":
            self.head_b = np.asarray(value, dtype=np.float64).reshape(arr.shape)
        else:
            arr[...] = value

    def bn_state(self):
        out = {}
        for b, block in enumerate(self.blocks):
            for unit_name, unit in block._units():
                if isinstance(unit, BatchNorm1d):
                    for sname, arr in unit.state().items():
                        out[f"block{b}.{unit_name}.{sname}"] = arr
        return out

    def set_bn_state(self, state):
        for b, block in enumerate(self.blocks):
            for unit_name, unit in block._units():
                if isinstance(unit, BatchNorm1d):
                    unit.running_mean = np.asarray(state[f"block{b}.{unit_name}.running_mean"], dtype=np.float64)
                    unit.running_var = np.asarray(state[f"block{b}.{unit_name}.running_var"], dtype=np.float64)


def build_resnet(kernel_size, seed=0, filters=DEFAULT_FILTERS):
    return ResNetModel(kernel_size=kernel_size, filters=filters, seed=seed)
