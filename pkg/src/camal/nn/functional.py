"""Array-level building blocks for the 1D residual classifier.

Everything is double precision and works on (B, C, T) batches; the
convolution and pooling entry points also accept a single (C, T) sample.
Convolutions are cross-correlations with "same" zero padding, implemented
as one BLAS contraction over strided patch views.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from camal.errors import ShapeMismatch


def _check_finite(name, arr):
    if not np.isfinite(arr).all():
        raise ShapeMismatch(f"{name} contains NaN/Inf")


def _as_batch(x):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 2:
        return x[None], True
    if x.ndim == 3:
        return x, False
    raise ShapeMismatch(f"expected (C, T) or (B, C, T), got shape {x.shape}")


def _patches(x, k):
    # (B, C, T) -> (B, C, T, k) strided view of the zero-padded input
    p = k // 2
    xp = np.pad(x, ((0, 0), (0, 0), (p, p)))
    return sliding_window_view(xp, k, axis=2)


def conv1d(x, weight, bias=None):
    """Same-padding cross-correlation: (B, C_in, T) -> (B, C_out, T)."""
    xb, squeeze = _as_batch(x)
    weight = np.asarray(weight, dtype=np.float64)
    if weight.ndim != 3:
        raise ShapeMismatch(f"kernels must be (C_out, C_in, k), got {weight.shape}")
    c_out, c_in, k = weight.shape
    if k % 2 == 0:
        raise ShapeMismatch(f"kernel size must be odd, got {k}")
    if xb.shape[1] != c_in:
        raise ShapeMismatch(f"input has {xb.shape[1]} channels, kernels expect {c_in}")
    _check_finite("conv input", xb)
    _check_finite("conv kernels", weight)

    out = np.tensordot(_patches(xb, k), weight, axes=([1, 3], [1, 2]))  # (B, T, C_out)
    out = np.ascontiguousarray(out.transpose(0, 2, 1))
    if bias is not None:
        bias = np.asarray(bias, dtype=np.float64)
        if bias.shape != (c_out,):
            raise ShapeMismatch(f"bias must be ({c_out},), got {bias.shape}")
        out += bias[None, :, None]
    return out[0] if squeeze else out


def conv1d_backward(d_out, x, weight):
    """Gradients of conv1d w.r.t. input, kernels, and bias."""
    k = weight.shape[2]
    patches = _patches(x, k)
    d_weight = np.tensordot(d_out, patches, axes=([0, 2], [0, 2]))  # (C_out, C_in, k)
    d_bias = d_out.sum(axis=(0, 2))
    # Input gradient is the same-padding correlation with flipped, transposed kernels.
    w_flip = np.ascontiguousarray(weight[:, :, ::-1].transpose(1, 0, 2))
    d_x = conv1d(d_out, w_flip)
    return d_x, d_weight, d_bias


def relu(x):
    return np.maximum(x, 0.0)


def relu_backward(d_out, x):
    return d_out * (x > 0.0)


def gap(x):
    """Global average pooling over time: (B, K, T) -> (B, K)."""
    xb, squeeze = _as_batch(x)
    if xb.shape[2] < 1:
        raise ShapeMismatch("gap needs at least one timestep")
    out = xb.mean(axis=2)
    return out[0] if squeeze else out


def gap_backward(d_out, t_len):
    return np.repeat(d_out[:, :, None], t_len, axis=2) / t_len


def batchnorm_forward(x, gamma, beta, running_mean, running_var, training, momentum=0.9, eps=1e-5):
    """Per-channel normalization over the batch and time axes.

    Returns (y, cache, new_running_mean, new_running_var); running stats are
    only advanced in training mode.
    """
    if training:
        mean = x.mean(axis=(0, 2))
        var = x.var(axis=(0, 2))
        new_mean = momentum * running_mean + (1.0 - momentum) * mean
        new_var = momentum * running_var + (1.0 - momentum) * var
    else:
        mean, var = running_mean, running_var
        new_mean, new_var = running_mean, running_var
    inv_std = 1.0 / np.sqrt(var + eps)
    x_hat = (x - mean[None, :, None]) * inv_std[None, :, None]
    y = gamma[None, :, None] * x_hat + beta[None, :, None]
    cache = (x_hat, inv_std, gamma, training)
    return y, cache, new_mean, new_var


def batchnorm_backward(d_out, cache):
    x_hat, inv_std, gamma, training = cache
    d_gamma = (d_out * x_hat).sum(axis=(0, 2))
    d_beta = d_out.sum(axis=(0, 2))
    d_xhat = d_out * gamma[None, :, None]
    if training:
        m = d_out.shape[0] * d_out.shape[2]
        d_x = (inv_std[None, :, None] / m) * (
            m * d_xhat
            - d_xhat.sum(axis=(0, 2))[None, :, None]
            - x_hat * (d_xhat * x_hat).sum(axis=(0, 2))[None, :, None]
        )
    else:
        d_x = d_xhat * inv_std[None, :, None]
    return d_x, d_gamma, d_beta


def softmax(logits):
    """Row-wise stable softmax."""
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def sigmoid(x):
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def cross_entropy(logits, labels, sample_weights=None):
    """Weighted mean cross-entropy and its logit gradient.

    Weights default to 1; the loss is normalized by the total weight so an
    unweighted batch reduces to the plain mean.
    """
    n = logits.shape[0]
    probs = softmax(logits)
    if sample_weights is None:
        sample_weights = np.ones(n)
    total = sample_weights.sum()
    log_probs = logits - logits.max(axis=1, keepdims=True)
    log_probs = log_probs - np.log(np.exp(log_probs).sum(axis=1, keepdims=True))
    loss = -(sample_weights * log_probs[np.arange(n), labels]).sum() / total
    d_logits = probs.copy()
    d_logits[np.arange(n), labels] -= 1.0
    d_logits *= (sample_weights / total)[:, None]
    return loss, d_logits


def standardize(values, eps=1e-12):
    """Per-window z-score; a (near-)constant window maps to all zeros."""
    values = np.asarray(values, dtype=np.float64)
    std = values.std()
    if std <= eps:
        return np.zeros_like(values)
    return (values - values.mean()) / std
