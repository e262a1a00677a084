"""Oracle and property tests for the array-level network primitives."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from camal.errors import ShapeMismatch
from camal.nn import functional as F


def conv1d_naive(x, weight, bias=None):
    """Straight-loop same-padding cross-correlation used as the oracle."""
    b, c_in, t = x.shape
    c_out, _, k = weight.shape
    p = k // 2
    xp = np.pad(x, ((0, 0), (0, 0), (p, p)))
    out = np.zeros((b, c_out, t))
    for bi in range(b):
        for co in range(c_out):
            for ti in range(t):
                acc = 0.0
                for ci in range(c_in):
                    for kk in range(k):
                        acc += xp[bi, ci, ti + kk] * weight[co, ci, kk]
                out[bi, co, ti] = acc
    if bias is not None:
        out += bias[None, :, None]
    return out


class TestConv1d:
    def test_edge_detector_example(self):
        # [1,2,3] correlated with [1,0,-1], zero padded: [-2,-2,2]
        x = np.array([[1.0, 2.0, 3.0]])
        w = np.array([[[1.0, 0.0, -1.0]]])
        np.testing.assert_array_equal(F.conv1d(x, w), [[-2.0, -2.0, 2.0]])

    def test_identity_kernel(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=(1, 50))
        w = np.array([[[0.0, 1.0, 0.0]]])
        np.testing.assert_array_equal(F.conv1d(x, w), x)

    def test_matches_naive_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            b = int(rng.integers(1, 4))
            c_in = int(rng.integers(1, 5))
            c_out = int(rng.integers(1, 5))
            t = int(rng.integers(1, 20))
            k = int(rng.choice([1, 3, 5, 7]))
            x = rng.normal(size=(b, c_in, t))
            w = rng.normal(size=(c_out, c_in, k))
            bias = rng.normal(size=c_out)
            got = F.conv1d(x, w, bias)
            want = conv1d_naive(x, w, bias)
            assert np.abs(got - want).max() <= 1e-12

    def test_single_sample_squeeze(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=(2, 9))
        w = rng.normal(size=(3, 2, 5))
        out = F.conv1d(x, w)
        assert out.shape == (3, 9)
        np.testing.assert_array_equal(out, F.conv1d(x[None], w)[0])

    def test_even_kernel_rejected(self):
        with pytest.raises(ShapeMismatch):
            F.conv1d(np.zeros((1, 4)), np.zeros((1, 1, 4)))

    def test_channel_mismatch_rejected(self):
        with pytest.raises(ShapeMismatch):
            F.conv1d(np.zeros((2, 4)), np.zeros((1, 3, 3)))

    def test_nan_input_rejected(self):
        x = np.zeros((1, 4))
        x[0, 1] = np.nan
        with pytest.raises(ShapeMismatch):
            F.conv1d(x, np.zeros((1, 1, 3)))

    def test_bad_bias_shape_rejected(self):
        with pytest.raises(ShapeMismatch):
            F.conv1d(np.zeros((1, 4)), np.zeros((2, 1, 3)), bias=np.zeros(3))

    def test_backward_matches_finite_differences(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=(2, 2, 8))
        w = rng.normal(size=(3, 2, 5))
        d_out = rng.normal(size=(2, 3, 8))
        d_x, d_w, d_b = F.conv1d_backward(d_out, x, w)
        eps = 1e-6

        def loss(xv, wv, bv):
            return float((F.conv1d(xv, wv, bv) * d_out).sum())

        b0 = np.zeros(3)
        for arr, grad in ((x, d_x), (w, d_w), (b0, d_b)):
            it = np.nditer(arr, flags=["multi_index"])
            for _ in it:
                idx = it.multi_index
                orig = arr[idx]
                arr[idx] = orig + eps
                up = loss(x, w, b0)
                arr[idx] = orig - eps
                down = loss(x, w, b0)
                arr[idx] = orig
                fd = (up - down) / (2 * eps)
                assert abs(fd - grad[idx]) <= 1e-6 * max(1.0, abs(fd))


class TestGap:
    def test_matches_mean_oracle(self):
        rng = np.random.default_rng(11)
        x = rng.normal(size=(4, 6, 30))
        np.testing.assert_allclose(F.gap(x), x.mean(axis=2), atol=1e-15)

    def test_single_sample_squeeze(self):
        x = np.arange(12.0).reshape(3, 4)
        out = F.gap(x)
        assert out.shape == (3,)
        np.testing.assert_allclose(out, x.mean(axis=1))

    def test_empty_time_axis_rejected(self):
        with pytest.raises(ShapeMismatch):
            F.gap(np.zeros((2, 3, 0)))

    def test_backward_spreads_evenly(self):
        d_out = np.array([[3.0, 6.0]])
        d_x = F.gap_backward(d_out, 3)
        np.testing.assert_allclose(d_x, [[[1.0] * 3, [2.0] * 3]])


class TestBatchNorm:
    def test_training_output_is_standardized(self):
        rng = np.random.default_rng(5)
        x = rng.normal(loc=4.0, scale=3.0, size=(8, 3, 40))
        gamma, beta = np.ones(3), np.zeros(3)
        y, _, _, _ = F.batchnorm_forward(x, gamma, beta, np.zeros(3), np.ones(3), training=True)
        np.testing.assert_allclose(y.mean(axis=(0, 2)), 0.0, atol=1e-12)
        np.testing.assert_allclose(y.var(axis=(0, 2)), 1.0, atol=1e-4)

    def test_gamma_beta_affine(self):
        rng = np.random.default_rng(6)
        x = rng.normal(size=(4, 2, 10))
        gamma = np.array([2.0, -1.0])
        beta = np.array([5.0, 0.5])
        y, _, _, _ = F.batchnorm_forward(x, gamma, beta, np.zeros(2), np.ones(2), training=True)
        base, _, _, _ = F.batchnorm_forward(
            x, np.ones(2), np.zeros(2), np.zeros(2), np.ones(2), training=True
        )
        np.testing.assert_allclose(y, gamma[None, :, None] * base + beta[None, :, None], atol=1e-12)

    def test_running_stats_exponential_update(self):
        rng = np.random.default_rng(8)
        x = rng.normal(loc=2.0, size=(16, 1, 50))
        rm, rv = np.array([1.0]), np.array([4.0])
        _, _, new_m, new_v = F.batchnorm_forward(
            x, np.ones(1), np.zeros(1), rm, rv, training=True, momentum=0.9
        )
        np.testing.assert_allclose(new_m, 0.9 * rm + 0.1 * x.mean(axis=(0, 2)), atol=1e-12)
        np.testing.assert_allclose(new_v, 0.9 * rv + 0.1 * x.var(axis=(0, 2)), atol=1e-12)

    def test_inference_uses_running_stats(self):
        x = np.full((2, 1, 4), 10.0)
        rm, rv = np.array([10.0]), np.array([1.0])
        y, _, m, v = F.batchnorm_forward(x, np.ones(1), np.zeros(1), rm, rv, training=False)
        np.testing.assert_allclose(y, 0.0, atol=1e-3)
        # inference must not advance the stats
        np.testing.assert_array_equal(m, rm)
        np.testing.assert_array_equal(v, rv)

    def test_backward_matches_finite_differences(self):
        rng = np.random.default_rng(9)
        x = rng.normal(size=(3, 2, 7))
        gamma = rng.normal(size=2)
        beta = rng.normal(size=2)
        d_out = rng.normal(size=(3, 2, 7))

        def loss(xv, gv, bv):
            y, _, _, _ = F.batchnorm_forward(xv, gv, bv, np.zeros(2), np.ones(2), training=True)
            return float((y * d_out).sum())

        _, cache, _, _ = F.batchnorm_forward(x, gamma, beta, np.zeros(2), np.ones(2), training=True)
        d_x, d_gamma, d_beta = F.batchnorm_backward(d_out, cache)
        eps = 1e-6
        for arr, grad in ((x, d_x), (gamma, d_gamma), (beta, d_beta)):
            it = np.nditer(arr, flags=["multi_index"])
            for _ in it:
                idx = it.multi_index
                orig = arr[idx]
                arr[idx] = orig + eps
                up = loss(x, gamma, beta)
                arr[idx] = orig - eps
                down = loss(x, gamma, beta)
                arr[idx] = orig
                fd = (up - down) / (2 * eps)
                assert abs(fd - grad[idx]) <= 1e-5 * max(1.0, abs(fd))


class TestActivations:
    def test_relu_example(self):
        np.testing.assert_array_equal(
            F.relu(np.array([-2.0, 0.0, 3.0])), [0.0, 0.0, 3.0]
        )

    def test_relu_backward_gates_on_input_sign(self):
        x = np.array([-1.0, 0.0, 2.0])
        d = np.array([5.0, 5.0, 5.0])
        np.testing.assert_array_equal(F.relu_backward(d, x), [0.0, 0.0, 5.0])

    def test_softmax_rows_sum_to_one(self):
        rng = np.random.default_rng(12)
        p = F.softmax(rng.normal(size=(20, 2)) * 10)
        np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-12)
        assert (p >= 0).all()

    def test_softmax_known_example(self):
        p = F.softmax(np.array([[0.0, 0.0]]))
        np.testing.assert_allclose(p, [[0.5, 0.5]], atol=1e-15)

    @given(st.floats(-500, 500), st.floats(-30, 30))
    def test_softmax_shift_invariant(self, shift, logit):
        row = np.array([[logit, -logit]])
        np.testing.assert_allclose(F.softmax(row), F.softmax(row + shift), atol=1e-12)

    def test_softmax_extreme_logits_stable(self):
        p = F.softmax(np.array([[1e4, -1e4]]))
        assert np.isfinite(p).all()
        np.testing.assert_allclose(p[0, 0], 1.0)

    def test_sigmoid_known_values(self):
        np.testing.assert_allclose(F.sigmoid(np.array([0.0])), [0.5])
        np.testing.assert_allclose(
            F.sigmoid(np.array([1.0])), [1.0 / (1.0 + np.exp(-1.0))], atol=1e-15
        )

    @given(st.floats(-700, 700))
    @settings(max_examples=50)
    def test_sigmoid_symmetry_and_stability(self, v):
        x = np.array([v, -v])
        s = F.sigmoid(x)
        assert np.isfinite(s).all()
        np.testing.assert_allclose(s[0] + s[1], 1.0, atol=1e-12)


class TestCrossEntropy:
    def test_matches_log_softmax_oracle(self):
        rng = np.random.default_rng(13)
        logits = rng.normal(size=(30, 2)) * 4
        labels = rng.integers(0, 2, size=30)
        loss, _ = F.cross_entropy(logits, labels)
        probs = F.softmax(logits)
        want = -np.log(probs[np.arange(30), labels]).mean()
        np.testing.assert_allclose(loss, want, atol=1e-12)

    def test_gradient_is_probs_minus_onehot(self):
        rng = np.random.default_rng(14)
        logits = rng.normal(size=(10, 2))
        labels = rng.integers(0, 2, size=10)
        _, d = F.cross_entropy(logits, labels)
        want = F.softmax(logits)
        want[np.arange(10), labels] -= 1.0
        np.testing.assert_allclose(d, want / 10, atol=1e-12)

    def test_weighted_equals_duplicated_samples(self):
        # weight 2 on a sample must give the same loss as including it twice
        logits = np.array([[1.0, -1.0], [0.5, 2.0]])
        labels = np.array([0, 1])
        weighted, _ = F.cross_entropy(logits, labels, np.array([2.0, 1.0]))
        dup, _ = F.cross_entropy(
            np.vstack([logits[0], logits]), np.array([0, 0, 1])
        )
        np.testing.assert_allclose(weighted, dup, atol=1e-12)

    def test_perfect_prediction_loss_near_zero(self):
        logits = np.array([[50.0, -50.0]])
        loss, _ = F.cross_entropy(logits, np.array([0]))
        assert loss < 1e-12


class TestStandardize:
    def test_zero_mean_unit_std(self):
        rng = np.random.default_rng(15)
        z = F.standardize(rng.normal(loc=100.0, scale=7.0, size=500))
        assert abs(z.mean()) < 1e-12
        np.testing.assert_allclose(z.std(), 1.0, atol=1e-12)

    def test_constant_window_maps_to_zeros(self):
        np.testing.assert_array_equal(F.standardize(np.full(10, 42.0)), np.zeros(10))

    @given(st.floats(-1e4, 1e4), st.floats(0.1, 1e3))
    @settings(max_examples=50)
    def test_affine_invariance(self, shift, scale):
        base = np.array([1.0, 2.0, 4.0, 8.0, 9.0])
        np.testing.assert_allclose(
            F.standardize(base * scale + shift), F.standardize(base), atol=1e-9
        )
