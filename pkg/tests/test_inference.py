"""Tests for sliding-window inference."""

import numpy as np
import pytest

from src.geometry import Pose6DoF, PoseSE3, integrate_relative
from src.tensor import Tensor
from src.training import evaluate_endpoints, infer_trajectory, run_window, sliding_window_infer, window_starts


def biased_estimator(truth):
    """Window estimator returning the true window-relative poses plus a start-dependent bias."""

    def estimate(window):
        indices = [int(f.data[0]) for f in window]
        origin = truth[indices[0]].inverse()
        bias = Pose6DoF([0.01 * indices[0], 0.0, 0.0], [0.0, 0.0, 0.001 * indices[0]]).to_se3()
        return [PoseSE3.identity()] + [origin @ truth[i] @ bias for i in indices[1:]]

    return estimate


@pytest.fixture
def stream(rng):
    steps = [Pose6DoF(rng.normal(scale=0.1, size=3), rng.normal(scale=0.05, size=3)) for _ in range(29)]
    truth = integrate_relative(steps)
    frames = [Tensor([float(i)]) for i in range(len(truth))]
    return frames, truth


class TestWindowStarts:

    def test_stride_one(self):
        assert window_starts(30, 11, 1) == list(range(20))

    def test_stride_capped_at_window_minus_one(self):
        assert window_starts(7, 3, 3) == [0, 2, 4]

    def test_short_stream_single_window(self):
        assert window_starts(4, 11, 11) == [0]

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            window_starts(10, 1, 1)
        with pytest.raises(ValueError):
            window_starts(10, 3, 0)


class TestSlidingWindow:

    def test_matches_reanchoring_replay(self, stream):
        frames, truth = stream
        estimate = biased_estimator(truth)
        result = sliding_window_infer(frames, 11, 1, estimate)

        expected = [PoseSE3.identity()] + [None] * 29
        for start in range(20):
            local = estimate(frames[start:start + 11])
            for offset in range(1, 11):
                expected[start + offset] = expected[start] @ local[offset]
        for a, b in zip(result, expected):
            np.testing.assert_allclose(a.matrix, b.matrix, atol=1e-12)

    def test_adjacent_windows_chain_by_composition(self, stream):
        frames, truth = stream
        estimate = biased_estimator(truth)
        result = sliding_window_infer(frames[:7], 3, 3, estimate)
        first = estimate(frames[0:3])
        second = estimate(frames[2:5])
        np.testing.assert_allclose(result[2].matrix, first[2].matrix, atol=1e-12)
        np.testing.assert_allclose(result[4].matrix, (first[2] @ second[2]).matrix, atol=1e-12)

    def test_exact_estimator_recovers_trajectory(self, stream):
        frames, truth = stream

        def exact(window):
            indices = [int(f.data[0]) for f in window]
            return [truth[indices[0]].inverse() @ truth[i] for i in indices]

        for stride in (1, 4, 11):
            for a, b in zip(sliding_window_infer(frames, 11, stride, exact), truth):
                np.testing.assert_allclose(a.matrix, b.matrix, atol=1e-9)

    def test_empty_and_single_frame(self, stream):
        frames, truth = stream
        assert sliding_window_infer([], 5, 1, biased_estimator(truth)) == []
        assert len(sliding_window_infer(frames[:1], 5, 1, biased_estimator(truth))) == 1


class TestModelInference:

    def test_long_window_equals_whole_sequence(self, tiny_params, tiny_frames, tiny_config):
        poses = infer_trajectory(tiny_params, tiny_frames, tiny_config, window_length=10)
        whole = run_window([Tensor(f) for f in tiny_frames], tiny_params, tiny_config).absolute_poses()
        for a, b in zip(poses, whole):
            np.testing.assert_allclose(a.matrix, b.matrix, atol=1e-12)

    def test_endpoint_errors(self, tiny_params, tiny_frames, tiny_config):
        gt = integrate_relative([Pose6DoF([0.01, 0.0, 0.0], [0.0, 0.0, 0.0])] * 3)
        errors = evaluate_endpoints(tiny_params, tiny_frames, gt, tiny_config)
        assert set(errors) == {"refined_endpoint_error", "tracking_endpoint_error"}
        assert all(np.isfinite(v) and v >= 0 for v in errors.values())
