"""Tests for the local/global pose losses and the Adam optimizer."""

import numpy as np
import pytest

from src.tensor import Tensor, check_gradients
from src.training import OptimizerState, adam_step, loss_global, loss_local, loss_total, lr_at
from src.utils.errors import NonFiniteGradientError


def vec(t=(0.0, 0.0, 0.0), r=(0.0, 0.0, 0.0)):
    return np.array(list(t) + list(r), dtype=np.float64)


class TestLocalLoss:

    def test_exact_prediction_is_zero(self, rng):
        gt = [rng.normal(size=6) for _ in range(3)]
        assert loss_local([Tensor(g) for g in gt], gt, k=100.0).item() == 0.0

    def test_unit_translation_error(self):
        for k in (1.0, 100.0):
            assert loss_local([Tensor(vec(t=(1.0, 0.0, 0.0)))], [vec()], k=k).item() == pytest.approx(1.0)

    def test_hand_evaluated_pair(self):
        pred = [Tensor(vec(t=(1.0, 0.0, 0.0), r=(0.1, 0.0, 0.0))), Tensor(vec(t=(0.0, 2.0, 0.0), r=(0.0, 0.0, 0.1)))]
        assert loss_local(pred, [vec(), vec()], k=100.0).item() == pytest.approx(11.5)

    def test_linear_in_k(self, rng):
        pred = [Tensor(rng.normal(size=6)) for _ in range(4)]
        gt = [rng.normal(size=6) for _ in range(4)]
        c = 3.0
        rot_term = np.mean([np.linalg.norm(p.data[3:] - g[3:]) for p, g in zip(pred, gt)])
        diff = loss_local(pred, gt, k=2 * c).item() - loss_local(pred, gt, k=c).item()
        assert diff == pytest.approx(c * rot_term)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            loss_local([Tensor(vec())], [vec(), vec()], k=1.0)
        with pytest.raises(ValueError):
            loss_local([], [], k=1.0)

    def test_non_positive_k(self):
        with pytest.raises(ValueError):
            loss_local([Tensor(vec())], [vec()], k=0.0)


class TestGlobalLoss:

    def test_index_weighting(self):
        pred = [Tensor(vec(t=(0.3, 0.0, 0.0))), Tensor(vec(t=(0.0, 0.0, 0.8)))]
        assert loss_global(pred, [vec(), vec()], k=50.0).item() == pytest.approx(0.3 + 0.8 / 2)

    def test_matches_term_by_term_sum(self, rng):
        pred = [rng.normal(size=6) for _ in range(4)]
        gt = [rng.normal(size=6) for _ in range(4)]
        k = 7.0
        expected = sum(
            (np.linalg.norm(p[:3] - g[:3]) + k * np.linalg.norm(p[3:] - g[3:])) / i
            for i, (p, g) in enumerate(zip(pred, gt), start=1)
        )
        assert loss_global([Tensor(p) for p in pred], gt, k).item() == pytest.approx(expected, rel=1e-12)

    def test_total_is_sum(self):
        assert loss_total(Tensor(1.5), Tensor(2.5)).item() == 4.0
        assert loss_total(Tensor(0.0), Tensor(0.0)).item() == 0.0

    def test_gradient(self, rng):
        gt = [rng.normal(size=6) for _ in range(3)]
        values = {f"p{i}": rng.normal(size=6) for i in range(3)}

        def f(t):
            pred = [t[f"p{i}"] for i in range(3)]
            return loss_total(loss_local(pred, gt, 10.0), loss_global(pred, gt, 10.0))

        assert max(check_gradients(f, values).values()) < 1e-6


class TestAdam:

    def test_zero_gradient_without_decay_keeps_params(self, rng):
        p = {"w": rng.normal(size=(2, 3))}
        state = OptimizerState(weight_decay=0.0)
        new, _ = adam_step(p, {"w": np.zeros((2, 3))}, state, lr=1e-3)
        np.testing.assert_array_equal(new["w"], p["w"])

    def test_first_step(self):
        lr, eps = 1e-3, 1e-8
        state = OptimizerState(weight_decay=0.0, eps=eps)
        new, state = adam_step({"x": np.array([0.0])}, {"x": np.array([1.0])}, state, lr)
        assert state.step == 1
        assert new["x"][0] == pytest.approx(-lr / (1.0 + eps), rel=1e-12)

    def test_decoupled_weight_decay(self):
        lr, wd = 0.1, 0.5
        state = OptimizerState(weight_decay=wd)
        new, _ = adam_step({"x": np.array([2.0])}, {"x": np.array([0.0])}, state, lr)
        assert new["x"][0] == pytest.approx(2.0 * (1.0 - lr * wd))

    def test_descends_quadratic(self):
        x = {"x": np.array([3.0])}
        state = OptimizerState(weight_decay=0.0)
        for _ in range(2):
            x, state = adam_step(x, {"x": 2.0 * x["x"]}, state, lr=0.1)
        assert x["x"][0] ** 2 < 9.0

    def test_input_not_modified(self):
        p = {"x": np.array([1.0])}
        adam_step(p, {"x": np.array([1.0])}, OptimizerState(), lr=0.1)
        assert p["x"][0] == 1.0

    def test_non_finite_gradient_names_parameter(self):
        with pytest.raises(NonFiniteGradientError, match="tracking.head.bias"):
            adam_step({"tracking.head.bias": np.zeros(2)}, {"tracking.head.bias": np.array([np.nan, 0.0])},
                      OptimizerState(), lr=0.1)


class TestSchedule:

    @pytest.mark.parametrize("iteration,expected", [(0, 1e-4), (59999, 1e-4), (60000, 5e-5), (120000, 2.5e-5)])
    def test_halving(self, iteration, expected):
        assert lr_at(iteration, 1e-4, 60000) == pytest.approx(expected)

    def test_negative_iteration(self):
        with pytest.raises(ValueError):
            lr_at(-1, 1e-4, 10)
