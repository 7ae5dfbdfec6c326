"""Tests for spatio-temporal attention and the refining recurrence."""

import numpy as np
import pytest

from src.model import NetworkSpec, TrackingState, convlstm_step, init_params, se3_head
from src.refining import (
    attention_weights,
    fuse_features,
    guided_memory,
    guided_observation,
    refine_sequence,
    spatial_weights,
    temporal_weights,
)
from src.tensor import Tensor
from src.utils.errors import ShapeError


def softmax(z):
    e = np.exp(z - z.max())
    return e / e.sum()


def cosine(a, b):
    return float(np.sum(a * b) / (np.linalg.norm(a) * np.linalg.norm(b)))


@pytest.fixture
def slots(rng):
    return [rng.normal(size=(3, 2, 2)) for _ in range(4)]


class TestAttentionWeights:

    def test_alpha_and_beta_normalization(self, rng, slots):
        g = Tensor(rng.normal(size=(3, 2, 2)))
        weights = attention_weights(g, [Tensor(s) for s in slots])
        assert weights.alpha.shape == (4,)
        assert weights.beta.shape == (4, 3)
        assert weights.alpha.sum() == pytest.approx(1.0)
        assert np.all(weights.alpha > 0)
        np.testing.assert_allclose(weights.beta.sum(axis=1), np.full(4, 3.0))

    def test_zero_guidance_is_neutral(self, slots):
        weights = attention_weights(Tensor(np.zeros((3, 2, 2))), [Tensor(s) for s in slots])
        np.testing.assert_allclose(weights.alpha, np.full(4, 0.25))
        np.testing.assert_allclose(weights.beta, np.ones((4, 3)))

    def test_disabled_attention_is_uniform(self, rng, slots):
        g = Tensor(rng.normal(size=(3, 2, 2)))
        memory = [Tensor(s) for s in slots]
        np.testing.assert_array_equal(temporal_weights(g, memory, enabled=False).data, np.full(4, 0.25))
        np.testing.assert_array_equal(spatial_weights(g, memory[0], enabled=False).data, np.ones(3))

    def test_alpha_ignores_guidance_scale(self, rng, slots):
        g = rng.normal(size=(3, 2, 2))
        memory = [Tensor(s) for s in slots]
        a = temporal_weights(Tensor(g), memory).data
        b = temporal_weights(Tensor(7.0 * g), memory).data
        np.testing.assert_allclose(a, b, atol=1e-12)

    def test_most_similar_slot_weighs_most(self, rng, slots):
        weights = attention_weights(Tensor(2.0 * slots[2]), [Tensor(s) for s in slots])
        assert int(np.argmax(weights.alpha)) == 2

    def test_empty_memory_rejected(self):
        with pytest.raises(ValueError):
            guided_memory(Tensor(np.zeros((3, 2, 2))), [])

    def test_slot_shape_mismatch_rejected(self, slots):
        with pytest.raises(ShapeError):
            guided_memory(Tensor(np.zeros((3, 2, 2))), [Tensor(slots[0]), Tensor(np.zeros((2, 2, 2)))])


class TestGuidedMemory:

    def test_matches_direct_sum(self, rng, slots):
        g = rng.normal(size=(3, 2, 2))
        alpha = softmax(np.array([cosine(g, s) for s in slots]))
        expected = np.zeros((3, 2, 2))
        for a, s in zip(alpha, slots):
            beta = 3 * softmax(np.array([cosine(g[c], s[c]) for c in range(3)]))
            expected += a * beta[:, None, None] * s
        result = guided_memory(Tensor(g), [Tensor(s) for s in slots])
        np.testing.assert_allclose(result.data, expected, atol=1e-12)

    def test_single_slot_with_attention_off_is_identity(self, slots):
        g = Tensor(np.ones((3, 2, 2)))
        result = guided_memory(g, [Tensor(slots[0])], use_temporal=False, use_spatial=False)
        np.testing.assert_allclose(result.data, slots[0])

    def test_single_slot_equal_to_guidance_is_identity(self, slots):
        """alpha = (1,) and every channel matches itself, so beta is all ones."""
        slot = Tensor(slots[0])
        result = guided_memory(slot, [slot])
        np.testing.assert_allclose(result.data, slots[0], atol=1e-12)

    def test_guided_observation_of_itself_is_unchanged(self, rng):
        x = rng.normal(size=(3, 2, 2))
        np.testing.assert_allclose(guided_observation(Tensor(x), Tensor(x)).data, x, atol=1e-12)

    def test_spatial_weights_from_known_scores(self):
        """Channel cosines (0, ln 2) give beta = 2 * softmax(0, ln 2) = (2/3, 4/3)."""
        s = np.log(2.0)
        guidance = np.array([[[1.0, 0.0]], [[1.0, 0.0]]])
        feature = np.array([[[0.0, 1.0]], [[s, np.sqrt(1.0 - s * s)]]])
        beta = spatial_weights(Tensor(guidance), Tensor(feature)).data
        np.testing.assert_allclose(beta, [2.0 / 3.0, 4.0 / 3.0], atol=1e-12)

    @pytest.mark.parametrize("c", [0.5, 2.0, 8.0])
    def test_scaling_every_slot_scales_the_result(self, rng, slots, c):
        g = Tensor(rng.normal(size=(3, 2, 2)))
        base = guided_memory(g, [Tensor(s) for s in slots]).data
        scaled = guided_memory(g, [Tensor(c * s) for s in slots]).data
        np.testing.assert_array_equal(scaled, c * base)

    def test_guided_observation_shape(self, rng):
        x = rng.normal(size=(3, 2, 2))
        out = guided_observation(Tensor(rng.normal(size=(3, 2, 2))), Tensor(x))
        assert out.shape == x.shape


class TestRandomizedAttention:

    def test_invariants_over_random_cases(self, rng):
        for _ in range(1000):
            n = int(rng.integers(1, 7))
            shape = (int(rng.integers(1, 5)), int(rng.integers(1, 4)), int(rng.integers(1, 4)))
            g = rng.normal(size=shape)
            slots = [rng.normal(size=shape) for _ in range(n)]
            memory = [Tensor(s) for s in slots]

            weights = attention_weights(Tensor(g), memory)
            assert abs(weights.alpha.sum() - 1.0) < 1e-9
            np.testing.assert_allclose(weights.beta.mean(axis=1), np.ones(n), atol=1e-9)

            alpha = softmax(np.array([cosine(g, s) for s in slots]))
            expected = np.zeros(shape)
            for a, s in zip(alpha, slots):
                beta = shape[0] * softmax(np.array([cosine(g[ch], s[ch]) for ch in range(shape[0])]))
                expected += a * beta[:, None, None] * s
            np.testing.assert_allclose(guided_memory(Tensor(g), memory).data, expected, atol=1e-12)

            c = float(2.0 ** rng.integers(-3, 4))
            np.testing.assert_array_equal(temporal_weights(Tensor(c * g), memory).data,
                                          temporal_weights(Tensor(g), memory).data)


class TestRefineSequence:

    def test_one_pose_per_step(self, tiny_params, rng):
        features = [Tensor(rng.normal(size=(4, 4, 4))) for _ in range(3)]
        memory = [Tensor(rng.normal(size=(4, 4, 4))) for _ in range(2)]
        result = refine_sequence(features, memory, tiny_params, record_attention=True)
        assert len(result.absolute) == 3
        assert result.absolute[0].shape == (6,)
        assert len(result.attention) == 3
        # first step has no guidance yet
        np.testing.assert_allclose(result.attention[0].alpha, [0.5, 0.5])

    def test_empty_memory_rejected(self, tiny_params, rng):
        with pytest.raises(ValueError):
            refine_sequence([Tensor(rng.normal(size=(4, 4, 4)))], [], tiny_params)

    def test_matches_manual_unroll(self, tiny_params, rng):
        """Three steps, each guided by the previous step's refining output."""
        features = [Tensor(rng.normal(size=(4, 4, 4))) for _ in range(3)]
        memory = [Tensor(rng.normal(size=(4, 4, 4))) for _ in range(2)]
        result = refine_sequence(features, memory, tiny_params)

        state = TrackingState.zeros(4, 4, 4)
        guidance = Tensor(np.zeros((4, 4, 4)))
        for t, x in enumerate(features):
            fused = fuse_features(guided_memory(guidance, memory), guided_observation(guidance, x),
                                  tiny_params.fusion)
            out, state = convlstm_step(fused, state, tiny_params.refining_cell)
            np.testing.assert_array_equal(result.outputs[t].data, out.data)
            np.testing.assert_array_equal(result.absolute[t].data, se3_head(out, tiny_params.refining_head).data)
            guidance = out


class TestFusion:

    def test_zero_input_gives_zero_output(self, tiny_params):
        zero = Tensor(np.zeros((4, 4, 4)))
        out = fuse_features(zero, zero, tiny_params.fusion)
        np.testing.assert_array_equal(out.data, np.zeros((4, 4, 4)))

    def test_desk_shapes(self, rng):
        params = init_params(NetworkSpec.from_preset("desk"), seed=0)
        memory_feature = Tensor(rng.normal(size=(64, 4, 4)))
        observation = Tensor(rng.normal(size=(64, 4, 4)))
        assert fuse_features(memory_feature, observation, params.fusion).shape == (64, 4, 4)
