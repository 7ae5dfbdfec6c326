"""Tests for the encoder, ConvLSTM cell, SE(3) head, parameter set and checkpoints."""

import json

import numpy as np
import pytest
from pydantic import ValidationError

from src.model import (
    ConvLSTMParams,
    ConvLayerSpec,
    EncoderConfig,
    ModelParams,
    NetworkSpec,
    PARAMETER_GROUPS,
    TrackingState,
    convlstm_step,
    encode_pair,
    init_params,
    load_checkpoint,
    save_checkpoint,
    track_sequence,
)
from src.tensor import Tensor
from src.utils.errors import BlobFormatError, ShapeError

from .reference import convlstm_reference


def zero_params(spec: NetworkSpec) -> ModelParams:
    return ModelParams(spec, {name: Tensor(np.zeros(shape)) for name, shape in spec.parameter_shapes().items()})


def random_cell(rng, c_in, ch, k=3):
    return ConvLSTMParams(
        Tensor(rng.normal(scale=0.3, size=(4 * ch, c_in, k, k))),
        Tensor(rng.normal(scale=0.3, size=(4 * ch, ch, k, k))),
        Tensor(rng.normal(scale=0.3, size=4 * ch)),
    )


# =============================================================================
# Encoder
# =============================================================================

class TestEncoder:

    @pytest.mark.parametrize("preset,expected", [
        ("tiny", (4, 4, 4)),
        ("desk", (64, 4, 4)),
        ("kitti-shape", (1024, 6, 20)),
    ])
    def test_preset_output_shapes(self, preset, expected):
        assert NetworkSpec.from_preset(preset).feature_shape == expected

    def test_requires_nine_layers(self):
        layers = [ConvLayerSpec(out_channels=4, kernel=3, padding=1)] * 8
        with pytest.raises(ValidationError):
            EncoderConfig(image_height=16, image_width=16, layers=layers)

    def test_stride_must_divide_extents(self):
        layers = [ConvLayerSpec(out_channels=4, kernel=3, stride=2, padding=1)] + \
                 [ConvLayerSpec(out_channels=4, kernel=3, padding=1)] * 8
        with pytest.raises(ValidationError):
            EncoderConfig(image_height=15, image_width=16, layers=layers)

    def test_encode_pair_shape(self, tiny_params, tiny_frames):
        spec = tiny_params.spec
        x = encode_pair(Tensor(tiny_frames[0]), Tensor(tiny_frames[1]), tiny_params.encoder, spec.encoder)
        assert x.shape == (4, 4, 4)
        assert np.all(x.data >= 0.0)

    def test_encode_pair_rejects_mismatched_frames(self, tiny_params):
        spec = tiny_params.spec
        with pytest.raises(ShapeError):
            encode_pair(Tensor(np.zeros((3, 16, 16))), Tensor(np.zeros((3, 8, 8))),
                        tiny_params.encoder, spec.encoder)


# =============================================================================
# ConvLSTM
# =============================================================================

class TestConvLSTM:

    def test_matches_unrolled_reference(self, rng):
        """Three steps against the plain-numpy cell."""
        cell = random_cell(rng, c_in=3, ch=2)
        state = TrackingState.zeros(2, 5, 5)
        h, c = np.zeros((2, 5, 5)), np.zeros((2, 5, 5))
        for _ in range(3):
            x = rng.normal(size=(3, 5, 5))
            out, state = convlstm_step(Tensor(x), state, cell)
            h, c = convlstm_reference(x, h, c, cell.w_x.data, cell.w_h.data, cell.bias.data)
            np.testing.assert_allclose(out.data, h, atol=1e-12)
            np.testing.assert_allclose(state.cell.data, c, atol=1e-12)

    def test_saturated_forget_gate_keeps_cell(self, rng):
        ch = 2
        bias = np.zeros(4 * ch)
        bias[:ch] = -50.0  # input gate closed
        bias[ch:2 * ch] = 50.0  # forget gate open
        cell = ConvLSTMParams(Tensor(np.zeros((4 * ch, 3, 3, 3))), Tensor(np.zeros((4 * ch, ch, 3, 3))),
                              Tensor(bias))
        c0 = rng.normal(size=(ch, 4, 4))
        state = TrackingState(Tensor(np.zeros((ch, 4, 4))), Tensor(c0))
        for _ in range(5):
            out, state = convlstm_step(Tensor(rng.normal(size=(3, 4, 4))), state, cell)
        np.testing.assert_allclose(state.cell.data, c0, atol=1e-15)
        np.testing.assert_allclose(out.data, 0.5 * np.tanh(c0), atol=1e-15)

    def test_rejects_wrong_state_shape(self, rng):
        cell = random_cell(rng, c_in=3, ch=2)
        with pytest.raises(ShapeError):
            convlstm_step(Tensor(np.zeros((3, 4, 4))), TrackingState.zeros(2, 5, 5), cell)

    def test_rejects_bad_bias(self, rng):
        cell = random_cell(rng, c_in=3, ch=2)
        broken = ConvLSTMParams(cell.w_x, cell.w_h, Tensor(np.zeros(5)))
        with pytest.raises(ShapeError):
            convlstm_step(Tensor(np.zeros((3, 4, 4))), TrackingState.zeros(2, 4, 4), broken)


# =============================================================================
# Tracking pass
# =============================================================================

class TestTracking:

    def test_zero_parameters_give_zero_motion(self, tiny_spec, tiny_frames):
        result = track_sequence([Tensor(f) for f in tiny_frames], zero_params(tiny_spec))
        assert len(result) == 3
        for pose in result.relative:
            np.testing.assert_array_equal(pose.data, np.zeros(6))

    def test_output_shapes(self, tiny_params, tiny_frames):
        result = track_sequence([Tensor(f) for f in tiny_frames], tiny_params)
        assert len(result.relative) == len(result.hidden) == len(result.features) == 3
        assert result.relative[0].shape == (6,)
        assert result.hidden[0].shape == (4, 4, 4)
        assert len(result.relative_poses()) == 3

    def test_needs_two_frames(self, tiny_params, tiny_frames):
        with pytest.raises(ValueError):
            track_sequence([Tensor(tiny_frames[0])], tiny_params)

    def test_is_deterministic(self, tiny_params, tiny_frames):
        a = track_sequence([Tensor(f) for f in tiny_frames], tiny_params)
        b = track_sequence([Tensor(f) for f in tiny_frames], tiny_params)
        for x, y in zip(a.relative, b.relative):
            assert x.data.tobytes() == y.data.tobytes()


# =============================================================================
# Parameters and checkpoints
# =============================================================================

class TestParams:

    def test_every_parameter_in_one_group(self, tiny_params):
        grouped = [name for g in PARAMETER_GROUPS for name in tiny_params.group(g)]
        assert sorted(grouped) == sorted(tiny_params.names())

    def test_init_is_seeded(self, tiny_spec):
        a, b = init_params(tiny_spec, seed=5), init_params(tiny_spec, seed=5)
        c = init_params(tiny_spec, seed=6)
        assert all(np.array_equal(a[n].data, b[n].data) for n in a)
        assert not np.array_equal(a["encoder.conv1.weight"].data, c["encoder.conv1.weight"].data)

    def test_biases_start_at_zero(self, tiny_params):
        for name in tiny_params:
            if name.endswith("bias"):
                assert not tiny_params[name].data.any()

    def test_replace_requires_every_name(self, tiny_params):
        with pytest.raises(KeyError):
            tiny_params.replace({})


class TestCheckpoint:

    def test_save_then_load_is_exact(self, tmp_path, tiny_params):
        save_checkpoint(tiny_params, tmp_path / "ckpt", metadata={"note": "test"})
        loaded = load_checkpoint(tmp_path / "ckpt")
        assert loaded.spec == tiny_params.spec
        assert loaded.names() == tiny_params.names()
        for name in tiny_params:
            assert loaded[name].data.tobytes() == tiny_params[name].data.tobytes()

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_checkpoint(tmp_path)

    def test_missing_parameter_rejected(self, tmp_path, tiny_params):
        manifest_path = save_checkpoint(tiny_params, tmp_path)
        manifest = json.loads(manifest_path.read_text(encoding="utf8"))
        manifest["parameters"] = manifest["parameters"][1:]
        manifest_path.write_text(json.dumps(manifest), encoding="utf8")
        with pytest.raises(BlobFormatError):
            load_checkpoint(tmp_path)

    def test_invalid_manifest_rejected(self, tmp_path, tiny_params):
        manifest_path = save_checkpoint(tiny_params, tmp_path)
        manifest_path.write_text("{}", encoding="utf8")
        with pytest.raises(BlobFormatError):
            load_checkpoint(tmp_path)
