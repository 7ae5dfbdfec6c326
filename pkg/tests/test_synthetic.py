"""Tests for the synthetic sequence generator."""

import numpy as np
import pytest
from pydantic import ValidationError

from src.geometry import integrate_relative
from src.training import SyntheticSequenceSpec, make_synthetic_dataset, make_synthetic_sequence, square_footprint


class TestSyntheticSequence:

    def test_zero_motion_gives_identical_frames(self):
        spec = SyntheticSequenceSpec(frame_count=4, height=16, width=16, translation_step=(0.0, 0.0))
        seq = make_synthetic_sequence(spec)
        for frame in seq.frames[1:]:
            np.testing.assert_allclose(frame, seq.frames[0], atol=1e-12)
        for pose in seq.absolute:
            np.testing.assert_allclose(pose.matrix, np.eye(4), atol=1e-15)

    def test_constant_translation_steps(self):
        spec = SyntheticSequenceSpec(frame_count=5, height=16, width=16, translation_step=(0.01, 0.0))
        seq = make_synthetic_sequence(spec)
        for rel in seq.relative:
            np.testing.assert_allclose(rel.as_vector(), [0.01, 0.0, 0.0, 0.0, 0.0, 0.0], atol=1e-15)

    def test_relative_and_absolute_agree(self):
        spec = SyntheticSequenceSpec(frame_count=12, height=16, width=16, rotation_step=0.05, motion_jitter=0.3)
        seq = make_synthetic_sequence(spec)
        for a, b in zip(integrate_relative(seq.relative), seq.absolute):
            np.testing.assert_allclose(a.matrix, b.matrix, atol=1e-9)

    def test_shapes_and_timestamps(self):
        spec = SyntheticSequenceSpec(frame_count=6, height=8, width=12, frame_rate=5.0)
        seq = make_synthetic_sequence(spec)
        assert len(seq.frames) == 6 and len(seq.relative) == 5 and len(seq.absolute) == 6
        assert seq.frames[0].shape == (3, 8, 12)
        np.testing.assert_allclose(seq.timestamps, np.arange(6) / 5.0)

    def test_seeded(self):
        spec = SyntheticSequenceSpec(frame_count=3, height=8, width=8, motion_jitter=0.2, seed=4)
        a, b = make_synthetic_sequence(spec), make_synthetic_sequence(spec)
        assert all(np.array_equal(x, y) for x, y in zip(a.frames, b.frames))

    def test_dataset_sequences_differ(self):
        spec = SyntheticSequenceSpec(frame_count=3, height=8, width=8, sequence_count=2)
        first, second = make_synthetic_dataset(spec)
        assert not np.array_equal(first.frames[0], second.frames[0])

    def test_square_pattern_moves_with_camera(self):
        spec = SyntheticSequenceSpec(frame_count=3, height=32, width=32, pattern="square",
                                     square_size=8, translation_step=(0.02, 0.0))
        seq = make_synthetic_sequence(spec)
        masks = [square_footprint(spec, p) for p in seq.absolute]
        assert masks[0].sum() == 64
        # the camera moves +x so the square shifts left by 2 px per frame
        np.testing.assert_array_equal(masks[1][:, :-2], masks[0][:, 2:])
        assert not np.any(seq.frames[0][:, ~masks[0]])

    def test_unknown_field_rejected(self):
        with pytest.raises(ValidationError):
            SyntheticSequenceSpec(frames=3)
