"""Tests for KITTI/TUM trajectory files and sequence containers."""

import json

import numpy as np
import pytest

from src.geometry import PoseSE3, rot_z
from src.ingestion import (
    Trajectory,
    load_dataset,
    parse_kitti_poses,
    parse_tum_trajectory,
    read_sequence_container,
    read_trajectory,
    write_dataset,
    write_kitti_poses,
    write_sequence_container,
    write_trajectory,
    write_tum_trajectory,
)
from src.training import SyntheticSequenceSpec, make_synthetic_dataset
from src.utils.errors import BlobFormatError, PoseFormatError


# =============================================================================
# KITTI
# =============================================================================

class TestKitti:

    def test_identity_line(self):
        traj = parse_kitti_poses("1 0 0 0 0 1 0 0 0 0 1 0\n")
        assert len(traj) == 1
        np.testing.assert_array_equal(traj.poses[0].matrix, np.eye(4))

    def test_translation_and_order(self):
        text = "".join(f"1 0 0 {i} 0 1 0 {2 * i} 0 0 1 {3 * i}\n" for i in range(5))
        traj = parse_kitti_poses(text)
        assert [p.translation.tolist() for p in traj.poses] == [[i, 2 * i, 3 * i] for i in range(5)]
        np.testing.assert_array_equal(traj.stamps, np.arange(5))

    def test_write_is_exact(self, rng):
        poses = [PoseSE3.from_rt(rot_z(a), rng.normal(size=3)) for a in rng.uniform(-3, 3, size=4)]
        parsed = parse_kitti_poses(write_kitti_poses(poses))
        for a, b in zip(poses, parsed.poses):
            assert a.matrix.tobytes() == b.matrix.tobytes()

    @pytest.mark.parametrize("text,line", [
        ("1 0 0 0 0 1 0 0 0 0 1\n", 1),
        ("1 0 0 0 0 1 0 0 0 0 1 0\n1 0 0 0 0 1 0 0 0 0 1 x\n", 2),
        ("1 0 0 0 0 1 0 0 0 0 -1 0\n", 1),
        ("1 0 0 0 0 1 0 0 0 0 1 nan\n", 1),
    ])
    def test_malformed_lines(self, text, line):
        with pytest.raises(PoseFormatError) as info:
            parse_kitti_poses(text)
        assert info.value.line_number == line

    def test_slightly_skewed_rotation_is_projected(self):
        traj = parse_kitti_poses("1.0000001 0 0 0 0 1 0 0 0 0 1 0\n")
        np.testing.assert_allclose(traj.poses[0].rotation, np.eye(3), atol=1e-12)


# =============================================================================
# TUM
# =============================================================================

class TestTum:

    def test_identity_and_comments(self):
        traj = parse_tum_trajectory("# header\n\n0.0 0 0 0 0 0 0 1\n")
        assert traj.stamps.tolist() == [0.0]
        np.testing.assert_array_equal(traj.poses[0].matrix, np.eye(4))

    def test_quarter_turn_quaternion(self):
        s = np.sin(np.pi / 4)
        traj = parse_tum_trajectory(f"1.5 1 2 3 0 0 {s:.17g} {s:.17g}\n")
        np.testing.assert_allclose(traj.poses[0].rotation, rot_z(np.pi / 2), atol=1e-9)
        np.testing.assert_array_equal(traj.poses[0].translation, [1.0, 2.0, 3.0])

    def test_write_then_parse(self, rng):
        poses = [PoseSE3.from_rt(rot_z(a), rng.normal(size=3)) for a in (0.1, -2.0, 3.0)]
        traj = Trajectory(np.array([0.0, 0.1, 0.25]), poses)
        parsed = parse_tum_trajectory(write_tum_trajectory(traj))
        np.testing.assert_array_equal(parsed.stamps, traj.stamps)
        for a, b in zip(poses, parsed.poses):
            np.testing.assert_allclose(a.matrix, b.matrix, atol=1e-12)

    @pytest.mark.parametrize("text", [
        "0 0 0 0 0 0 0\n",
        "0 0 0 0 0 0 0 0\n",
        "1 0 0 0 0 0 0 1\n0.5 0 0 0 0 0 0 1\n",
    ])
    def test_malformed(self, text):
        with pytest.raises(PoseFormatError):
            parse_tum_trajectory(text)


class TestTrajectoryFiles:

    def test_read_reports_path_and_line(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1 0 0 0 0 1 0 0 0 0 1 0\n1 2 3\n", encoding="utf8")
        with pytest.raises(PoseFormatError, match="bad.txt") as info:
            read_trajectory(path, "kitti")
        assert info.value.line_number == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_trajectory(tmp_path / "absent.txt", "tum")

    def test_write_read(self, tmp_path):
        traj = Trajectory.from_poses([PoseSE3.identity(), PoseSE3.from_rt(np.eye(3), [1.0, 0.0, 0.0])], 10.0)
        loaded = read_trajectory(write_trajectory(tmp_path / "out" / "t.txt", traj, "tum"), "tum")
        np.testing.assert_allclose(loaded.stamps, [0.0, 0.1])

    def test_stamps_must_increase(self):
        with pytest.raises(ValueError):
            Trajectory(np.array([0.0, 0.0]), [PoseSE3.identity()] * 2)


# =============================================================================
# Sequence containers
# =============================================================================

class TestContainers:

    def test_dataset_round_trip(self, tmp_path):
        spec = SyntheticSequenceSpec(frame_count=3, height=8, width=8, sequence_count=2, rotation_step=0.1)
        sequences = make_synthetic_dataset(spec)
        write_dataset(tmp_path, sequences, frame_rate=spec.frame_rate)
        records = load_dataset(tmp_path)
        assert [r.name for r in records] == ["seq_000", "seq_001"]
        for seq, record in zip(sequences, records):
            for a, b in zip(seq.frames, record.frames):
                assert a.tobytes() == b.tobytes()
            for a, b in zip(seq.absolute, record.absolute):
                assert a.matrix.tobytes() == b.matrix.tobytes()
            np.testing.assert_allclose(record.timestamps, seq.timestamps)

    def test_single_container_directory(self, tmp_path):
        write_sequence_container(tmp_path, [np.zeros((3, 4, 4))] * 2, name="only")
        records = load_dataset(tmp_path)
        assert len(records) == 1 and records[0].name == "only"
        assert records[0].absolute == []

    def test_frame_shape_mismatch_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            write_sequence_container(tmp_path, [np.zeros((3, 4, 4)), np.zeros((3, 4, 5))])

    def test_manifest_count_mismatch(self, tmp_path):
        path = write_sequence_container(tmp_path, [np.zeros((3, 4, 4))] * 2)
        manifest = json.loads(path.read_text(encoding="utf8"))
        manifest["frame_count"] = 3
        path.write_text(json.dumps(manifest), encoding="utf8")
        with pytest.raises(BlobFormatError):
            read_sequence_container(tmp_path)

    def test_empty_dataset_directory(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_dataset(tmp_path)
