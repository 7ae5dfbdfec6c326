"""End-to-end runs of the command-line subcommands on a tiny synthetic dataset."""

import json

import pandas as pd
import pytest

from src.cli import run
from src.ingestion import load_dataset, read_trajectory
from src.tensor import read_blob
from src.training import HISTORY_COLUMNS

SYNTH_SPEC = {"frame_count": 6, "height": 16, "width": 16, "sequence_count": 2, "seed": 1}
TRAIN_CONFIG = {"preset": "tiny", "window_length": 4, "batch_size": 1, "iterations": 2,
                "theta_rot": 0.0, "theta_trans": 0.0, "k": 10.0, "seed": 0}


def write_json(path, payload):
    path.write_text(json.dumps(payload), encoding="utf8")
    return str(path)


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    spec = write_json(root / "spec.json", SYNTH_SPEC)
    config = write_json(root / "config.json", TRAIN_CONFIG)
    assert run(["synth-data", "--spec", spec, "--out", str(root / "data")]) == 0
    assert run(["train", "--config", config, "--data", str(root / "data"), "--out", str(root / "run")]) == 0
    return root


# =============================================================================
# synth-data / train
# =============================================================================

class TestDataAndTraining:

    def test_synth_data_writes_containers(self, workspace):
        records = load_dataset(workspace / "data")
        assert [r.name for r in records] == ["seq_000", "seq_001"]
        assert all(len(r.frames) == 6 and r.frames[0].shape == (3, 16, 16) for r in records)
        assert (workspace / "data" / "spec.json").exists()

    def test_synth_data_is_seeded(self, workspace, tmp_path):
        spec = write_json(tmp_path / "spec.json", SYNTH_SPEC)
        assert run(["synth-data", "--spec", spec, "--out", str(tmp_path / "again")]) == 0
        name = "seq_001/frame_000003.votb"
        assert (tmp_path / "again" / name).read_bytes() == (workspace / "data" / name).read_bytes()

    def test_train_outputs(self, workspace):
        run_dir = workspace / "run"
        history = pd.read_csv(run_dir / "loss_history.csv")
        assert list(history.columns) == HISTORY_COLUMNS
        assert len(history) == 2
        assert (run_dir / "checkpoint" / "manifest.json").exists()
        assert json.loads((run_dir / "config.json").read_text(encoding="utf8"))["preset"] == "tiny"

    def test_training_is_deterministic(self, workspace, tmp_path):
        config = write_json(tmp_path / "config.json", TRAIN_CONFIG)
        assert run(["train", "--config", config, "--data", str(workspace / "data"), "--out", str(tmp_path)]) == 0
        assert (tmp_path / "loss_history.csv").read_text(encoding="utf8") == \
            (workspace / "run" / "loss_history.csv").read_text(encoding="utf8")

    def test_preset_must_match_frames(self, workspace, tmp_path):
        code = run(["train", "--preset", "desk", "--data", str(workspace / "data"), "--out", str(tmp_path)])
        assert code == 1


# =============================================================================
# infer / eval / saliency / plot-data
# =============================================================================

class TestAnalysis:

    def test_infer_writes_one_trajectory_per_sequence(self, workspace, tmp_path):
        code = run(["infer", "--checkpoint", str(workspace / "run" / "checkpoint"),
                    "--config", str(workspace / "config.json"),
                    "--data", str(workspace / "data"), "--out", str(tmp_path)])
        assert code == 0
        for name in ("seq_000", "seq_001"):
            assert len(read_trajectory(tmp_path / f"{name}.txt", "kitti")) == 6

    def test_eval_self_comparison(self, workspace, tmp_path):
        gt = str(workspace / "data" / "seq_000" / "poses_kitti.txt")
        out = tmp_path / "metrics.csv"
        assert run(["eval", "--est", gt, "--gt", gt, "--out", str(out), "--lengths", "0.01", "0.02"]) == 0
        summary = pd.read_csv(out).set_index("metric")["value"]
        assert summary["t_rel_percent"] == pytest.approx(0.0, abs=1e-6)
        assert summary["r_rel_deg_per_100m"] < 0.1
        assert (tmp_path / "metrics_per_length.csv").exists()

    def test_eval_tum_too_short(self, workspace, tmp_path):
        gt = str(workspace / "data" / "seq_000" / "poses_tum.txt")
        code = run(["eval", "--format", "tum", "--est", gt, "--gt", gt, "--out", str(tmp_path / "m.csv")])
        assert code == 1

    def test_eval_rejects_zero_length(self, workspace, tmp_path):
        gt = str(workspace / "data" / "seq_000" / "poses_kitti.txt")
        code = run(["eval", "--est", gt, "--gt", gt, "--out", str(tmp_path / "m.csv"), "--lengths", "0"])
        assert code == 1
        assert not (tmp_path / "m.csv").exists()

    def test_saliency_blobs(self, workspace, tmp_path):
        code = run(["saliency", "--checkpoint", str(workspace / "run" / "checkpoint"),
                    "--config", str(workspace / "config.json"),
                    "--data", str(workspace / "data"), "--out", str(tmp_path)])
        assert code == 0
        blobs = sorted(tmp_path.glob("saliency_*.votb"))
        assert len(blobs) == 4
        assert read_blob(blobs[0]).shape == (16, 16)

    def test_plot_data_tables_and_figures(self, workspace, tmp_path):
        gt = str(workspace / "data" / "seq_000" / "poses_kitti.txt")
        code = run(["plot-data", "--est", gt, "--gt", gt, "--out", str(tmp_path),
                    "--lengths", "0.01", "0.02", "--figures"])
        assert code == 0
        for name in ("error_vs_length.csv", "error_vs_speed.csv", "error_vs_length.png", "trajectory.png"):
            assert (tmp_path / name).exists()


# =============================================================================
# Failures
# =============================================================================

class TestFailures:

    def test_unknown_subcommand(self):
        assert run(["bogus"]) == 2

    def test_missing_dataset(self, tmp_path):
        assert run(["train", "--data", str(tmp_path / "nowhere"), "--out", str(tmp_path)]) == 1

    def test_missing_out(self, workspace):
        assert run(["train", "--data", str(workspace / "data")]) == 1
