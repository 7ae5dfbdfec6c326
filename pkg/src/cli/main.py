"""
Command-line entry point.

Subcommands:
    synth-data  render a synthetic dataset into sequence containers
    train       train a model, write checkpoint and loss history CSV
    infer       sliding-window trajectory estimates per sequence
    eval        KITTI drift or TUM RMSE of an estimate against ground truth
    saliency    per-frame saliency maps as VOTB blobs
    plot-data   error-vs-length and error-vs-speed tables (optional figures)
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import pandas as pd
from pydantic import ValidationError

from src.evaluation import error_vs_speed, export_csv, kitti_drift, saliency_map, tum_rmse_drift
from src.evaluation.metrics import KITTI_LENGTHS
from src.ingestion import Trajectory, load_dataset, read_trajectory, write_dataset, write_trajectory
from src.model import NetworkSpec, init_params, load_checkpoint
from src.tensor import write_blob
from src.training import SyntheticSequenceSpec, infer_trajectory, make_synthetic_dataset, train
from src.utils.config import TrainingConfig, desk_config
from src.utils.errors import ShapeError
from src.utils.logger import set_global_level, setup_logger

logger = setup_logger(__name__)

HANDLED_ERRORS = (ValueError, FileNotFoundError, OSError, ValidationError, FloatingPointError, RuntimeError)


def _require_file(path: Optional[str], flag: str) -> Path:
    if path is None:
        raise ValueError(f"{flag} is required")
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"{flag} not found: {path}")
    return path


def _require_out(args) -> Path:
    if args.out is None:
        raise ValueError("--out is required")
    return Path(args.out)


def _load_config(args) -> TrainingConfig:
    config = TrainingConfig.from_json_file(args.config) if args.config else desk_config()
    return config.with_overrides(seed=args.seed, preset=args.preset, window_length=args.window)


def _check_frames(spec: NetworkSpec, records) -> None:
    enc = spec.encoder
    expected = (enc.image_channels, enc.image_height, enc.image_width)
    for record in records:
        shape = tuple(record.frames[0].shape)
        if shape != expected:
            raise ShapeError(f"sequence '{record.name}' has frames {shape}, "
                             f"preset '{spec.preset}' expects {expected}")


# -- subcommands ---------------------------------------------------------------

def cmd_synth_data(args) -> None:
    spec = SyntheticSequenceSpec.from_json_file(args.spec) if args.spec else SyntheticSequenceSpec()
    if args.seed is not None:
        spec = spec.model_copy(update={"seed": args.seed})
    out = _require_out(args)
    sequences = make_synthetic_dataset(spec)
    write_dataset(out, sequences, frame_rate=spec.frame_rate)
    (out / "spec.json").write_text(spec.dump_json() + "\n", encoding="utf8")


def cmd_train(args) -> None:
    config = _load_config(args)
    data = _require_file(args.data, "--data")
    out = _require_out(args)
    records = [r for r in load_dataset(data) if r.absolute]
    if not records:
        raise ValueError(f"no sequences with ground truth in {data}")

    spec = NetworkSpec.from_preset(config.preset)
    _check_frames(spec, records)
    params = init_params(spec, seed=config.seed)
    result = train(params, records, config, checkpoint_dir=out / "checkpoint")

    export_csv(result.history, out / "loss_history.csv")
    (out / "config.json").write_text(config.dump_json() + "\n", encoding="utf8")
    logger.info(f"Final loss {result.history['loss_total'].iloc[-1]:.6f}" if len(result.history)
                else "No iterations run")


def cmd_infer(args) -> None:
    checkpoint = _require_file(args.checkpoint, "--checkpoint")
    data = _require_file(args.data, "--data")
    out = _require_out(args)
    config = _load_config(args)
    params = load_checkpoint(checkpoint)
    config = config.with_overrides(preset=params.spec.preset)
    records = load_dataset(data)
    _check_frames(params.spec, records)

    fmt = args.format or "kitti"
    for record in records:
        poses = infer_trajectory(params, record.frames, config, window_length=config.window_length,
                                 stride=args.stride)
        trajectory = Trajectory(record.timestamps, poses)
        write_trajectory(out / f"{record.name}.txt", trajectory, fmt)
    logger.info(f"Wrote {len(records)} trajectories ({fmt}) to: {out}")


def cmd_eval(args) -> None:
    est_path = _require_file(args.est, "--est")
    gt_path = _require_file(args.gt, "--gt")
    out = _require_out(args)
    fmt = args.format or "kitti"
    est = read_trajectory(est_path, fmt)
    gt = read_trajectory(gt_path, fmt)

    if fmt == "kitti":
        drift = kitti_drift(est, gt, lengths=args.lengths or KITTI_LENGTHS, step=args.step,
                            aggregate=args.aggregate, frame_rate=args.frame_rate)
        summary = pd.DataFrame({"metric": ["t_rel_percent", "r_rel_deg_per_100m"],
                                "value": [drift.t_rel, drift.r_rel]})
        export_csv(drift.per_length, out.with_name(out.stem + "_per_length.csv"))
    else:
        rmse = tum_rmse_drift(est, gt, alignment=args.alignment)
        summary = pd.DataFrame({"metric": ["rmse_m_per_s"], "value": [rmse]})
    export_csv(summary, out)
    logger.info(f"Metrics written to: {out}")


def cmd_saliency(args) -> None:
    checkpoint = _require_file(args.checkpoint, "--checkpoint")
    data = _require_file(args.data, "--data")
    out = _require_out(args)
    config = _load_config(args)
    params = load_checkpoint(checkpoint)
    config = config.with_overrides(preset=params.spec.preset)
    record = load_dataset(data)[0]
    _check_frames(params.spec, [record])

    frames = record.frames[:config.window_length]
    target = args.target if args.target is not None else len(frames) - 1
    maps = saliency_map(params, frames, target, config)
    for i, values in enumerate(maps):
        write_blob(out / f"saliency_{i:06d}.votb", values)
    logger.info(f"Wrote {len(maps)} saliency maps to: {out}")


def cmd_plot_data(args) -> None:
    est_path = _require_file(args.est, "--est")
    gt_path = _require_file(args.gt, "--gt")
    out = _require_out(args)
    fmt = args.format or "kitti"
    est = read_trajectory(est_path, fmt)
    gt = read_trajectory(gt_path, fmt)

    drift = kitti_drift(est, gt, lengths=args.lengths or KITTI_LENGTHS, step=args.step,
                        aggregate=args.aggregate, frame_rate=args.frame_rate)
    by_speed = error_vs_speed(drift.segments, bins=args.speed_bins, aggregate=args.aggregate)
    export_csv(drift.per_length, out / "error_vs_length.csv")
    export_csv(by_speed, out / "error_vs_speed.csv")

    if args.figures:
        from src.evaluation.plots import plot_drift_table, plot_trajectories

        if not drift.per_length.empty:
            plot_drift_table(drift.per_length, "length", out / "error_vs_length.png", "Path length (m)")
            plot_drift_table(by_speed, "speed", out / "error_vs_speed.png", "Speed (m/s)")
        plot_trajectories(est.poses, gt.poses, out / "trajectory.png")


COMMANDS = {
    "synth-data": cmd_synth_data,
    "train": cmd_train,
    "infer": cmd_infer,
    "eval": cmd_eval,
    "saliency": cmd_saliency,
    "plot-data": cmd_plot_data,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vo", description="Adaptive-memory visual odometry experiments")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Logging verbosity (default: INFO)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *flags):
        if "config" in flags:
            p.add_argument("--config", help="Training config JSON (default: desk preset)")
        if "data" in flags:
            p.add_argument("--data", help="Dataset directory or single sequence container")
        p.add_argument("--out", help="Output path")
        p.add_argument("--seed", type=int, help="Override the seed")
        if "model" in flags:
            p.add_argument("--preset", choices=["tiny", "desk", "kitti-shape"], help="Network preset")
            p.add_argument("--window", type=int, help="Window length")
        if "format" in flags:
            p.add_argument("--format", choices=["kitti", "tum"], help="Trajectory format (default: kitti)")
        if "metric" in flags:
            p.add_argument("--est", help="Estimated trajectory file")
            p.add_argument("--gt", help="Ground-truth trajectory file")
            p.add_argument("--lengths", type=float, nargs="+", help="Subsegment lengths in meters")
            p.add_argument("--step", type=int, default=1, help="Spacing of subsegment start frames")
            p.add_argument("--aggregate", choices=["mean", "rmse"], default="mean")
            p.add_argument("--frame-rate", type=float, default=10.0, help="Frames per second")
        return p

    p = common(sub.add_parser("synth-data", help="Render a synthetic dataset"))
    p.add_argument("--spec", help="SyntheticSequenceSpec JSON")

    common(sub.add_parser("train", help="Train a model"), "config", "data", "model")

    p = common(sub.add_parser("infer", help="Estimate trajectories"), "config", "data", "model", "format")
    p.add_argument("--checkpoint", help="Checkpoint directory")
    p.add_argument("--stride", type=int, help="Window stride (default: window length)")

    p = common(sub.add_parser("eval", help="Evaluate a trajectory"), "format", "metric")
    p.add_argument("--alignment", choices=["sim3", "se3", "none"], default="sim3",
                   help="TUM alignment (default: sim3)")

    p = common(sub.add_parser("saliency", help="Saliency maps of one window"), "config", "data", "model")
    p.add_argument("--checkpoint", help="Checkpoint directory")
    p.add_argument("--target", type=int, help="Frame whose pose is explained (default: last)")

    p = common(sub.add_parser("plot-data", help="Error-vs-length/speed tables"), "format", "metric")
    p.add_argument("--speed-bins", type=int, default=8)
    p.add_argument("--figures", action="store_true", help="Also render PNG figures")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments and run one subcommand.

    Returns:
        0 when every output was written, nonzero otherwise
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else 2

    set_global_level(getattr(logging, args.log_level))
    try:
        COMMANDS[args.command](args)
    except HANDLED_ERRORS as e:
        logger.error(f"{args.command} failed: {e}")
        return 1
    return 0


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
