"""CSV emission for metric tables, loss histories and trajectories."""

from pathlib import Path
from typing import Optional, Union

import pandas as pd

from src.geometry import matrix_to_quat
from src.ingestion.pose_files import Trajectory

FLOAT_FORMAT = "%.9g"
TRAJECTORY_COLUMNS = ["stamp", "tx", "ty", "tz", "qx", "qy", "qz", "qw"]


def export_csv(table: pd.DataFrame, path: Optional[Union[str, Path]] = None) -> str:
    """
    Render a table as CSV: header row, column order kept, 9 significant digits.

    Args:
        table: Table to write
        path: Also write the text here when given

    Returns:
        The CSV text
    """
    text = table.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf8")
    return text


def trajectory_table(trajectory: Trajectory) -> pd.DataFrame:
    rows = [
        (stamp, *pose.translation, *matrix_to_quat(pose.rotation))
        for stamp, pose in zip(trajectory.stamps, trajectory.poses)
    ]
    return pd.DataFrame(rows, columns=TRAJECTORY_COLUMNS)
