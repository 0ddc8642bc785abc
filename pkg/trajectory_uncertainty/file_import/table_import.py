r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import pandas as pd

from trajectory_uncertainty.analysis_tools.error import TrackFormatError

#: Columns that always hold identifiers or labels.
TEXT_COLUMNS = [
    "window_id",
    "scene_id",
    "track_id",
    "agent_type",
    "behavior",
    "compliance",
    "location_stage",
    "mode",
    "method",
    "subset",
    "train",
    "test",
]


def readTable(path: str, required: list[str] = ()) -> pd.DataFrame:
    """Read a CSV table written by :func:`writeTable`.

    Identifier and label columns are read as text, numbers with exact
    round-trip precision.

    :param path: Path to the CSV file.
    :param required: Columns that must be present.
    :returns: The table.
    :raises TrackFormatError: If a required column is missing.
    """
    header = pd.read_csv(path, nrows=0).columns
    frame = pd.read_csv(
        path,
        dtype={column: str for column in TEXT_COLUMNS if column in header},
        keep_default_na=False,
        na_values=[""],
        float_precision="round_trip",
    )
    missing = [column for column in required if column not in frame.columns]
    if missing:
        raise TrackFormatError(f"missing column(s) {missing} in {path}")
    return frame
