r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import os
import pandas as pd


def writeTable(frame: pd.DataFrame, path: str) -> str:
    """Write a result table as CSV.

    Floats keep their shortest round-trip representation and lines end with
    a single newline, so equal tables give byte-identical files.

    :param frame: The table.
    :param path: Target file, parent directories are created.
    :returns: The path.
    """
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")
    return path
