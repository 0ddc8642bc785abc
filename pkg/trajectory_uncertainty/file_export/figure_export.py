r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import os
import matplotlib
import matplotlib.pyplot as plt

#: Fixed salt for the ids matplotlib writes into SVG files.
SVG_HASH_SALT = "trajectory_uncertainty"


def writeSvg(fig, path: str) -> str:
    """Save a figure as SVG without creation date and close it.

    Equal figures give byte-identical files.

    :param fig: The figure.
    :param path: Target file, parent directories are created.
    :returns: The path.
    """
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
