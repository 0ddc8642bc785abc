r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import matplotlib.pyplot as plt
import numpy as np
from matplotlib import colormaps
from matplotlib.colors import Normalize
from matplotlib.patches import Rectangle


def cellId(row: int, column: int) -> str:
    return f"cell_{row}_{column}"


def matrixPlotter(ax=None, matrix=None, names=None, title: str = "", colormap: str = "viridis"):
    """Heatmap of a train-on-row, test-on-column matrix.

    Every cell is a rectangle with the SVG id ``cell_<row>_<column>`` and
    its value printed in the center. Rows are drawn from top to bottom.

    .. code-block:: python

        (fig, ax) = matrixPlotter(None, cross.matrices["ADE_ensemble"], cross.names, "ADE")
        writeSvg(fig, "cross_ADE_ensemble.svg")

    :param ax: Axis to plot on, or None.
    :param matrix: Square array.
    :param names: Dataset names of the rows and columns.
    :param title: Title of the axis.
    :param colormap: Name of a matplotlib colormap.
    :returns: figure, axis
    """
    if ax is None:
        fig, ax = plt.subplots(1, 1)
    else:
        fig = ax.get_figure()

    matrix = np.asarray(matrix, dtype=float)
    size = len(matrix)
    finite = matrix[np.isfinite(matrix)]
    norm = Normalize(
        vmin=float(finite.min()) if finite.size else 0.0,
        vmax=float(finite.max()) if finite.size else 1.0,
    )
    cmap = colormaps[colormap]

    for row in range(size):
        for column in range(size):
            value = matrix[row, column]
            color = cmap(norm(value)) if np.isfinite(value) else (0.8, 0.8, 0.8, 1.0)
            cell = Rectangle((column, size - 1 - row), 1.0, 1.0, facecolor=color, edgecolor="white")
            cell.set_gid(cellId(row, column))
            ax.add_patch(cell)
            ax.text(
                column + 0.5,
                size - 0.5 - row,
                f"{value:.3g}",
                ha="center",
                va="center",
                color="white" if norm(value) < 0.5 else "black",
            )

    ax.set_xlim([0, size])
    ax.set_ylim([0, size])
    ax.set_xticks(np.arange(size) + 0.5)
    ax.set_yticks(np.arange(size) + 0.5)
    if names is not None:
        ax.set_xticklabels(names)
        ax.set_yticklabels(list(reversed(names)))
    ax.set_xlabel("test dataset")
    ax.set_ylabel("training dataset")
    ax.set_aspect("equal")
    if title:
        ax.set_title(title)
    return fig, ax
