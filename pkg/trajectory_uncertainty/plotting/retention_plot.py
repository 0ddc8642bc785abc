r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import matplotlib.pyplot as plt
import numpy as np
from typing import Optional

from trajectory_uncertainty.evaluation.retention import RetentionCurve

DEFAULT_CURVE_FORMATS = {
    "uncertainty": {"linestyle": "solid", "linewidth": 1.5, "color": "blue"},
    "optimal": {"linestyle": "dashed", "linewidth": 1, "color": "green"},
    "random": {"linestyle": "dotted", "linewidth": 1, "color": "black"},
}


def retentionPlotter(
    ax=None,
    curves: Optional[list[RetentionCurve]] = None,
    label: str = "",
    unit: str = "m",
    argsCurves: Optional[dict] = None,
):
    """Plot of error-retention curves.

    If no axis is passed, a new figure is created. Every curve is drawn with
    the format of its mode, which can be overwritten per mode with
    ``argsCurves``.

    .. code-block:: python

        result = retentionAnalysis(ades, apes)
        (fig, ax) = retentionPlotter(None, list(result.curves.values()), label="ADE")
        writeSvg(fig, "retention_ade.svg")

    :param ax: Axis to plot on, or None.
    :param curves: Retention curves.
    :param label: Name of the error metric for the y label.
    :param unit: Unit of the error metric.
    :param argsCurves: Matplotlib Line2D properties per mode.
    :returns: figure, axis
    """
    if ax is None:
        fig, ax = plt.subplots(1, 1)
    else:
        fig = ax.get_figure()
    if argsCurves is None:
        argsCurves = {}

    for curve in curves or []:
        lineFormat = dict(DEFAULT_CURVE_FORMATS.get(curve.mode, {}))
        lineFormat.update(argsCurves.get(curve.mode, {}))
        ax.plot(curve.fractions, curve.values, label=curve.mode, **lineFormat)

    ax.set_xlabel("retention fraction")
    ax.set_ylabel(f"{label} [{unit}]" if label else f"error [{unit}]")
    ax.set_xlim([0.0, 1.0])
    ax.grid(which="both", linestyle="dashed", linewidth=0.5)
    ax.legend()
    return fig, ax


def retentionScorePlotter(ax=None, fractions=None, scores=None, label: str = "", argsScores: Optional[dict] = None):
    """Plot of the retention scores over the retention fraction.

    :param ax: Axis to plot on, or None.
    :param fractions: Fraction grid.
    :param scores: Scores on the grid.
    :param label: Legend entry.
    :param argsScores: Matplotlib Line2D properties.
    :returns: figure, axis
    """
    if ax is None:
        fig, ax = plt.subplots(1, 1)
    else:
        fig = ax.get_figure()

    lineFormat = {"linestyle": "solid", "linewidth": 1, "marker": "", "color": "red"}
    lineFormat.update(argsScores or {})
    ax.plot(np.asarray(fractions), np.asarray(scores), label=label or None, **lineFormat)
    ax.axhline(0.0, color="black", linewidth=0.5)
    ax.set_xlabel("retention fraction")
    ax.set_ylabel("retention score")
    ax.set_xlim([0.0, 1.0])
    ax.grid(which="both", linestyle="dashed", linewidth=0.5)
    if label:
        ax.legend()
    return fig, ax
