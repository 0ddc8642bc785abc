r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import matplotlib.pyplot as plt
import numpy as np


def histogramPlotter(ax=None, samples=None, feature: str = "", bins: int = 30, argsHistogram=None):
    """Overlaid density histograms of one feature for several datasets.

    All datasets share the same bin edges.

    :param ax: Axis to plot on, or None.
    :param samples: Dictionary dataset name -> values.
    :param feature: Feature name for the x label.
    :param bins: Number of bins.
    :param argsHistogram: Additional matplotlib hist properties.
    :returns: figure, axis
    """
    if ax is None:
        fig, ax = plt.subplots(1, 1)
    else:
        fig = ax.get_figure()

    histogramFormat = {"histtype": "step", "linewidth": 1.2, "density": True}
    histogramFormat.update(argsHistogram or {})

    cleaned = {}
    for name, values in (samples or {}).items():
        values = np.asarray(values, dtype=float)
        cleaned[name] = values[np.isfinite(values)]
    pooled = np.concatenate(list(cleaned.values())) if cleaned else np.zeros(0)
    if pooled.size > 0:
        low, high = float(pooled.min()), float(pooled.max())
        if high <= low:
            high = low + 1.0
        edges = np.linspace(low, high, bins + 1)
        for name, values in cleaned.items():
            if values.size > 0:
                ax.hist(values, bins=edges, label=name, **histogramFormat)

    ax.set_xlabel(feature)
    ax.set_ylabel("density")
    ax.grid(which="both", linestyle="dashed", linewidth=0.5)
    if cleaned:
        ax.legend()
    return fig, ax
