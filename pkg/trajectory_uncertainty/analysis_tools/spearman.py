r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import numpy as np
from scipy.stats import rankdata


def rankVector(values) -> np.ndarray:
    """Ranks starting at 1, tied values share their average rank."""
    return rankdata(np.asarray(values, dtype=float), method="average")


def spearman(x, y) -> float:
    """Spearman rank correlation coefficient.

    Computed as the covariance of the average ranks divided by the product
    of their standard deviations. Without ties this equals
    ``1 - 6 * sum(d**2) / (n * (n**2 - 1))``.

    .. code-block:: python

        spearman([1, 2, 3, 4, 5], [2, 1, 4, 3, 5])  # 0.8

    :param x: First sample.
    :param y: Second sample, same length.
    :returns: rho in [-1, 1].
    :raises ValueError: For a length mismatch, fewer than 3 values, non-finite
        values or a constant sample.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("spearman needs two 1D samples of equal length")
    if len(x) < 3:
        raise ValueError(f"spearman needs at least 3 values, got {len(x)}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("spearman needs finite values")

    xRanks = rankVector(x)
    yRanks = rankVector(y)
    xCentered = xRanks - xRanks.mean()
    yCentered = yRanks - yRanks.mean()
    denominator = np.sqrt(np.sum(xCentered**2) * np.sum(yCentered**2))
    if denominator == 0:
        raise ValueError("spearman is undefined for a constant sample")
    return float(np.clip(np.sum(xCentered * yCentered) / denominator, -1.0, 1.0))
