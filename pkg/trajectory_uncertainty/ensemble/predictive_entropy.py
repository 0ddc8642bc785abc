r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import numpy as np

from trajectory_uncertainty.ensemble.deep_ensemble import EnsemblePrediction

#: Entropy of a unit-variance 2D Gaussian, ln(2 pi) + 1.
UNIT_ENTROPY = np.log(2.0 * np.pi) + 1.0


def stepEntropies(pred: EnsemblePrediction) -> np.ndarray:
    """Entropy in nats of the axis-independent Gaussian of every future step."""
    return UNIT_ENTROPY + 0.5 * np.log(pred.var_x * pred.var_y)


def ape(pred: EnsemblePrediction) -> float:
    """Average predictive entropy over all future steps, in nats.

    :param pred: Prediction with floored variances.
    :returns: The mean of :func:`stepEntropies`.
    """
    return float(np.mean(stepEntropies(pred)))


def fpe(pred: EnsemblePrediction) -> float:
    """Final predictive entropy, the entropy of the last future step, in nats."""
    return float(stepEntropies(pred)[-1])
