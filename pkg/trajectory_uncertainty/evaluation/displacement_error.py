r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import numpy as np


def _checkedPair(pred, truth) -> tuple[np.ndarray, np.ndarray]:
    pred = np.asarray(pred, dtype=float).reshape(-1, 2)
    truth = np.asarray(truth, dtype=float).reshape(-1, 2)
    if len(pred) != len(truth):
        raise ValueError(f"prediction has {len(pred)} points, ground truth {len(truth)}")
    if len(pred) == 0:
        raise ValueError("empty trajectories")
    return pred, truth


def ade(pred, truth) -> float:
    """Average displacement error, the mean Euclidean distance over all steps in meters.

    .. code-block:: python

        ade([[3.0, 4.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]])  # 2.5

    :param pred: Predicted positions (t_f, 2).
    :param truth: Ground-truth positions (t_f, 2).
    :returns: ADE in meters.
    :raises ValueError: For a length mismatch or empty trajectories.
    """
    (pred, truth) = _checkedPair(pred, truth)
    return float(np.mean(np.hypot(*(pred - truth).T)))


def fde(pred, truth) -> float:
    """Final displacement error, the Euclidean distance at the last step in meters."""
    (pred, truth) = _checkedPair(pred, truth)
    return float(np.hypot(*(pred[-1] - truth[-1])))


def windowErrors(predictions: list, windows: list) -> tuple[np.ndarray, np.ndarray]:
    """ADE and FDE of every (prediction, window) pair.

    :param predictions: Objects with a ``positions`` array.
    :param windows: The matching windows.
    :returns: (ade array, fde array).
    """
    if len(predictions) != len(windows):
        raise ValueError("predictions and windows differ in length")
    ades = np.array([ade(p.positions, w.future) for p, w in zip(predictions, windows)])
    fdes = np.array([fde(p.positions, w.future) for p, w in zip(predictions, windows)])
    return ades, fdes
