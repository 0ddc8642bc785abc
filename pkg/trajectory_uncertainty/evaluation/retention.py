r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import numpy as np
import pandas as pd
from dataclasses import dataclass
from scipy.integrate import trapezoid

RETENTION_MODES = ["uncertainty", "optimal", "random"]
#: Denominators below this value give a retention score of 0.
SCORE_DENOMINATOR_EPS = 1e-12


@dataclass
class RetentionCurve:
    """Error of the retained predictions over the retained fraction.

    ``fractions`` is the grid k/N, k = 0..N, ``values`` the sum of the
    retained errors divided by N.
    """

    fractions: np.ndarray
    values: np.ndarray
    mode: str


def retention_curve(errors, uncertainties, mode: str = "uncertainty") -> RetentionCurve:
    """Error-retention curve.

    At fraction k/N the k retained windows are those of lowest uncertainty
    (``"uncertainty"``), of lowest error (``"optimal"``); the others are
    replaced by their ground truth and contribute no error. The
    ``"random"`` curve is the expectation k/N times the mean error. Ties
    are broken by ascending window index.

    .. code-block:: python

        curve = retention_curve([1, 2, 3, 4], [0.1, 0.2, 0.3, 0.4])
        curve.values[2]  # (1 + 2) / 4

    :param errors: Per-window errors, non-negative.
    :param uncertainties: Per-window uncertainty scalars.
    :param mode: One of "uncertainty", "optimal", "random".
    :returns: The curve.
    :raises ValueError: For a length mismatch, no windows, negative errors or
        an unknown mode.
    """
    errors = np.asarray(errors, dtype=float)
    uncertainties = np.asarray(uncertainties, dtype=float)
    if errors.shape != uncertainties.shape or errors.ndim != 1:
        raise ValueError("errors and uncertainties must be 1D lists of equal length")
    if len(errors) == 0:
        raise ValueError("a retention curve needs at least one window")
    if np.any(errors < 0):
        raise ValueError("errors must not be negative")

    numberOfWindows = len(errors)
    fractions = np.arange(numberOfWindows + 1) / numberOfWindows
    indices = np.arange(numberOfWindows)
    if mode == "uncertainty":
        order = np.lexsort((indices, uncertainties))
    elif mode == "optimal":
        order = np.lexsort((indices, errors))
    elif mode == "random":
        return RetentionCurve(fractions, fractions * np.mean(errors), mode)
    else:
        raise ValueError(f"unknown retention mode {mode!r}, expected one of {RETENTION_MODES}")

    values = np.concatenate([[0.0], np.cumsum(errors[order])]) / numberOfWindows
    return RetentionCurve(fractions, values, mode)


def retention_auc(curve: RetentionCurve) -> float:
    """Trapezoidal area under a retention curve, in meters."""
    return float(trapezoid(curve.values, curve.fractions))


def retention_scores(
    u_curve: RetentionCurve, o_curve: RetentionCurve, r_curve: RetentionCurve
) -> np.ndarray:
    """Retention score at every fraction.

    ``(random - uncertainty) / (random - optimal)``, 1 for a perfect
    uncertainty ordering; 0 where the denominator is below 1e-12.

    :raises ValueError: If the fraction grids differ.
    """
    if not (
        np.array_equal(u_curve.fractions, o_curve.fractions)
        and np.array_equal(u_curve.fractions, r_curve.fractions)
    ):
        raise ValueError("retention curves do not share a fraction grid")
    denominator = r_curve.values - o_curve.values
    safe = np.where(denominator < SCORE_DENOMINATOR_EPS, 1.0, denominator)
    return np.where(denominator < SCORE_DENOMINATOR_EPS, 0.0, (r_curve.values - u_curve.values) / safe)


@dataclass
class RetentionResult:
    curves: dict
    aucs: dict
    scores: np.ndarray


def retentionAnalysis(errors, uncertainties) -> RetentionResult:
    """Curves of all three modes, their AUCs and the retention scores."""
    curves = {mode: retention_curve(errors, uncertainties, mode) for mode in RETENTION_MODES}
    return RetentionResult(
        curves=curves,
        aucs={mode: retention_auc(curve) for mode, curve in curves.items()},
        scores=retention_scores(curves["uncertainty"], curves["optimal"], curves["random"]),
    )


def curvesFrame(curves: list[RetentionCurve], **labels) -> pd.DataFrame:
    """Long table mode, fraction, value; ``labels`` become leading constant columns."""
    frames = []
    for curve in curves:
        frame = pd.DataFrame({"mode": curve.mode, "fraction": curve.fractions, "value": curve.values})
        for position, (column, value) in enumerate(labels.items()):
            frame.insert(position, column, value)
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)


def scoresFrame(fractions: np.ndarray, scores: np.ndarray, **labels) -> pd.DataFrame:
    frame = pd.DataFrame({"fraction": fractions, "score": scores})
    for position, (column, value) in enumerate(labels.items()):
        frame.insert(position, column, value)
    return frame
