r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import logging
import dataclasses
import numpy as np
import pandas as pd
from dataclasses import dataclass
from joblib import Parallel, delayed

from trajectory_uncertainty.analysis_tools.error import TrainingDivergenceError
from trajectory_uncertainty.dataset.scene import PredictionWindow
from trajectory_uncertainty.predictor.gru_model import (
    ModelParams,
    WindowBatch,
    dropoutMasks,
    forwardBatch,
)
from trajectory_uncertainty.predictor.training import TrainingConfig, train

DEFAULT_MEMBERS = 5
VARIANCE_FLOOR = 1e-6


@dataclass
class EnsemblePrediction:
    """Aggregate of K member predictions of one window.

    :param mean: (t_f, 2) arithmetic member mean.
    :param var_x: (t_f,) sample variance of the x coordinates, floored.
    :param var_y: (t_f,) sample variance of the y coordinates, floored.
    :param member_predictions: (K, t_f, 2) member positions.
    """

    mean: np.ndarray
    var_x: np.ndarray
    var_y: np.ndarray
    member_predictions: np.ndarray

    @property
    def positions(self) -> np.ndarray:
        return self.mean

    def getNumberOfMembers(self) -> int:
        return len(self.member_predictions)


def aggregate(memberPositions: np.ndarray, variance_floor: float = VARIANCE_FLOOR) -> EnsemblePrediction:
    """Mean and per-coordinate sample variance (divisor K - 1) of member predictions.

    :param memberPositions: Array (K, t_f, 2) with K >= 2.
    :param variance_floor: Lower bound of every variance.
    :returns: The aggregate.
    """
    memberPositions = np.asarray(memberPositions, dtype=float)
    if len(memberPositions) < 2:
        raise ValueError(f"an ensemble needs at least 2 members, got {len(memberPositions)}")
    variances = np.maximum(np.var(memberPositions, axis=0, ddof=1), variance_floor)
    return EnsemblePrediction(
        mean=memberPositions.mean(axis=0),
        var_x=variances[:, 0],
        var_y=variances[:, 1],
        member_predictions=memberPositions,
    )


def trainMember(windows: list[PredictionWindow], config: TrainingConfig, member: int) -> ModelParams:
    logging.info(f"ensemble member {member}: training with seed {config.seed}")
    try:
        params = train(windows, config)
    except TrainingDivergenceError as error:
        raise TrainingDivergenceError(f"ensemble member {member}: {error.message}") from error
    logging.info(f"ensemble member {member}: final loss {params.lossHistory[-1]:.6g}")
    return params


def train_ensemble(
    windows: list[PredictionWindow],
    config: TrainingConfig,
    K: int = DEFAULT_MEMBERS,
    n_jobs: int = 1,
) -> list[ModelParams]:
    """Train K independent members.

    Member k is trained with seed ``config.seed + k``, which sets both its
    initialization and its shuffle order. Members do not share state, so the
    result is the same for any number of jobs.

    .. code-block:: python

        members = train_ensemble(split.train, TrainingConfig(seed=10), K=5, n_jobs=5)

    :param windows: Training windows.
    :param config: Training configuration of the members.
    :param K: Number of members, at least 2.
    :param n_jobs: joblib workers.
    :returns: The member parameters in member order.
    :raises ValueError: For K < 2.
    :raises TrainingDivergenceError: If a member diverges; the message names it.
    """
    if K < 2:
        raise ValueError(f"an ensemble needs at least 2 members, got K={K}")
    configs = [dataclasses.replace(config, seed=config.seed + k) for k in range(K)]
    return Parallel(n_jobs=n_jobs)(
        delayed(trainMember)(windows, memberConfig, k) for k, memberConfig in enumerate(configs)
    )


def ensembleMemberPositions(members: list[ModelParams], windows: list[PredictionWindow]) -> np.ndarray:
    """Dropout-free member predictions (K, N, t_f, 2) of all windows."""
    batch = WindowBatch.fromWindows(windows)
    return np.array([forwardBatch(params, batch)[0] for params in members])


def mcDropoutPositions(
    params: ModelParams, windows: list[PredictionWindow], K: int, seed: int
) -> np.ndarray:
    """Stochastic passes (K, N, t_f, 2); pass k draws its mask from seed + k.

    All windows of a pass share the mask, so the passes of a window do not
    depend on the other windows of the call.
    """
    if params.dropout_rate <= 0:
        raise ValueError("MC dropout needs a model with a positive dropout rate")
    if K < 2:
        raise ValueError(f"MC dropout needs at least 2 passes, got K={K}")
    batch = WindowBatch.fromWindows(windows)
    passes = []
    for k in range(K):
        masks = dropoutMasks(params, 1, batch.getFutureSteps(), seed + k)
        passes.append(forwardBatch(params, batch, masks)[0])
    return np.array(passes)


def ensemble_predict(
    members: list[ModelParams], window: PredictionWindow, variance_floor: float = VARIANCE_FLOOR
) -> EnsemblePrediction:
    """Deep-ensemble prediction of one window.

    :param members: At least two trained members.
    :param window: The window.
    :param variance_floor: Lower bound of every variance.
    :returns: The aggregate of the dropout-free member predictions.
    """
    if len(members) < 2:
        raise ValueError(f"an ensemble needs at least 2 members, got {len(members)}")
    return aggregate(ensembleMemberPositions(members, [window])[:, 0], variance_floor)


def mc_dropout_predict(
    params: ModelParams,
    window: PredictionWindow,
    K: int = DEFAULT_MEMBERS,
    seed: int = 0,
    variance_floor: float = VARIANCE_FLOOR,
) -> EnsemblePrediction:
    """MC-dropout prediction of one window.

    K stochastic forward passes with dropout on, pass k using mask seed
    ``seed + k``, aggregated as :func:`ensemble_predict` does.

    :param params: A model with dropout rate > 0.
    :param window: The window.
    :param K: Number of passes.
    :param seed: Base mask seed.
    :param variance_floor: Lower bound of every variance.
    :returns: The aggregate.
    :raises ValueError: For a model without dropout.
    """
    return aggregate(mcDropoutPositions(params, [window], K, seed)[:, 0], variance_floor)


def predictWindows(
    members: list[ModelParams],
    windows: list[PredictionWindow],
    mode: str = "ensemble",
    K: int = DEFAULT_MEMBERS,
    seed: int = 0,
    variance_floor: float = VARIANCE_FLOOR,
) -> list[EnsemblePrediction]:
    """Aggregated predictions of many windows in one batched pass per member.

    :param members: Ensemble members, or a single dropout model for ``mode="mc_dropout"``.
    :param windows: The windows, all with equal history and future length.
    :param mode: "ensemble" or "mc_dropout".
    :returns: One prediction per window, equal to the single-window functions.
    """
    if len(windows) == 0:
        return []
    if mode == "ensemble":
        if len(members) < 2:
            raise ValueError(f"an ensemble needs at least 2 members, got {len(members)}")
        positions = ensembleMemberPositions(members, windows)
    elif mode == "mc_dropout":
        positions = mcDropoutPositions(members[0], windows, K, seed)
    else:
        raise ValueError(f"unknown prediction mode {mode!r}")
    return [aggregate(positions[:, i], variance_floor) for i in range(len(windows))]


def predictionTable(windows: list[PredictionWindow], predictions: list[EnsemblePrediction]) -> pd.DataFrame:
    """Prediction dump with one row per window and future step."""
    if len(windows) != len(predictions):
        raise ValueError("windows and predictions differ in length")
    rows = []
    for window, prediction in zip(windows, predictions):
        for step in range(len(prediction.mean)):
            rows.append(
                {
                    "window_id": window.window_id,
                    "step": step + 1,
                    "mean_x": prediction.mean[step, 0],
                    "mean_y": prediction.mean[step, 1],
                    "var_x": prediction.var_x[step],
                    "var_y": prediction.var_y[step],
                }
            )
    return pd.DataFrame(rows, columns=["window_id", "step", "mean_x", "mean_y", "var_x", "var_y"])
