r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import logging
import numpy as np
import pandas as pd
from typing import Optional

from trajectory_uncertainty.dataset.scene import DatasetSplit, PredictionWindow
from trajectory_uncertainty.ensemble.deep_ensemble import ensembleMemberPositions, train_ensemble
from trajectory_uncertainty.evaluation.displacement_error import ade, fde
from trajectory_uncertainty.experiment.config import WorkbenchConfig
from trajectory_uncertainty.experiment.cross_dataset import performanceFrame
from trajectory_uncertainty.predictor.gru_model import ModelParams
from trajectory_uncertainty.predictor.training import train

METHODS = ["single", "mc_dropout", "ensemble"]
SUBSETS = ["train", "test"]
COMPARISON_COLUMNS = ["method", "subset", "ADE", "FDE", "APE", "FPE"]


def trainDropoutModel(windows: list[PredictionWindow], config: WorkbenchConfig) -> ModelParams:
    """The MC-dropout model: dropout rate of the model section, L2 1e-4 unless configured."""
    logging.info(f"training the MC-dropout model with dropout rate {config.model.dropout_rate}")
    return train(windows, config.getTrainingConfig(dropout_rate=config.model.dropout_rate))


def _singleRow(member: ModelParams, windows: list[PredictionWindow]) -> dict:
    positions = ensembleMemberPositions([member], windows)[0]
    return {
        "ADE": float(np.mean([ade(p, w.future) for p, w in zip(positions, windows)])),
        "FDE": float(np.mean([fde(p, w.future) for p, w in zip(positions, windows)])),
        "APE": np.nan,
        "FPE": np.nan,
    }


def _uncertainRow(models: list[ModelParams], windows: list[PredictionWindow], config, mode: str) -> dict:
    (frame, _) = performanceFrame(models, windows, config, mode=mode)
    return {metric: float(frame[metric].mean()) for metric in ["ADE", "FDE", "APE", "FPE"]}


def compare_methods(
    split: DatasetSplit,
    config: WorkbenchConfig,
    members: Optional[list[ModelParams]] = None,
    dropoutModel: Optional[ModelParams] = None,
) -> pd.DataFrame:
    """Same-dataset comparison of a single model, MC dropout and the deep ensemble.

    The single model is the first ensemble member. Each method is evaluated
    on the training and the test subset with mean ADE, FDE, APE and FPE;
    the single model has no uncertainty, its APE and FPE are NaN.

    :param split: Training and test windows.
    :param config: Workbench configuration.
    :param members: Trained ensemble members, trained here if None.
    :param dropoutModel: Trained MC-dropout model, trained here if None.
    :returns: Table with the columns method, subset, ADE, FDE, APE, FPE.
    """
    if members is None:
        members = train_ensemble(split.train, config.getTrainingConfig(), config.ensemble.K, config.getJobs())
    if dropoutModel is None:
        dropoutModel = trainDropoutModel(split.train, config)

    rows = []
    for method in METHODS:
        for subset in SUBSETS:
            windows = split.train if subset == "train" else split.test
            if len(windows) == 0:
                row = {metric: np.nan for metric in ["ADE", "FDE", "APE", "FPE"]}
            elif method == "single":
                row = _singleRow(members[0], windows)
            elif method == "mc_dropout":
                row = _uncertainRow([dropoutModel], windows, config, "mc_dropout")
            else:
                row = _uncertainRow(members, windows, config, "ensemble")
            rows.append({"method": method, "subset": subset, **row})
    return pd.DataFrame(rows, columns=COMPARISON_COLUMNS)
