r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import logging
import dataclasses
import numpy as np
import pandas as pd
from dataclasses import dataclass
from typing import Optional
from joblib import Parallel, delayed

from trajectory_uncertainty.analysis_tools.error import TrainingDivergenceError
from trajectory_uncertainty.dataset.resampling import resample_scene
from trajectory_uncertainty.dataset.scene import DatasetSplit, PredictionWindow, Scene
from trajectory_uncertainty.dataset.splitting import split_dataset
from trajectory_uncertainty.dataset.windows import extract_windows
from trajectory_uncertainty.ensemble.deep_ensemble import predictWindows, trainMember
from trajectory_uncertainty.ensemble.predictive_entropy import ape, fpe
from trajectory_uncertainty.evaluation.displacement_error import ade, fde
from trajectory_uncertainty.experiment.config import WorkbenchConfig
from trajectory_uncertainty.predictor.gru_model import ModelParams

CROSS_METRICS = ["ADE_member1", "ADE_ensemble", "FDE_ensemble", "APE", "FPE"]


@dataclass
class PreparedDataset:
    """A resampled scene with its windows and train/test split."""

    name: str
    scene: Scene
    windows: list[PredictionWindow]
    split: DatasetSplit


def prepareDataset(name: str, scene: Scene, config: WorkbenchConfig) -> PreparedDataset:
    """Resample a scene, cut its windows and split them by track with the config seed."""
    datasetConfig = config.dataset
    resampled = resample_scene(scene, datasetConfig.rate_hz)
    windows = extract_windows(
        resampled,
        t_h_steps=datasetConfig.t_h_steps,
        t_f_steps=datasetConfig.t_f_steps,
        stride_steps=datasetConfig.stride_steps,
        neighbor_radius_m=datasetConfig.neighbor_radius_m,
        max_neighbors=datasetConfig.max_neighbors,
    )
    split = split_dataset(windows, datasetConfig.test_ratio, config.seed)
    logging.info(
        f"dataset {name}: {len(windows)} windows, {len(split.train)} train, {len(split.test)} test"
    )
    return PreparedDataset(name, resampled, windows, split)


def performanceFrame(
    members: list[ModelParams],
    windows: list[PredictionWindow],
    config: WorkbenchConfig,
    mode: str = "ensemble",
) -> tuple[pd.DataFrame, list]:
    """Per-window ADE, FDE, APE and FPE of an ensemble or an MC-dropout model.

    For an ensemble the ADE of the first member is added as ``ADE_member1``.

    :returns: (table, predictions).
    """
    predictions = predictWindows(
        members,
        windows,
        mode=mode,
        K=config.ensemble.K,
        seed=config.seed,
        variance_floor=config.ensemble.variance_floor,
    )
    frame = pd.DataFrame(
        {
            "window_id": [window.window_id for window in windows],
            "ADE": [ade(p.mean, w.future) for p, w in zip(predictions, windows)],
            "FDE": [fde(p.mean, w.future) for p, w in zip(predictions, windows)],
            "APE": [ape(p) for p in predictions],
            "FPE": [fpe(p) for p in predictions],
        }
    )
    if mode == "ensemble":
        frame["ADE_member1"] = [
            ade(p.member_predictions[0], w.future) for p, w in zip(predictions, windows)
        ]
    return frame, predictions


@dataclass
class CrossMatrix:
    """Train-on-row, test-on-column results of a dataset family.

    ``matrices`` maps every name of ``CROSS_METRICS`` to an N x N array.
    """

    names: list[str]
    matrices: dict

    def getSize(self) -> int:
        return len(self.names)

    def toFrame(self) -> pd.DataFrame:
        """Long table metric, train, test, value in metric, row, column order."""
        rows = []
        for metric in CROSS_METRICS:
            for i, train in enumerate(self.names):
                for j, test in enumerate(self.names):
                    rows.append({"metric": metric, "train": train, "test": test, "value": self.matrices[metric][i, j]})
        return pd.DataFrame(rows, columns=["metric", "train", "test", "value"])


def _trainJob(windows, trainingConfig, datasetIndex: int, member: int) -> ModelParams:
    try:
        return trainMember(windows, trainingConfig, member)
    except TrainingDivergenceError as error:
        raise TrainingDivergenceError(f"dataset {datasetIndex}, {error.message}") from error


def trainFamilyEnsembles(
    prepared: list[PreparedDataset],
    config: WorkbenchConfig,
    pretrained: Optional[dict] = None,
) -> list[list[ModelParams]]:
    """Train one ensemble per dataset on its training subset.

    All (dataset, member) jobs run in one joblib pool. Member k of every
    dataset uses seed ``config.seed + k``.

    :param pretrained: Optional dataset index -> members, reused instead of training.
    """
    pretrained = pretrained or {}
    trainingConfig = config.getTrainingConfig()
    jobs = [
        (i, k)
        for i in range(len(prepared))
        if i not in pretrained
        for k in range(config.ensemble.K)
    ]
    trained = Parallel(n_jobs=config.getJobs())(
        delayed(_trainJob)(
            prepared[i].split.train,
            dataclasses.replace(trainingConfig, seed=trainingConfig.seed + k),
            i,
            k,
        )
        for i, k in jobs
    )
    ensembles = [list(pretrained[i]) if i in pretrained else [] for i in range(len(prepared))]
    for (i, _), params in zip(jobs, trained):
        ensembles[i].append(params)
    return ensembles


def run_cross_dataset(
    datasets: list[tuple[str, Scene]],
    config: WorkbenchConfig,
    pretrained: Optional[dict] = None,
) -> CrossMatrix:
    """Cross-dataset protocol.

    Every dataset is split into training and test windows. An ensemble
    trained on the training subset of dataset i is evaluated on the test
    subset of every dataset j; entry (i, j) of each matrix holds the mean
    over the test windows of j.

    .. code-block:: python

        family = generate_dataset_family(GeneratorConfig(), [{"name": "slow"}, {"name": "fast", "speed_scale": 2.0}])
        cross = run_cross_dataset(family, WorkbenchConfig())
        cross.matrices["ADE_ensemble"]

    :param datasets: (name, scene) pairs, at least two.
    :param config: Workbench configuration.
    :param pretrained: Optional dataset index -> already trained members.
    :returns: The matrices.
    :raises ValueError: For fewer than two datasets or duplicate names.
    :raises TrainingDivergenceError: Naming the dataset and member that diverged.
    """
    names = [name for name, _ in datasets]
    if len(datasets) < 2:
        raise ValueError(f"the cross-dataset protocol needs at least 2 datasets, got {len(datasets)}")
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate dataset names in {names}")

    prepared = [prepareDataset(name, scene, config) for name, scene in datasets]
    ensembles = trainFamilyEnsembles(prepared, config, pretrained)
    return evaluateCross(prepared, ensembles, config)


def evaluateCross(
    prepared: list[PreparedDataset], ensembles: list[list[ModelParams]], config: WorkbenchConfig
) -> CrossMatrix:
    size = len(prepared)
    matrices = {metric: np.full((size, size), np.nan) for metric in CROSS_METRICS}
    for i, members in enumerate(ensembles):
        for j, target in enumerate(prepared):
            if len(target.split.test) == 0:
                continue
            (frame, _) = performanceFrame(members, target.split.test, config)
            matrices["ADE_member1"][i, j] = frame["ADE_member1"].mean()
            matrices["ADE_ensemble"][i, j] = frame["ADE"].mean()
            matrices["FDE_ensemble"][i, j] = frame["FDE"].mean()
            matrices["APE"][i, j] = frame["APE"].mean()
            matrices["FPE"][i, j] = frame["FPE"].mean()
        logging.info(f"cross evaluation of the ensemble trained on {prepared[i].name} done")
    return CrossMatrix([dataset.name for dataset in prepared], matrices)


def comprehensive_performance(cross: CrossMatrix) -> pd.DataFrame:
    """Mean of every matrix over test sets per training set and over training sets per test set.

    :returns: Table metric, role ("train" or "test"), dataset, value.
    """
    rows = []
    for metric in CROSS_METRICS:
        matrix = cross.matrices[metric]
        for role, means in [("train", np.nanmean(matrix, axis=1)), ("test", np.nanmean(matrix, axis=0))]:
            for name, value in zip(cross.names, means):
                rows.append({"metric": metric, "role": role, "dataset": name, "value": float(value)})
    return pd.DataFrame(rows, columns=["metric", "role", "dataset", "value"])
