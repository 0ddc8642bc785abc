r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import logging
import numpy as np
from dataclasses import dataclass
from typing import Optional

from trajectory_uncertainty.analysis_tools.error import (
    TrainingDivergenceError,
    TrajectoryUncertaintyError,
)
from trajectory_uncertainty.dataset.scene import PredictionWindow
from trajectory_uncertainty.predictor.gru_model import (
    DEFAULT_HIDDEN_SIZE,
    ModelParams,
    WindowBatch,
    dropoutMasks,
    init_model,
    lossAndGradientsBatch,
)

#: L2 coefficient used for dropout models when none is configured.
DROPOUT_L2_COEFFICIENT = 1e-4


@dataclass(frozen=True)
class TrainingConfig:
    """Optimizer and model settings of one training run.

    ``l2_coefficient`` None selects 1e-4 for dropout models and 0 otherwise.
    """

    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    batch_size: int = 64
    epochs: int = 30
    l2_coefficient: Optional[float] = None
    seed: int = 0
    hidden_size: int = DEFAULT_HIDDEN_SIZE
    dropout_rate: float = 0.0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be at least 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be at least 1, got {self.batch_size}")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ValueError("Adam decay rates must be in [0, 1)")
        if self.l2_coefficient is not None and self.l2_coefficient < 0:
            raise ValueError(f"l2_coefficient must not be negative, got {self.l2_coefficient}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError(f"dropout_rate must be in [0, 1), got {self.dropout_rate}")
        return

    def getL2Coefficient(self, dropoutRate: Optional[float] = None) -> float:
        if self.l2_coefficient is not None:
            return self.l2_coefficient
        if dropoutRate is None:
            dropoutRate = self.dropout_rate
        return DROPOUT_L2_COEFFICIENT if dropoutRate > 0 else 0.0


class AdamOptimizer:
    """Adam with bias-corrected moment estimates, one state per tensor."""

    def __init__(self, params: ModelParams, config: TrainingConfig):
        self.config = config
        self.step = 0
        self.firstMoments = {name: np.zeros_like(t) for name, t in params.tensors.items()}
        self.secondMoments = {name: np.zeros_like(t) for name, t in params.tensors.items()}
        return

    def update(self, params: ModelParams, grads: dict):
        config = self.config
        self.step += 1
        firstCorrection = 1.0 - config.beta1**self.step
        secondCorrection = 1.0 - config.beta2**self.step
        for name, tensor in params.tensors.items():
            m = self.firstMoments[name]
            v = self.secondMoments[name]
            m *= config.beta1
            m += (1.0 - config.beta1) * grads[name]
            v *= config.beta2
            v += (1.0 - config.beta2) * grads[name] ** 2
            tensor -= (
                config.learning_rate
                * (m / firstCorrection)
                / (np.sqrt(v / secondCorrection) + config.epsilon)
            )
        return


def batchIndices(numberOfWindows: int, batchSize: int, seed: int, epoch: int) -> list[np.ndarray]:
    """Shuffled mini-batch indices of one epoch; the last batch may be smaller."""
    order = np.random.default_rng([seed, epoch]).permutation(numberOfWindows)
    return [order[start : start + batchSize] for start in range(0, numberOfWindows, batchSize)]


def train(windows: list[PredictionWindow], config: TrainingConfig) -> ModelParams:
    """Train a model with Adam on shuffled mini-batches.

    The model is initialized with ``config.seed``. The shuffle order of every
    epoch and the dropout masks of every batch are derived from the seed, so
    a run is bit-reproducible for the same data and configuration.

    .. code-block:: python

        params = train(split.train, TrainingConfig(epochs=30, seed=3))
        print(params.lossHistory[-1])

    :param windows: Training windows, at least ``config.batch_size``.
    :param config: Training configuration.
    :returns: The trained parameters, with the per-epoch mean loss in ``lossHistory``.
    :raises ValueError: For too few windows.
    :raises TrainingDivergenceError: If the loss becomes non-finite.
    """
    if len(windows) < config.batch_size:
        raise ValueError(
            f"training needs at least batch_size={config.batch_size} windows, got {len(windows)}"
        )
    data = WindowBatch.fromWindows(windows)
    params = init_model(config.seed, config.hidden_size, config.dropout_rate)
    optimizer = AdamOptimizer(params, config)
    l2Coefficient = config.getL2Coefficient()

    for epoch in range(config.epochs):
        epochLoss = 0.0
        for batchIndex, indices in enumerate(batchIndices(len(data), config.batch_size, config.seed, epoch)):
            batch = data.subset(indices)
            masks = None
            if params.dropout_rate > 0:
                masks = dropoutMasks(
                    params, len(batch), batch.getFutureSteps(), [config.seed, epoch, batchIndex]
                )
            try:
                (loss, grads) = lossAndGradientsBatch(params, batch, l2Coefficient, masks)
                optimizer.update(params, grads)
                if not params.isFinite():
                    raise TrainingDivergenceError("non-finite parameters after update")
            except TrajectoryUncertaintyError as error:
                message = f"training diverged in epoch {epoch}, batch {batchIndex}: {error.message}"
                logging.error(message)
                raise TrainingDivergenceError(message) from error
            epochLoss += loss * len(batch)

        params.lossHistory.append(epochLoss / len(data))
        logging.info(f"epoch {epoch + 1}/{config.epochs}: training loss {params.lossHistory[-1]:.6g}")
    return params
