r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import logging
import numpy as np
from dataclasses import dataclass
from typing import Callable, Optional

from trajectory_uncertainty.dataset.scene import AgentType, PredictionWindow
from trajectory_uncertainty.predictor.gru_model import (
    ModelParams,
    WindowBatch,
    init_model,
    lossAndGradientsBatch,
)

FINITE_DIFFERENCE_STEP = 1e-5
#: Denominator floor of the relative error, keeps near-zero gradients comparable.
RELATIVE_ERROR_FLOOR = 1e-4
GRADIENT_CHECK_L2 = 1e-3


@dataclass(frozen=True)
class GradCheckDims:
    hidden_size: int = 8
    history_steps: int = 6
    future_steps: int = 6
    batch_size: int = 4
    max_neighbors: int = 3


@dataclass
class GradCheckReport:
    """Outcome of a gradient check.

    ``worstParameter`` is (tensor name, flat index) of the largest relative error.
    """

    maxRelativeError: float
    tolerance: float
    numberOfChecks: int
    worstParameter: tuple

    @property
    def passed(self) -> bool:
        return self.maxRelativeError < self.tolerance


def randomWindows(dims: GradCheckDims, rng: np.random.Generator) -> list[PredictionWindow]:
    """Random-walk windows with a varying number of neighbors per step."""
    windows = []
    dt = 0.5
    for index in range(dims.batch_size):
        steps = rng.normal(scale=1.5, size=(dims.history_steps + dims.future_steps, 2))
        points = rng.uniform(-20.0, 20.0, size=2) + np.cumsum(np.vstack([np.zeros(2), steps]), axis=0)
        neighborStates = []
        for _ in range(dims.history_steps + 1):
            count = int(rng.integers(0, dims.max_neighbors + 1))
            neighborStates.append(rng.normal(scale=[10.0, 10.0, 2.0, 2.0], size=(count, 4)))
        t0 = dt * dims.history_steps
        windows.append(
            PredictionWindow(
                scene_id="gradient_check",
                target_track_id=f"{index:04d}",
                agent_type=AgentType.SMALL_VEHICLE,
                t0=t0,
                history_times=dt * np.arange(dims.history_steps + 1),
                history=points[: dims.history_steps + 1],
                future_times=t0 + dt * np.arange(1, dims.future_steps + 1),
                future=points[dims.history_steps + 1 :],
                neighbor_states=neighborStates,
            )
        )
    return windows


def grad_check(
    dims: Optional[GradCheckDims] = None,
    seed: int = 0,
    tolerance: float = 1e-4,
    numberOfChecks: int = 120,
    gradient_hook: Optional[Callable[[dict], dict]] = None,
) -> GradCheckReport:
    """Compare analytic gradients against central finite differences.

    A small model is initialized from ``seed`` and all its tensors,
    biases included, are perturbed so that every gate is active. The loss
    includes an L2 term. ``numberOfChecks`` distinct parameters are drawn at
    random, every tensor at least once. The relative error of a parameter is
    ``|analytic - numeric| / max(|analytic|, |numeric|, 1e-4)``.

    .. code-block:: python

        report = grad_check()
        assert report.passed

    :param dims: Model and batch dimensions, hidden size 8 by default.
    :param seed: Seed of the model, the batch and the parameter choice.
    :param tolerance: Largest accepted relative error.
    :param numberOfChecks: Number of parameters compared.
    :param gradient_hook: Optional function applied to the analytic gradients
        before the comparison.
    :returns: The report.
    """
    if dims is None:
        dims = GradCheckDims()
    rng = np.random.default_rng(seed)

    params = init_model(seed, dims.hidden_size)
    for tensor in params.tensors.values():
        tensor += rng.normal(scale=0.3, size=tensor.shape)
    batch = WindowBatch.fromWindows(randomWindows(dims, rng))

    (_, analytic) = lossAndGradientsBatch(params, batch, GRADIENT_CHECK_L2)
    if gradient_hook is not None:
        analytic = gradient_hook(analytic)

    candidates = _chooseParameters(params, numberOfChecks, rng)
    maxRelativeError = 0.0
    worstParameter = candidates[0]
    for name, flatIndex in candidates:
        numeric = _centralDifference(params, batch, name, flatIndex)
        value = analytic[name].flat[flatIndex]
        relativeError = abs(value - numeric) / max(abs(value), abs(numeric), RELATIVE_ERROR_FLOOR)
        if relativeError > maxRelativeError:
            maxRelativeError = relativeError
            worstParameter = (name, flatIndex)

    report = GradCheckReport(maxRelativeError, tolerance, len(candidates), worstParameter)
    logging.info(
        f"gradient check: max relative error {maxRelativeError:.3g} at {worstParameter}, "
        f"{'passed' if report.passed else 'failed'}"
    )
    return report


def _chooseParameters(params: ModelParams, numberOfChecks: int, rng: np.random.Generator) -> list:
    names = list(params.tensors.keys())
    sizes = np.array([params.tensors[name].size for name in names])
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    chosen = {int(offsets[i] + rng.integers(sizes[i])) for i in range(len(names))}
    remaining = np.setdiff1d(np.arange(offsets[-1]), sorted(chosen))
    extra = max(0, min(numberOfChecks - len(chosen), len(remaining)))
    chosen.update(int(i) for i in rng.choice(remaining, size=extra, replace=False))

    candidates = []
    for flat in sorted(chosen):
        tensorIndex = int(np.searchsorted(offsets, flat, side="right")) - 1
        candidates.append((names[tensorIndex], flat - int(offsets[tensorIndex])))
    return candidates


def _centralDifference(params: ModelParams, batch: WindowBatch, name: str, flatIndex: int) -> float:
    tensor = params.tensors[name]
    original = tensor.flat[flatIndex]
    tensor.flat[flatIndex] = original + FINITE_DIFFERENCE_STEP
    (lossPlus, _) = lossAndGradientsBatch(params, batch, GRADIENT_CHECK_L2)
    tensor.flat[flatIndex] = original - FINITE_DIFFERENCE_STEP
    (lossMinus, _) = lossAndGradientsBatch(params, batch, GRADIENT_CHECK_L2)
    tensor.flat[flatIndex] = original
    return (lossPlus - lossMinus) / (2.0 * FINITE_DIFFERENCE_STEP)
