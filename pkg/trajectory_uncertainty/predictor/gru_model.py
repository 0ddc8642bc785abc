r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import numpy as np
from dataclasses import dataclass, field
from typing import Optional, Sequence

from trajectory_uncertainty.analysis_tools.error import (
    TrainingDivergenceError,
    TrajectoryUncertaintyError,
)
from trajectory_uncertainty.dataset.scene import PredictionWindow

INPUT_SIZE = 6
OUTPUT_SIZE = 2
CONTEXT_SIZE = 4
DEFAULT_HIDDEN_SIZE = 64

#: Increments are divided by this length (m) before entering the network.
POSITION_SCALE = 5.0
#: Scale of the mean neighbor [rel_x, rel_y, rel_vx, rel_vy] context.
CONTEXT_SCALE = np.array([30.0, 30.0, 5.0, 5.0])

GATES = ("z", "r", "h")


def parameterShapes(hiddenSize: int) -> dict[str, tuple]:
    """Ordered names and shapes of all tensors of a model.

    Weights use the row-vector convention, a gate pre-activation is
    x @ W + h @ U + b.
    """
    shapes = {"ctx_W": (CONTEXT_SIZE, CONTEXT_SIZE), "ctx_b": (CONTEXT_SIZE,)}
    for prefix, inputSize in [("enc", INPUT_SIZE), ("dec", OUTPUT_SIZE)]:
        for gate in GATES:
            shapes[f"{prefix}_W{gate}"] = (inputSize, hiddenSize)
        for gate in GATES:
            shapes[f"{prefix}_U{gate}"] = (hiddenSize, hiddenSize)
        for gate in GATES:
            shapes[f"{prefix}_b{gate}"] = (hiddenSize,)
    shapes["out_W"] = (hiddenSize, OUTPUT_SIZE)
    shapes["out_b"] = (OUTPUT_SIZE,)
    return shapes


@dataclass
class ModelParams:
    """Parameters of the interaction-aware GRU encoder-decoder.

    ``tensors`` maps the names of :func:`parameterShapes` to arrays.
    ``lossHistory`` holds the per-epoch training loss once trained.
    """

    tensors: dict
    hidden_size: int = DEFAULT_HIDDEN_SIZE
    dropout_rate: float = 0.0
    lossHistory: list = field(default_factory=list)

    def __post_init__(self):
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError(f"dropout_rate must be in [0, 1), got {self.dropout_rate}")
        expected = parameterShapes(self.hidden_size)
        if list(self.tensors.keys()) != list(expected.keys()):
            raise ValueError("tensor names do not match the model layout")
        for name, shape in expected.items():
            if self.tensors[name].shape != shape:
                raise ValueError(f"tensor {name} has shape {self.tensors[name].shape}, expected {shape}")
        return

    def getWeightNames(self) -> list[str]:
        """Names of the weight matrices; biases are excluded from the L2 term."""
        return [name for name, tensor in self.tensors.items() if tensor.ndim == 2]

    def isFinite(self) -> bool:
        return all(np.all(np.isfinite(tensor)) for tensor in self.tensors.values())

    def copy(self) -> "ModelParams":
        return ModelParams(
            {name: tensor.copy() for name, tensor in self.tensors.items()},
            self.hidden_size,
            self.dropout_rate,
            list(self.lossHistory),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModelParams):
            return NotImplemented
        return (
            self.hidden_size == other.hidden_size
            and self.dropout_rate == other.dropout_rate
            and all(np.array_equal(self.tensors[n], other.tensors[n]) for n in self.tensors)
        )


@dataclass
class Prediction:
    """Predicted future positions, array (t_f, 2) in meters."""

    positions: np.ndarray


def init_model(
    seed: int, hidden_size: int = DEFAULT_HIDDEN_SIZE, dropout_rate: float = 0.0
) -> ModelParams:
    """Random model initialization.

    Every matrix is drawn uniformly from +-1/sqrt(fan_in), with fan_in its
    number of rows; biases start at 0. Tensors are drawn in layout order from
    one generator seeded with ``seed``.

    :param seed: Seed of the initialization.
    :param hidden_size: Size of the encoder and decoder hidden state.
    :param dropout_rate: Dropout rate of the decoder output features.
    :returns: The parameters.
    """
    rng = np.random.default_rng(seed)
    tensors = {}
    for name, shape in parameterShapes(hidden_size).items():
        if len(shape) == 2:
            bound = 1.0 / np.sqrt(shape[0])
            tensors[name] = rng.uniform(-bound, bound, size=shape)
        else:
            tensors[name] = np.zeros(shape)
    return ModelParams(tensors, hidden_size, dropout_rate)


def zeroModel(hidden_size: int = DEFAULT_HIDDEN_SIZE) -> ModelParams:
    return ModelParams(
        {name: np.zeros(shape) for name, shape in parameterShapes(hidden_size).items()},
        hidden_size,
    )


@dataclass
class WindowBatch:
    """Network inputs and targets of several windows of equal shape.

    :param increments: (B, t_h, 2) scaled history increments.
    :param context: (B, t_h, 4) scaled mean neighbor states at history steps 1..t_h.
    :param lastPositions: (B, 2) positions at t0.
    :param targets: (B, t_f, 2) ground-truth future positions.
    """

    increments: np.ndarray
    context: np.ndarray
    lastPositions: np.ndarray
    targets: np.ndarray

    @classmethod
    def fromWindows(cls, windows: Sequence[PredictionWindow]) -> "WindowBatch":
        if len(windows) == 0:
            raise ValueError("a batch needs at least one window")
        increments = []
        context = []
        for window in windows:
            increments.append(np.diff(window.history, axis=0) / POSITION_SCALE)
            means = [
                states.mean(axis=0) if len(states) > 0 else np.zeros(CONTEXT_SIZE)
                for states in window.neighbor_states[1:]
            ]
            context.append(np.array(means).reshape(-1, CONTEXT_SIZE) / CONTEXT_SCALE)
        return cls(
            increments=np.array(increments),
            context=np.array(context),
            lastPositions=np.array([window.history[-1] for window in windows]),
            targets=np.array([window.future for window in windows]),
        )

    def __len__(self) -> int:
        return len(self.increments)

    def getFutureSteps(self) -> int:
        return self.targets.shape[1]

    def subset(self, indices: np.ndarray) -> "WindowBatch":
        return WindowBatch(
            self.increments[indices],
            self.context[indices],
            self.lastPositions[indices],
            self.targets[indices],
        )


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def _gruStep(tensors: dict, prefix: str, x: np.ndarray, h: np.ndarray) -> tuple[np.ndarray, tuple]:
    z = _sigmoid(x @ tensors[f"{prefix}_Wz"] + h @ tensors[f"{prefix}_Uz"] + tensors[f"{prefix}_bz"])
    r = _sigmoid(x @ tensors[f"{prefix}_Wr"] + h @ tensors[f"{prefix}_Ur"] + tensors[f"{prefix}_br"])
    candidate = np.tanh(
        x @ tensors[f"{prefix}_Wh"] + (r * h) @ tensors[f"{prefix}_Uh"] + tensors[f"{prefix}_bh"]
    )
    hNew = (1.0 - z) * h + z * candidate
    return hNew, (x, h, z, r, candidate)


def _gruStepBackward(
    tensors: dict, grads: dict, prefix: str, cache: tuple, dhNew: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Accumulate the gradients of one cell step, return (dx, dh)."""
    (x, h, z, r, candidate) = cache

    dz = dhNew * (candidate - h)
    daz = dz * z * (1.0 - z)
    daCandidate = dhNew * z * (1.0 - candidate**2)

    grads[f"{prefix}_Wh"] += x.T @ daCandidate
    grads[f"{prefix}_Uh"] += (r * h).T @ daCandidate
    grads[f"{prefix}_bh"] += daCandidate.sum(axis=0)

    dResetHidden = daCandidate @ tensors[f"{prefix}_Uh"].T
    dar = dResetHidden * h * r * (1.0 - r)

    grads[f"{prefix}_Wz"] += x.T @ daz
    grads[f"{prefix}_Uz"] += h.T @ daz
    grads[f"{prefix}_bz"] += daz.sum(axis=0)
    grads[f"{prefix}_Wr"] += x.T @ dar
    grads[f"{prefix}_Ur"] += h.T @ dar
    grads[f"{prefix}_br"] += dar.sum(axis=0)

    dx = (
        daz @ tensors[f"{prefix}_Wz"].T
        + dar @ tensors[f"{prefix}_Wr"].T
        + daCandidate @ tensors[f"{prefix}_Wh"].T
    )
    dh = (
        dhNew * (1.0 - z)
        + dResetHidden * r
        + daz @ tensors[f"{prefix}_Uz"].T
        + dar @ tensors[f"{prefix}_Ur"].T
    )
    return dx, dh


def dropoutMasks(
    params: ModelParams, batchSize: int, futureSteps: int, rngSeed
) -> Optional[np.ndarray]:
    """Inverted dropout masks (t_f, B, H), already scaled by 1/keep."""
    keep = 1.0 - params.dropout_rate
    rng = np.random.default_rng(rngSeed)
    return (rng.random((futureSteps, batchSize, params.hidden_size)) < keep) / keep


def forwardBatch(
    params: ModelParams,
    batch: WindowBatch,
    masks: Optional[np.ndarray] = None,
    keepCache: bool = False,
) -> tuple[np.ndarray, dict]:
    """Predict the future positions of a batch.

    :param params: Model parameters.
    :param batch: Inputs.
    :param masks: Optional dropout masks from :func:`dropoutMasks`.
    :param keepCache: Keep the intermediate values for :func:`backwardBatch`.
    :returns: (positions (B, t_f, 2), cache).
    """
    tensors = params.tensors
    (batchSize, historySteps, _) = batch.increments.shape
    futureSteps = batch.getFutureSteps()

    h = np.zeros((batchSize, params.hidden_size))
    encoderCaches = []
    for k in range(historySteps):
        contextFeatures = batch.context[:, k] @ tensors["ctx_W"] + tensors["ctx_b"]
        x = np.concatenate([batch.increments[:, k], contextFeatures], axis=1)
        (h, stepCache) = _gruStep(tensors, "enc", x, h)
        encoderCaches.append(stepCache)

    decoderCaches = []
    features = []
    outputs = np.zeros((batchSize, futureSteps, OUTPUT_SIZE))
    previous = batch.increments[:, -1]
    for j in range(futureSteps):
        (h, stepCache) = _gruStep(tensors, "dec", previous, h)
        feature = h * masks[j] if masks is not None else h
        outputs[:, j] = feature @ tensors["out_W"] + tensors["out_b"]
        previous = outputs[:, j]
        decoderCaches.append(stepCache)
        features.append(feature)

    positions = batch.lastPositions[:, None, :] + POSITION_SCALE * np.cumsum(outputs, axis=1)
    if not np.all(np.isfinite(positions)):
        raise TrajectoryUncertaintyError("non-finite values in the forward pass")

    cache = {}
    if keepCache:
        cache = {
            "encoder": encoderCaches,
            "decoder": decoderCaches,
            "features": features,
            "masks": masks,
        }
    return positions, cache


def backwardBatch(
    params: ModelParams, batch: WindowBatch, cache: dict, dPositions: np.ndarray
) -> dict:
    """Gradients of a scalar loss given its gradient with respect to the positions."""
    tensors = params.tensors
    grads = {name: np.zeros_like(tensor) for name, tensor in tensors.items()}
    futureSteps = batch.getFutureSteps()

    # positions are cumulative sums of the outputs
    dOutputs = POSITION_SCALE * np.cumsum(dPositions[:, ::-1], axis=1)[:, ::-1]

    dPrevious = np.zeros((len(batch), OUTPUT_SIZE))
    dh = np.zeros((len(batch), params.hidden_size))
    for j in reversed(range(futureSteps)):
        dOutput = dOutputs[:, j] + dPrevious
        grads["out_W"] += cache["features"][j].T @ dOutput
        grads["out_b"] += dOutput.sum(axis=0)
        dFeature = dOutput @ tensors["out_W"].T
        if cache["masks"] is not None:
            dFeature = dFeature * cache["masks"][j]
        (dPrevious, dh) = _gruStepBackward(tensors, grads, "dec", cache["decoder"][j], dFeature + dh)

    for k in reversed(range(len(cache["encoder"]))):
        (dx, dh) = _gruStepBackward(tensors, grads, "enc", cache["encoder"][k], dh)
        dContextFeatures = dx[:, OUTPUT_SIZE:]
        grads["ctx_W"] += batch.context[:, k].T @ dContextFeatures
        grads["ctx_b"] += dContextFeatures.sum(axis=0)
    return grads


def lossAndGradientsBatch(
    params: ModelParams,
    batch: WindowBatch,
    l2Coefficient: float,
    masks: Optional[np.ndarray] = None,
) -> tuple[float, dict]:
    (positions, cache) = forwardBatch(params, batch, masks, keepCache=True)
    errors = positions - batch.targets
    numberOfPoints = errors.shape[0] * errors.shape[1]

    dataLoss = float(np.sum(errors**2)) / numberOfPoints
    weightNames = params.getWeightNames()
    regularization = l2Coefficient * float(sum(np.sum(params.tensors[n] ** 2) for n in weightNames))
    loss = dataLoss + regularization
    if not np.isfinite(loss):
        raise TrainingDivergenceError("non-finite training loss")

    grads = backwardBatch(params, batch, cache, 2.0 * errors / numberOfPoints)
    for name in weightNames:
        grads[name] += 2.0 * l2Coefficient * params.tensors[name]
    return loss, grads


def forward(
    params: ModelParams,
    window: PredictionWindow,
    dropout_on: bool = False,
    rng_seed=None,
) -> Prediction:
    """Predict the future trajectory of one window.

    The encoder consumes the scaled history increments together with the
    linearly mapped mean neighbor context of each step. The decoder starts
    from the final encoder state and the last observed increment and feeds
    each predicted increment back as its next input. With dropout on, an
    independent inverted-dropout mask drawn from ``rng_seed`` is applied to
    the decoder state before the output map at every step.

    .. code-block:: python

        prediction = forward(params, window)
        samples = [forward(params, window, dropout_on=True, rng_seed=s) for s in range(5)]

    :param params: Model parameters.
    :param window: The window.
    :param dropout_on: Apply dropout masks.
    :param rng_seed: Seed of the dropout masks.
    :returns: The prediction.
    :raises TrajectoryUncertaintyError: For non-finite intermediate values.
    """
    batch = WindowBatch.fromWindows([window])
    masks = None
    if dropout_on and params.dropout_rate > 0:
        masks = dropoutMasks(params, 1, batch.getFutureSteps(), rng_seed)
    (positions, _) = forwardBatch(params, batch, masks)
    return Prediction(positions[0])


def loss_and_gradients(params: ModelParams, batch, config) -> tuple[float, dict]:
    """Training loss and its gradients.

    The loss is the mean squared Euclidean position error over all predicted
    points of the batch plus l2_coefficient times the squared norm of all
    weight matrices. Gradients are computed by backpropagation through the
    decoder, the encoder and the context map; dropout is off.

    :param params: Model parameters.
    :param batch: Non-empty list of windows or a :class:`WindowBatch`.
    :param config: :class:`TrainingConfig` providing the L2 coefficient.
    :returns: (loss in m^2, gradients by tensor name).
    :raises TrainingDivergenceError: For a non-finite loss.
    """
    if not isinstance(batch, WindowBatch):
        batch = WindowBatch.fromWindows(batch)
    return lossAndGradientsBatch(params, batch, config.getL2Coefficient(params.dropout_rate))
