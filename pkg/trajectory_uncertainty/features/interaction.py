r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import numpy as np
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from trajectory_uncertainty.dataset.scene import PredictionWindow, Scene
from trajectory_uncertainty.dataset.windows import SceneIndex

DEFAULT_X_SET = (10.0, 20.0, 30.0, 50.0)


@dataclass
class FeatureParams:
    """Parameters of the scenario features.

    :param x_set: Neighborhood radii in meters.
    :param lambda_: Distance decay in 1/m of the density and conflict terms.
    :param alpha_c: Coefficient c of the time weight 1 + c * t^2, in 1/s^2.
    :param horizon_T: Extrapolation horizon in seconds.
    :param horizon_step: Extrapolation step in seconds.
    :param eps_disp: Heading carry-forward threshold in meters.
    """

    x_set: Sequence[float] = DEFAULT_X_SET
    lambda_: float = 0.2
    alpha_c: float = 0.25
    horizon_T: float = 3.0
    horizon_step: float = 0.5
    eps_disp: float = 0.05

    def timeWeight(self) -> Callable[[np.ndarray], np.ndarray]:
        return quadraticTimeWeight(self.alpha_c)


def quadraticTimeWeight(c: float) -> Callable[[np.ndarray], np.ndarray]:
    """Time weight alpha(t) = 1 + c * t^2, growing faster than linear."""

    def alpha(t: np.ndarray) -> np.ndarray:
        return 1.0 + c * np.asarray(t) ** 2

    return alpha


def radiusLabel(x: float) -> str:
    return f"{x:g}"


@dataclass
class InteractionFeatures:
    """Neighborhood features per radius x.

    NTP: number of traffic participants within x. DTP: their density, the
    sum of exp(-lambda * d). DCTP: degree of conflict under linear
    extrapolation, in a mean and a maximum-conflict variant.
    """

    x_set: tuple
    ntp: dict = field(default_factory=dict)
    dtp: dict = field(default_factory=dict)
    dctp_mean: dict = field(default_factory=dict)
    dctp_max: dict = field(default_factory=dict)

    def asDict(self) -> dict:
        row = {}
        for x in self.x_set:
            label = radiusLabel(x)
            row[f"NTP_{label}"] = self.ntp[x]
            row[f"DTP_{label}"] = self.dtp[x]
            row[f"DCTP_{label}_mean"] = self.dctp_mean[x]
            row[f"DCTP_{label}_max"] = self.dctp_max[x]
        return row


def interaction_features(
    scene: Scene,
    window: PredictionWindow,
    x_set: Sequence[float] = DEFAULT_X_SET,
    lambda_: float = 0.2,
    horizon_T: float = 3.0,
    alpha: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    horizon_step: float = 0.5,
    sceneIndex: Optional[SceneIndex] = None,
) -> InteractionFeatures:
    """Interaction features of the target agent at the prediction time.

    The neighbor set within x holds every co-present agent at t0 no farther
    than x meters; it is not limited like the window's neighbor context.
    For the conflict terms, target and neighbors move on straight lines with
    their finite-difference velocity at t0. With d_j(t) the distance to
    neighbor j at t = h, 2h, ..., T:

    .. code-block:: python

        DCTP_x_mean = sum_j exp(-lambda_ * mean_t(alpha(t) * d_j(t)))
        DCTP_x_max  = sum_j exp(-lambda_ * min_t(alpha(t) * d_j(t)))

    :param scene: Resampled scene of the window.
    :param window: The window.
    :param x_set: Radii in meters.
    :param lambda_: Distance decay in 1/m, positive.
    :param horizon_T: Extrapolation horizon in seconds, positive.
    :param alpha: Time weight function, default 1 + 0.25 * t^2.
    :param horizon_step: Extrapolation step h in seconds.
    :param sceneIndex: Optional prebuilt index of the scene.
    :returns: The features.
    :raises ValueError: For non-positive lambda_ or horizon, or a target missing at t0.
    """
    if not lambda_ > 0:
        raise ValueError(f"lambda_ must be positive, got {lambda_}")
    if not horizon_T > 0 or not horizon_step > 0:
        raise ValueError("horizon_T and horizon_step must be positive")
    if alpha is None:
        alpha = quadraticTimeWeight(0.25)
    if sceneIndex is None:
        sceneIndex = SceneIndex(scene)

    trackIndex = sceneIndex.trackIndex(window.target_track_id)
    tick = sceneIndex.tickOf(window.t0)
    matches = np.where(sceneIndex.ticks[trackIndex] == tick)[0]
    if len(matches) != 1:
        raise ValueError(f"target {window.target_track_id} is not present at t0 = {window.t0}")

    xSet = tuple(float(x) for x in x_set)
    states = sceneIndex.neighborsOf(trackIndex, int(matches[0]), max(xSet), None)
    distances = np.hypot(states[:, 0], states[:, 1])

    numberOfSteps = int(round(horizon_T / horizon_step))
    t = horizon_step * np.arange(1, numberOfSteps + 1)
    futureOffsets = states[:, None, 0:2] + states[:, None, 2:4] * t[None, :, None]
    weighted = alpha(t)[None, :] * np.hypot(futureOffsets[..., 0], futureOffsets[..., 1])
    meanTerms = np.exp(-lambda_ * np.mean(weighted, axis=1)) if len(states) else np.zeros(0)
    maxTerms = np.exp(-lambda_ * np.min(weighted, axis=1)) if len(states) else np.zeros(0)

    features = InteractionFeatures(x_set=xSet)
    for x in xSet:
        inside = distances <= x
        features.ntp[x] = int(np.count_nonzero(inside))
        features.dtp[x] = float(np.sum(np.exp(-lambda_ * distances[inside])))
        features.dctp_mean[x] = float(np.sum(meanTerms[inside]))
        features.dctp_max[x] = float(np.sum(maxTerms[inside]))
    return features
