r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import pandas as pd
from dataclasses import dataclass
from typing import Optional, Sequence

from trajectory_uncertainty.dataset.scene import PredictionWindow, Scene
from trajectory_uncertainty.dataset.windows import SceneIndex
from trajectory_uncertainty.features.categorical import (
    CategoricalFeatures,
    classify_behavior,
    classify_compliance,
    classify_location,
)
from trajectory_uncertainty.features.interaction import (
    DEFAULT_X_SET,
    FeatureParams,
    InteractionFeatures,
    interaction_features,
    radiusLabel,
)
from trajectory_uncertainty.features.kinematic import KinematicFeatures, kinematic_features

ID_COLUMNS = ["window_id", "scene_id", "track_id", "t0"]
CATEGORICAL_COLUMNS = ["agent_type", "behavior", "compliance", "location_stage"]
KINEMATIC_COLUMNS = ["AVHT", "CV", "AVFT", "AAHT", "AAFT", "MAFT", "AHCSHT", "AHCSFT", "MHCSFT"]


def interactionColumns(x_set: Sequence[float] = DEFAULT_X_SET) -> list[str]:
    columns = []
    for x in x_set:
        label = radiusLabel(float(x))
        columns += [f"NTP_{label}", f"DTP_{label}", f"DCTP_{label}_mean", f"DCTP_{label}_max"]
    return columns


def numericColumns(x_set: Sequence[float] = DEFAULT_X_SET) -> list[str]:
    """Numeric feature columns in table order."""
    return KINEMATIC_COLUMNS + interactionColumns(x_set)


def featureColumns(x_set: Sequence[float] = DEFAULT_X_SET) -> list[str]:
    """All columns of the feature table in their fixed order.

    window_id, scene_id, track_id, t0, agent_type, behavior, compliance,
    location_stage, the nine kinematic features, then NTP_x, DTP_x,
    DCTP_x_mean and DCTP_x_max for every radius x in x_set order.
    """
    return ID_COLUMNS + CATEGORICAL_COLUMNS + numericColumns(x_set)


@dataclass
class FeatureVector:
    window_id: str
    scene_id: str
    track_id: str
    t0: float
    kinematic: KinematicFeatures
    interaction: InteractionFeatures
    categorical: CategoricalFeatures

    def asRow(self) -> dict:
        row = {
            "window_id": self.window_id,
            "scene_id": self.scene_id,
            "track_id": self.track_id,
            "t0": self.t0,
        }
        row.update(self.categorical.asDict())
        row.update(self.kinematic.asDict())
        row.update(self.interaction.asDict())
        return row


def feature_table(
    scene: Scene,
    windows: list[PredictionWindow],
    params: Optional[FeatureParams] = None,
) -> list[FeatureVector]:
    """Scenario features of every window of a scene.

    Behavior and compliance are properties of the whole target track and
    are computed once per track.

    .. code-block:: python

        vectors = feature_table(scene, windows, FeatureParams(lambda_=0.1))
        featureFrame(vectors).to_csv("features.csv", index=False)

    :param scene: Resampled scene the windows were cut from.
    :param windows: Windows of the scene.
    :param params: Feature parameters, defaults to :class:`FeatureParams`.
    :returns: One feature vector per window, in window order.
    """
    if params is None:
        params = FeatureParams()
    if len(windows) == 0:
        return []

    sceneIndex = SceneIndex(scene)
    alpha = params.timeWeight()
    trackLabels = {}
    vectors = []
    for window in windows:
        if window.target_track_id not in trackLabels:
            track = scene.getTrack(window.target_track_id)
            trackLabels[window.target_track_id] = (
                classify_behavior(track, scene.map, params.eps_disp),
                classify_compliance(track, scene.map, scene.signals),
            )
        (behavior, compliance) = trackLabels[window.target_track_id]

        vectors.append(
            FeatureVector(
                window_id=window.window_id,
                scene_id=window.scene_id,
                track_id=window.target_track_id,
                t0=window.t0,
                kinematic=kinematic_features(window, params.eps_disp),
                interaction=interaction_features(
                    scene,
                    window,
                    x_set=params.x_set,
                    lambda_=params.lambda_,
                    horizon_T=params.horizon_T,
                    alpha=alpha,
                    horizon_step=params.horizon_step,
                    sceneIndex=sceneIndex,
                ),
                categorical=CategoricalFeatures(
                    agent_type=window.agent_type,
                    behavior=behavior,
                    compliance=compliance,
                    location_stage=classify_location(window, scene.map),
                ),
            )
        )
    return vectors


def featureFrame(vectors: list[FeatureVector], x_set: Sequence[float] = DEFAULT_X_SET) -> pd.DataFrame:
    """Feature vectors as a table with the documented column order."""
    if vectors:
        x_set = vectors[0].interaction.x_set
    frame = pd.DataFrame([vector.asRow() for vector in vectors], columns=featureColumns(x_set))
    frame["location_stage"] = frame["location_stage"].astype(str)
    return frame
