r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import numpy as np
from dataclasses import dataclass
from typing import Optional, Union

from trajectory_uncertainty.dataset.geometry import pointInPolygon, segmentCrossingParameter, wrapAngle
from trajectory_uncertainty.dataset.scene import (
    AgentType,
    MapSpec,
    PredictionWindow,
    SignalPhase,
    SignalTimeline,
    Track,
)

BEHAVIOR_LABELS = ["straight", "left", "right", "u_turn", "unknown"]
COMPLIANCE_LABELS = ["compliant", "yellow_running", "red_running", "unknown"]
LOCATION_LABELS = [1, 2, 3, 4, 5, 6, "outside"]

STRAIGHT_LIMIT = np.deg2rad(30.0)
U_TURN_LIMIT = np.deg2rad(150.0)
#: Moving steps averaged for the entry and exit directions.
DIRECTION_STEPS = 3


@dataclass
class CategoricalFeatures:
    agent_type: AgentType
    behavior: str
    compliance: str
    location_stage: Union[int, str]

    def asDict(self) -> dict:
        return {
            "agent_type": self.agent_type.value,
            "behavior": self.behavior,
            "compliance": self.compliance,
            "location_stage": self.location_stage,
        }


def classify_behavior(track: Track, map: Optional[MapSpec] = None, eps_disp: float = 0.05) -> str:
    """Driving behavior from the net heading change of a track.

    Entry and exit directions are the mean of the first and last steps
    longer than eps_disp, up to three each and never overlapping. The
    wrapped angle between them decides: up to 30 degrees straight, up to
    150 degrees left (positive) or right (negative), beyond that u_turn.
    Tracks with fewer than 3 points or fewer than two moving steps are
    unknown.

    .. code-block:: python

        behaviors = [classify_behavior(track, scene.map) for track in scene.tracks]

    :param track: The track.
    :param map: Map of the scene, not needed for the heading rule.
    :param eps_disp: Minimum step length in meters.
    :returns: One of straight, left, right, u_turn, unknown.
    """
    if track.getNumberOfPoints() < 3:
        return "unknown"
    steps = np.diff(track.positions, axis=0)
    moving = steps[np.hypot(steps[:, 0], steps[:, 1]) >= eps_disp]
    if len(moving) < 2:
        return "unknown"

    count = min(DIRECTION_STEPS, len(moving) // 2)
    entry = moving[:count].mean(axis=0)
    exit = moving[-count:].mean(axis=0)
    change = float(wrapAngle(np.arctan2(exit[1], exit[0]) - np.arctan2(entry[1], entry[0])))

    if abs(change) <= STRAIGHT_LIMIT:
        return "straight"
    if abs(change) > U_TURN_LIMIT:
        return "u_turn"
    return "left" if change > 0 else "right"


def stopLineCrossing(track: Track, mapSpec: MapSpec) -> Optional[tuple[int, float]]:
    """First inbound crossing of a stop line by consecutive track points.

    A step is inbound when it points towards the intersection center, i.e.
    against the outward direction from the center to the stop line. Steps
    leaving the intersection over the stop line of another arm are ignored.

    :returns: (approach id, interpolated crossing time) or None.
    """
    center = mapSpec.getCenter()
    for index in range(track.getNumberOfPoints() - 1):
        p1 = track.positions[index]
        p2 = track.positions[index + 1]
        for line in mapSpec.stop_lines:
            u = segmentCrossingParameter(p1, p2, line.shape)
            if u is None:
                continue
            outward = line.getMidpoint() - center
            if np.dot(p2 - p1, outward) >= 0.0 and np.any(outward != 0.0):
                continue
            t1 = track.times[index]
            t2 = track.times[index + 1]
            return (line.approach_id, float(t1 + u * (t2 - t1)))
    return None


def classify_compliance(
    track: Track, map: Optional[MapSpec], signals: Optional[SignalTimeline]
) -> str:
    """Signal compliance from the stop-line crossing of a track.

    The crossing instant is looked up in the signal timeline of the crossed
    approach; an instant on a phase boundary belongs to the phase that ends
    there. A track that never crosses a stop line is compliant.

    :param track: The track.
    :param map: Map with stop lines, may be None.
    :param signals: Signal timeline, may be None.
    :returns: One of compliant, yellow_running, red_running, unknown.
    """
    if map is None or signals is None or len(map.stop_lines) == 0:
        return "unknown"
    crossing = stopLineCrossing(track, map)
    if crossing is None:
        return "compliant"
    (approachId, t) = crossing
    phase = signals.phaseAt(approachId, t)
    if phase is None:
        return "unknown"
    return {
        SignalPhase.GREEN: "compliant",
        SignalPhase.YELLOW: "yellow_running",
        SignalPhase.RED: "red_running",
    }[phase]


def classify_location(window: PredictionWindow, map: Optional[MapSpec]) -> Union[int, str]:
    """Location stage of the target at the prediction time.

    Regions are tested in map order, boundaries count as inside, the first
    match wins.

    :returns: Stage label 1..6 or "outside".
    """
    if map is None:
        return "outside"
    position = window.history[-1]
    for region in map.regions:
        if pointInPolygon(position, region.shape):
            return region.label
    return "outside"
