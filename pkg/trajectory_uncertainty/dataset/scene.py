r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import enum
import numpy as np
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional
from shapely.geometry import LineString
from shapely.geometry.polygon import Polygon
from shapely.ops import unary_union

from trajectory_uncertainty.analysis_tools.error import TrackFormatError
from trajectory_uncertainty.dataset.geometry import polygonIsSimple


class AgentType(enum.Enum):
    """Type of a traffic participant.

    The four classes follow the sv/bv/bi/pe grouping: small vehicle, large
    vehicle, two-wheeler (motorcycle or bicycle) and pedestrian.
    """

    SMALL_VEHICLE = "small_vehicle"
    LARGE_VEHICLE = "large_vehicle"
    TWO_WHEELER = "two_wheeler"
    PEDESTRIAN = "pedestrian"

    @classmethod
    def fromTag(cls, tag: str) -> "AgentType":
        """Parse an agent type tag.

        :param tag: One of small_vehicle, large_vehicle, two_wheeler, pedestrian.
        :returns: The agent type.
        :raises TrackFormatError: For unknown tags.
        """
        try:
            return cls(str(tag).strip())
        except ValueError:
            raise TrackFormatError(f"unknown agent_type tag: {tag!r}")


@dataclass(frozen=True)
class TrackPoint:
    """One time-stamped position, seconds and meters."""

    t: float
    x: float
    y: float


@dataclass
class Track:
    """Time-stamped trajectory of one agent.

    Points are stored as arrays: ``times`` with shape (n,) and ``positions``
    with shape (n, 2).
    """

    track_id: str
    agent_type: AgentType
    times: np.ndarray
    positions: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.positions = np.asarray(self.positions, dtype=float).reshape(-1, 2)
        if len(self.times) != len(self.positions):
            raise ValueError("times and positions must have equal length")
        if len(self.times) < 2:
            raise ValueError(f"track {self.track_id} needs at least 2 points")
        if not (np.all(np.isfinite(self.times)) and np.all(np.isfinite(self.positions))):
            raise TrackFormatError(f"track {self.track_id} has non-finite values")
        if np.any(np.diff(self.times) <= 0.0):
            raise TrackFormatError(
                f"non-monotone timestamps in track {self.track_id}"
            )
        return

    @property
    def points(self) -> list[TrackPoint]:
        return [
            TrackPoint(float(t), float(p[0]), float(p[1]))
            for t, p in zip(self.times, self.positions)
        ]

    def getNumberOfPoints(self) -> int:
        return len(self.times)

    def getDuration(self) -> float:
        return float(self.times[-1] - self.times[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Track):
            return NotImplemented
        return (
            self.track_id == other.track_id
            and self.agent_type == other.agent_type
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.positions, other.positions)
        )


@dataclass(frozen=True)
class MapRegion:
    """Location-stage polygon of one intersection arm.

    Stage labels: 1 entering, 2 gap, 3 first crosswalk, 4 inside the
    intersection, 5 last crosswalk, 6 exiting.
    """

    label: int
    approach_id: int
    polygon: tuple

    @cached_property
    def shape(self) -> Polygon:
        return Polygon(self.polygon)


@dataclass(frozen=True)
class StopLine:
    approach_id: int
    start: tuple
    end: tuple

    @cached_property
    def shape(self) -> LineString:
        return LineString([self.start, self.end])

    def getMidpoint(self) -> np.ndarray:
        return (np.asarray(self.start, dtype=float) + np.asarray(self.end, dtype=float)) / 2.0


@dataclass
class MapSpec:
    """Polygon map of an intersection.

    Regions are kept in file order; location lookup returns the first match.
    """

    regions: list[MapRegion] = field(default_factory=list)
    stop_lines: list[StopLine] = field(default_factory=list)

    def __post_init__(self):
        for region in self.regions:
            if region.label not in range(1, 7):
                raise TrackFormatError(f"region label {region.label} not in 1..6")
            if not polygonIsSimple(region.polygon):
                raise TrackFormatError(
                    f"region polygon of stage {region.label}, approach {region.approach_id} is not simple"
                )
        return

    def getRegionsByLabel(self, label: int) -> list[MapRegion]:
        return [region for region in self.regions if region.label == label]

    def getCenter(self) -> np.ndarray:
        """Center of the intersection.

        :returns: Centroid of the stage-4 box regions, else the mean stop-line midpoint, else the origin.
        """
        boxes = [region.shape for region in self.getRegionsByLabel(4)]
        if boxes:
            centroid = unary_union(boxes).centroid
            return np.array([centroid.x, centroid.y])
        if self.stop_lines:
            return np.mean([line.getMidpoint() for line in self.stop_lines], axis=0)
        return np.zeros(2)


class SignalPhase(enum.Enum):
    GREEN = "green"
    YELLOW = "yellow"
    RED = "red"


@dataclass(frozen=True)
class PhaseInterval:
    phase: SignalPhase
    start_s: float
    end_s: float


@dataclass
class SignalTimeline:
    """Signal phases per approach.

    Intervals of one approach are ordered, non-overlapping and contiguous.
    """

    phases: dict[int, list[PhaseInterval]] = field(default_factory=dict)

    def __post_init__(self):
        for approachId, intervals in self.phases.items():
            for interval in intervals:
                if not interval.end_s > interval.start_s:
                    raise TrackFormatError(
                        f"empty signal interval on approach {approachId}"
                    )
            for previous, current in zip(intervals[:-1], intervals[1:]):
                if abs(current.start_s - previous.end_s) > 1e-9:
                    raise TrackFormatError(
                        f"signal intervals of approach {approachId} are not contiguous at {previous.end_s}"
                    )
        return

    def phaseAt(self, approachId: int, t: float) -> Optional[SignalPhase]:
        """Signal phase of an approach at an instant.

        Intervals are matched as (start, end], so an instant on a phase
        boundary belongs to the phase that just ended. The very first start
        instant of the timeline belongs to the first interval.

        :param approachId: Approach identifier.
        :param t: Time in seconds.
        :returns: The phase, or None if the approach or instant is not covered.
        """
        intervals = self.phases.get(approachId)
        if not intervals:
            return None
        if t == intervals[0].start_s:
            return intervals[0].phase
        for interval in intervals:
            if interval.start_s < t <= interval.end_s:
                return interval.phase
        return None


@dataclass
class Scene:
    """One recording: tracks plus optional map and signal timeline."""

    scene_id: str
    tracks: list[Track]
    map: Optional[MapSpec] = None
    signals: Optional[SignalTimeline] = None

    def __post_init__(self):
        trackIds = [track.track_id for track in self.tracks]
        if len(set(trackIds)) != len(trackIds):
            raise TrackFormatError(f"duplicate track ids in scene {self.scene_id}")
        return

    def getTrack(self, trackId: str) -> Track:
        for track in self.tracks:
            if track.track_id == trackId:
                return track
        raise KeyError(trackId)

    def getTrackIds(self) -> list[str]:
        return [track.track_id for track in self.tracks]


@dataclass
class PredictionWindow:
    """One prediction task of a target agent.

    ``history`` holds t_h + 1 positions ending at t0, ``future`` the t_f
    ground-truth positions after t0. ``neighbor_states`` has one array per
    history step with rows [rel_x, rel_y, rel_vx, rel_vy] of the nearest
    co-present agents.
    """

    scene_id: str
    target_track_id: str
    agent_type: AgentType
    t0: float
    history_times: np.ndarray
    history: np.ndarray
    future_times: np.ndarray
    future: np.ndarray
    neighbor_states: list[np.ndarray]

    @property
    def window_id(self) -> str:
        return f"{self.scene_id}:{self.target_track_id}:{self.t0:.3f}"

    @property
    def trackKey(self) -> tuple[str, str]:
        return (self.scene_id, self.target_track_id)

    def getTimeStep(self) -> float:
        return float(self.history_times[1] - self.history_times[0])


@dataclass
class DatasetSplit:
    train: list[PredictionWindow]
    test: list[PredictionWindow]
    seed: int
