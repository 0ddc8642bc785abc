r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import numpy as np
from collections import defaultdict

from trajectory_uncertainty.dataset.resampling import isUniform
from trajectory_uncertainty.dataset.scene import PredictionWindow, Scene


def sceneTimeStep(scene: Scene) -> float:
    """Common time step of a resampled scene.

    :param scene: Scene whose tracks are all on the same uniform grid.
    :returns: The time step in seconds.
    :raises ValueError: If the tracks are not uniformly sampled at a common rate.
    """
    if len(scene.tracks) == 0:
        raise ValueError(f"scene {scene.scene_id} has no tracks")
    first = scene.tracks[0]
    dt = float(first.times[1] - first.times[0])
    for track in scene.tracks:
        if not isUniform(track, 1.0 / dt):
            raise ValueError(
                f"scene {scene.scene_id} is not resampled to a uniform rate (track {track.track_id})"
            )
    return dt


def finiteDifferenceVelocities(positions: np.ndarray, dt: float) -> np.ndarray:
    """Backward-difference velocities, forward difference for the first point.

    :param positions: Array (n, 2) of positions.
    :param dt: Time step in seconds.
    :returns: Array (n, 2) of velocities in m/s.
    """
    velocities = np.zeros_like(positions)
    if len(positions) < 2:
        return velocities
    steps = np.diff(positions, axis=0) / dt
    velocities[1:] = steps
    velocities[0] = steps[0]
    return velocities


class SceneIndex:
    """Time-tick lookup of all agents of a uniformly sampled scene.

    Two agents are co-present when they have a point on the same tick
    round(t / dt).

    :param scene: Resampled scene.
    """

    def __init__(self, scene: Scene):
        self.scene = scene
        self.dt = sceneTimeStep(scene)
        self.ticks = []
        self.velocities = []
        self._byTick = defaultdict(list)
        for trackIndex, track in enumerate(scene.tracks):
            ticks = np.rint(track.times / self.dt).astype(np.int64)
            self.ticks.append(ticks)
            self.velocities.append(finiteDifferenceVelocities(track.positions, self.dt))
            for pointIndex, tick in enumerate(ticks):
                self._byTick[int(tick)].append((trackIndex, pointIndex))
        return

    def trackIndex(self, trackId: str) -> int:
        for index, track in enumerate(self.scene.tracks):
            if track.track_id == trackId:
                return index
        raise KeyError(trackId)

    def tickOf(self, t: float) -> int:
        return int(np.rint(t / self.dt))

    def agentsAt(self, tick: int) -> list[tuple[int, int]]:
        """All (track index, point index) pairs present on a tick."""
        return self._byTick.get(tick, [])

    def neighborsOf(
        self, trackIndex: int, pointIndex: int, radius: float, maxNeighbors: int = None
    ) -> np.ndarray:
        """Nearest co-present agents of one track point.

        :param trackIndex: Index of the target track in the scene.
        :param pointIndex: Index of the target point.
        :param radius: Neighbor radius in meters, inclusive.
        :param maxNeighbors: Maximum number of neighbors, None for all.
        :returns: Array (m, 4) of [rel_x, rel_y, rel_vx, rel_vy], nearest first.
        """
        tick = int(self.ticks[trackIndex][pointIndex])
        ownPosition = self.scene.tracks[trackIndex].positions[pointIndex]
        ownVelocity = self.velocities[trackIndex][pointIndex]

        candidates = []
        for otherTrack, otherPoint in self.agentsAt(tick):
            if otherTrack == trackIndex:
                continue
            relativePosition = self.scene.tracks[otherTrack].positions[otherPoint] - ownPosition
            distance = float(np.hypot(relativePosition[0], relativePosition[1]))
            if distance <= radius:
                relativeVelocity = self.velocities[otherTrack][otherPoint] - ownVelocity
                candidates.append(
                    (
                        distance,
                        self.scene.tracks[otherTrack].track_id,
                        np.concatenate([relativePosition, relativeVelocity]),
                    )
                )

        candidates.sort(key=lambda candidate: (candidate[0], candidate[1]))
        if maxNeighbors is not None:
            candidates = candidates[:maxNeighbors]
        if len(candidates) == 0:
            return np.zeros((0, 4))
        return np.array([candidate[2] for candidate in candidates])


def extract_windows(
    scene: Scene,
    t_h_steps: int = 6,
    t_f_steps: int = 6,
    stride_steps: int = 1,
    neighbor_radius_m: float = 30.0,
    max_neighbors: int = 8,
) -> list[PredictionWindow]:
    """Cut prediction windows out of a resampled scene.

    One window is emitted per target track and admissible prediction time t0;
    only windows with the full history (t_h_steps + 1 points up to t0) and
    the full future (t_f_steps points after t0) are kept. Tracks that are too
    short yield no windows.

    .. code-block:: python

        scene = resample_scene(load_tracks("tracks.csv"), 2.0)
        windows = extract_windows(scene, stride_steps=2)

    :param scene: Scene on a uniform time grid.
    :param t_h_steps: History steps before t0.
    :param t_f_steps: Predicted steps after t0.
    :param stride_steps: Step between consecutive t0 of one track.
    :param neighbor_radius_m: Neighbor radius in meters.
    :param max_neighbors: Maximum number of neighbors per history step.
    :returns: List of windows, ordered by track and t0.
    """
    if stride_steps < 1:
        raise ValueError("stride_steps must be at least 1")
    if len(scene.tracks) == 0:
        return []

    index = SceneIndex(scene)
    windowLength = t_h_steps + t_f_steps + 1
    windows = []
    for trackIndex, track in enumerate(scene.tracks):
        numberOfPoints = track.getNumberOfPoints()
        for start in range(0, numberOfPoints - windowLength + 1, stride_steps):
            present = start + t_h_steps
            neighborStates = [
                index.neighborsOf(trackIndex, pointIndex, neighbor_radius_m, max_neighbors)
                for pointIndex in range(start, present + 1)
            ]
            windows.append(
                PredictionWindow(
                    scene_id=scene.scene_id,
                    target_track_id=track.track_id,
                    agent_type=track.agent_type,
                    t0=float(track.times[present]),
                    history_times=track.times[start : present + 1].copy(),
                    history=track.positions[start : present + 1].copy(),
                    future_times=track.times[present + 1 : present + 1 + t_f_steps].copy(),
                    future=track.positions[present + 1 : present + 1 + t_f_steps].copy(),
                    neighbor_states=neighborStates,
                )
            )
    return windows
