r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import logging
import numpy as np

from trajectory_uncertainty.dataset.scene import Scene, Track

#: Relative tolerance used to decide if a track is already on the target grid.
GRID_TOLERANCE = 1e-9


def isUniform(track: Track, rate_hz: float) -> bool:
    """Check if a track is sampled with the step 1/rate_hz.

    :param track: The track.
    :param rate_hz: Sampling rate in Hz.
    :returns: True if all time steps equal 1/rate_hz.
    """
    dt = 1.0 / rate_hz
    return bool(np.all(np.abs(np.diff(track.times) - dt) <= GRID_TOLERANCE * max(1.0, dt)))


def resample_track(track: Track, rate_hz: float) -> Track:
    """Resample a track to a uniform rate.

    The new points start at the first timestamp and have the step 1/rate_hz.
    Positions are interpolated linearly; the grid never extends past the
    last original timestamp. A track that is already on the target grid is
    returned unchanged.

    .. code-block:: python

        track2Hz = resample_track(track10Hz, 2.0)

    :param track: Track to resample.
    :param rate_hz: Output rate in Hz, must be positive.
    :returns: The resampled track.
    :raises ValueError: If the rate is not positive or the track is shorter than one output step.
    """
    if not rate_hz > 0:
        raise ValueError(f"rate_hz must be positive, got {rate_hz}")

    dt = 1.0 / rate_hz
    duration = track.getDuration()
    if duration < dt * (1.0 - GRID_TOLERANCE):
        raise ValueError(
            f"track {track.track_id} is shorter ({duration:.3f} s) than one output step ({dt:.3f} s)"
        )

    if isUniform(track, rate_hz):
        return Track(track.track_id, track.agent_type, track.times.copy(), track.positions.copy())

    numberOfPoints = int(np.floor(duration / dt + GRID_TOLERANCE)) + 1
    newTimes = track.times[0] + dt * np.arange(numberOfPoints)
    newTimes = np.minimum(newTimes, track.times[-1])

    x = np.interp(newTimes, track.times, track.positions[:, 0])
    y = np.interp(newTimes, track.times, track.positions[:, 1])
    return Track(track.track_id, track.agent_type, newTimes, np.column_stack([x, y]))


def resample_scene(scene: Scene, rate_hz: float) -> Scene:
    """Resample every track of a scene.

    Tracks shorter than one output step are dropped. Map and signals are kept.

    :param scene: Scene to resample.
    :param rate_hz: Output rate in Hz.
    :returns: New scene with resampled tracks.
    """
    dt = 1.0 / rate_hz
    tracks = []
    for track in scene.tracks:
        if track.getDuration() < dt * (1.0 - GRID_TOLERANCE):
            logging.debug(f"track {track.track_id} too short for {rate_hz} Hz - dropped")
            continue
        tracks.append(resample_track(track, rate_hz))
    return Scene(scene.scene_id, tracks, scene.map, scene.signals)
