r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import numpy as np
from dataclasses import dataclass, fields
from typing import Optional, Sequence, Union

from trajectory_uncertainty.dataset.geometry import wrapAngle
from trajectory_uncertainty.dataset.scene import PredictionWindow, TrackPoint

#: Steps shorter than this (m) keep the previous heading.
EPS_DISP = 0.05


@dataclass
class KinematicSeries:
    """Per-step motion series of a uniformly sampled point sequence.

    For n points: ``speeds`` and ``headings`` have n - 1 entries,
    ``accelerations`` and ``hcs`` (heading change speed, absolute) n - 2.
    """

    speeds: np.ndarray
    accelerations: np.ndarray
    headings: np.ndarray
    hcs: np.ndarray


@dataclass
class KinematicFeatures:
    """Kinematic scenario features of one window.

    Speeds in m/s, accelerations (absolute values) in m/s^2, heading change
    speeds in rad/s. HT: history trajectory, FT: future trajectory.
    """

    AVHT: float
    CV: float
    AVFT: float
    AAHT: float
    AAFT: float
    MAFT: float
    AHCSHT: float
    AHCSFT: float
    MHCSFT: float

    def asDict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _carryHeadings(steps: np.ndarray, stepLengths: np.ndarray, epsDisp: float) -> np.ndarray:
    moving = stepLengths >= epsDisp
    headings = np.zeros(len(steps))
    if not np.any(moving):
        return headings
    current = float(np.arctan2(steps[np.argmax(moving), 1], steps[np.argmax(moving), 0]))
    for index in range(len(steps)):
        if moving[index]:
            current = float(np.arctan2(steps[index, 1], steps[index, 0]))
        headings[index] = current
    return headings


def kinematic_series(
    points: Union[np.ndarray, Sequence[TrackPoint]],
    dt: Optional[float] = None,
    eps_disp: float = EPS_DISP,
) -> KinematicSeries:
    """Speeds, accelerations, headings and heading change speeds.

    Headings are the direction of each step; a step shorter than eps_disp
    keeps the heading of the step before it. Leading short steps take the
    heading of the first longer step, and a sequence without any longer step
    has heading 0 throughout.

    .. code-block:: python

        series = kinematic_series(np.array([[0, 0], [1, 0], [1, 1]]), dt=0.5)
        # series.hcs == [pi]

    :param points: Array (n, 2) of positions, or TrackPoints with uniform time step.
    :param dt: Time step in seconds; required for arrays, derived for TrackPoints.
    :param eps_disp: Heading carry-forward threshold in meters.
    :returns: The series.
    :raises ValueError: For fewer than 3 points or a missing or non-uniform time step.
    """
    if len(points) > 0 and isinstance(points[0], TrackPoint):
        times = np.array([point.t for point in points])
        positions = np.array([[point.x, point.y] for point in points])
        steps = np.diff(times)
        if len(steps) > 0:
            if dt is None:
                dt = float(steps[0])
            if np.any(np.abs(steps - dt) > 1e-9 * max(1.0, dt)):
                raise ValueError("kinematic_series needs a uniform time step")
    else:
        positions = np.asarray(points, dtype=float).reshape(-1, 2)

    if len(positions) < 3:
        raise ValueError(f"kinematic_series needs at least 3 points, got {len(positions)}")
    if dt is None or not dt > 0:
        raise ValueError("kinematic_series needs a positive time step")

    steps = np.diff(positions, axis=0)
    stepLengths = np.hypot(steps[:, 0], steps[:, 1])
    speeds = stepLengths / dt
    headings = _carryHeadings(steps, stepLengths, eps_disp)
    return KinematicSeries(
        speeds=speeds,
        accelerations=np.diff(speeds) / dt,
        headings=headings,
        hcs=np.abs(wrapAngle(np.diff(headings))) / dt,
    )


def kinematic_features(window: PredictionWindow, eps_disp: float = EPS_DISP) -> KinematicFeatures:
    """Kinematic features of a window.

    The history-side series run over the history points. The future-side
    series run over the last two history points followed by the future, so
    the first future speed, acceleration and heading change are defined;
    only the entries that end inside the future are used.

    :param window: The window.
    :param eps_disp: Heading carry-forward threshold in meters.
    :returns: The features.
    """
    dt = window.getTimeStep()
    numberOfFutureSteps = len(window.future)

    history = kinematic_series(window.history, dt, eps_disp)
    future = kinematic_series(np.vstack([window.history[-2:], window.future]), dt, eps_disp)

    futureSpeeds = future.speeds[-numberOfFutureSteps:]
    futureAccelerations = np.abs(future.accelerations[-numberOfFutureSteps:])
    futureHcs = future.hcs[-numberOfFutureSteps:]

    return KinematicFeatures(
        AVHT=float(np.mean(history.speeds)),
        CV=float(history.speeds[-1]),
        AVFT=float(np.mean(futureSpeeds)),
        AAHT=float(np.mean(np.abs(history.accelerations))),
        AAFT=float(np.mean(futureAccelerations)),
        MAFT=float(np.max(futureAccelerations)),
        AHCSHT=float(np.mean(history.hcs)),
        AHCSFT=float(np.mean(futureHcs)),
        MHCSFT=float(np.max(futureHcs)),
    )
