r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import dataclasses
import numpy as np
import pytest

from trajectory_uncertainty.dataset.scene import AgentType, PredictionWindow, Scene, Track
from trajectory_uncertainty.synthgen.scene_generator import GeneratorConfig


def makeTrack(trackId, xs, ys, dt=0.5, t0=0.0, agentType=AgentType.SMALL_VEHICLE) -> Track:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    return Track(trackId, agentType, t0 + dt * np.arange(len(xs)), np.column_stack([xs, ys]))


def makeWindow(history, future, neighborStates=None, dt=0.5, t0=3.0, trackId="a") -> PredictionWindow:
    history = np.asarray(history, dtype=float)
    future = np.asarray(future, dtype=float)
    historyTimes = t0 - dt * np.arange(len(history))[::-1]
    futureTimes = t0 + dt * np.arange(1, len(future) + 1)
    if neighborStates is None:
        neighborStates = [np.zeros((0, 4)) for _ in range(len(history))]
    return PredictionWindow(
        scene_id="test",
        target_track_id=trackId,
        agent_type=AgentType.SMALL_VEHICLE,
        t0=t0,
        history_times=historyTimes,
        history=history,
        future_times=futureTimes,
        future=future,
        neighbor_states=neighborStates,
    )


def straightWindow(speed=4.0, dt=0.5, direction=(1.0, 0.0), origin=(0.0, 0.0), trackId="a"):
    """Window of 7 history and 6 future points at constant speed."""
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    points = np.asarray(origin) + speed * dt * np.arange(13)[:, None] * direction
    return makeWindow(points[:7], points[7:], dt=dt, trackId=trackId)


@pytest.fixture
def quietConfig():
    """Noiseless generator configuration with a small track count."""
    return GeneratorConfig(
        seed=11,
        n_tracks=2,
        speed_jitter=0.0,
        accel_noise_std=0.0,
        heading_noise_std=0.0,
    )


@pytest.fixture
def parallelScene():
    """Two parallel tracks 5 m apart, 13 points each at 2 Hz."""
    a = makeTrack("a", np.arange(13) * 1.0, np.zeros(13))
    b = makeTrack("b", np.arange(13) * 1.0, np.full(13, 5.0))
    return Scene("parallel", [a, b])


def onlyBehavior(config: GeneratorConfig, behavior: str, **changes) -> GeneratorConfig:
    """Copy of a configuration that generates small vehicles of one behavior."""
    return dataclasses.replace(
        config,
        behavior_mix={behavior: 1.0},
        agent_mix={"small_vehicle": 1.0},
        **changes,
    )
