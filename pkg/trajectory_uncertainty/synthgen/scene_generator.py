r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import logging
import dataclasses
import numpy as np
from dataclasses import dataclass, field
from joblib import Parallel, delayed

from trajectory_uncertainty.dataset.scene import (
    AgentType,
    MapRegion,
    MapSpec,
    PhaseInterval,
    Scene,
    SignalPhase,
    SignalTimeline,
    StopLine,
    Track,
)
from trajectory_uncertainty.synthgen.path_template import (
    ARM_ROTATIONS,
    BEHAVIORS,
    PathTemplate,
    buildTemplate,
)

#: Nominal cruise speeds in m/s before speed_scale and jitter.
NOMINAL_SPEEDS = {
    AgentType.SMALL_VEHICLE: 8.0,
    AgentType.LARGE_VEHICLE: 6.0,
    AgentType.TWO_WHEELER: 4.0,
    AgentType.PEDESTRIAN: 1.4,
}

#: Braking and start-up acceleration of stop-and-go tracks, m/s^2.
STOP_AND_GO_ACCELERATION = 2.0
#: Stopping distance kept before the stop line, m.
STOP_MARGIN = 1.0
#: Grid that start times are snapped to, s.
START_TIME_GRID = 0.5


@dataclass
class GeneratorConfig:
    """Parameters of the synthetic four-arm intersection.

    ``n_tracks`` is the number of tracks per behavior class at the neutral
    mix weight 0.2, one fifth of the mix. A class of weight w gets
    round(5 * n_tracks * w) tracks, so the uniform mix gives exactly
    n_tracks tracks per class and {"straight": 1.0} gives 5 * n_tracks
    straight tracks.

    .. code-block:: python

        config = GeneratorConfig(seed=4, speed_scale=2.0, accel_noise_std=0.3)
        scene = generate_scene(config)
    """

    seed: int = 0
    n_tracks: int = 20
    speed_scale: float = 1.0
    speed_jitter: float = 0.25
    accel_noise_std: float = 0.2
    heading_noise_std: float = 0.01
    behavior_mix: dict = field(
        default_factory=lambda: {
            "straight": 0.35,
            "left": 0.2,
            "right": 0.2,
            "u_turn": 0.05,
            "stop_and_go": 0.2,
        }
    )
    agent_mix: dict = field(
        default_factory=lambda: {
            "small_vehicle": 0.7,
            "large_vehicle": 0.1,
            "two_wheeler": 0.15,
            "pedestrian": 0.05,
        }
    )
    green_s: float = 25.0
    yellow_s: float = 3.0
    red_s: float = 28.0
    arm_length_m: float = 60.0
    lane_offset_m: float = 3.5
    box_half_width_m: float = 12.0
    crosswalk_width_m: float = 4.0
    gap_width_m: float = 2.0
    duration_s: float = 120.0
    rate_hz: float = 10.0

    def __post_init__(self):
        if self.n_tracks < 0:
            raise ValueError("n_tracks must not be negative")
        if min(self.accel_noise_std, self.heading_noise_std, self.speed_jitter) < 0:
            raise ValueError("noise standard deviations must not be negative")
        if not 0 <= self.speed_jitter < 1:
            raise ValueError("speed_jitter must be in [0, 1)")
        if not self.speed_scale > 0:
            raise ValueError("speed_scale must be positive")
        for name, mix, keys in [
            ("behavior_mix", self.behavior_mix, BEHAVIORS),
            ("agent_mix", self.agent_mix, [agent.value for agent in AgentType]),
        ]:
            unknown = set(mix) - set(keys)
            if unknown:
                raise ValueError(f"unknown {name} keys {sorted(unknown)}")
            if any(weight < 0 for weight in mix.values()):
                raise ValueError(f"{name} weights must not be negative")
            if abs(sum(mix.values()) - 1.0) > 1e-9:
                raise ValueError(f"{name} weights must sum to 1")
        if min(self.green_s, self.yellow_s, self.red_s, self.duration_s, self.rate_hz) <= 0:
            raise ValueError("signal durations, duration_s and rate_hz must be positive")
        if not 0 < self.lane_offset_m < self.box_half_width_m:
            raise ValueError("lane_offset_m must be between 0 and box_half_width_m")
        if self.arm_length_m <= self.crosswalk_width_m + self.gap_width_m + STOP_MARGIN:
            raise ValueError("arm_length_m is too short for the crosswalk and gap")
        return

    def getCycle(self) -> float:
        return self.green_s + self.yellow_s + self.red_s

    def getStopLineDistance(self) -> float:
        """Arc length from an arm end to its stop line."""
        return self.arm_length_m - self.crosswalk_width_m - self.gap_width_m


def approachOffset(config: GeneratorConfig, approachId: int) -> float:
    """North-south approaches start the cycle at 0, east-west half a cycle later."""
    return 0.0 if approachId % 2 == 0 else config.getCycle() / 2.0


def signalPhase(config: GeneratorConfig, approachId: int, t: float) -> SignalPhase:
    tau = (t - approachOffset(config, approachId)) % config.getCycle()
    if tau < config.green_s:
        return SignalPhase.GREEN
    if tau < config.green_s + config.yellow_s:
        return SignalPhase.YELLOW
    return SignalPhase.RED


def intersectionMap(config: GeneratorConfig) -> MapSpec:
    """Six stage polygons and one stop line per arm.

    Stages of the south arm, in travel order: 1 inbound lane up to the stop
    line, 2 gap between stop line and crosswalk, 3 inbound crosswalk half,
    4 south quadrant of the box, 5 outbound crosswalk half, 6 outbound lane.
    """
    w2 = 2.0 * config.lane_offset_m
    b = config.box_half_width_m
    cw = config.crosswalk_width_m
    stopY = -(b + cw + config.gap_width_m)
    farY = -(b + config.arm_length_m)

    def rectangle(x0, x1, y0, y1):
        return [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]

    localStages = [
        (1, rectangle(0.0, w2, farY, stopY)),
        (2, rectangle(0.0, w2, stopY, -(b + cw))),
        (3, rectangle(0.0, w2, -(b + cw), -b)),
        (4, [(-b, -b), (b, -b), (0.0, 0.0)]),
        (5, rectangle(-w2, 0.0, -(b + cw), -b)),
        (6, rectangle(-w2, 0.0, farY, -(b + cw))),
    ]

    def rotate(rotation, vertex):
        return tuple(float(c) for c in rotation @ np.asarray(vertex))

    regions = []
    stopLines = []
    for arm, rotation in enumerate(ARM_ROTATIONS):
        for label, polygon in localStages:
            regions.append(
                MapRegion(label, arm, tuple(rotate(rotation, vertex) for vertex in polygon))
            )
        stopLines.append(
            StopLine(arm, rotate(rotation, (0.0, stopY)), rotate(rotation, (w2, stopY)))
        )
    return MapSpec(regions=regions, stop_lines=stopLines)


def signalTimeline(config: GeneratorConfig, horizon: float) -> SignalTimeline:
    """Fixed-time signal plan on [0, horizon] for the four approaches."""
    cycle = config.getCycle()
    phases = {}
    for approachId in range(4):
        offset = approachOffset(config, approachId)
        start = offset - cycle * np.ceil(offset / cycle)
        intervals = []
        while start < horizon:
            for phase, duration in [
                (SignalPhase.GREEN, config.green_s),
                (SignalPhase.YELLOW, config.yellow_s),
                (SignalPhase.RED, config.red_s),
            ]:
                lower = max(start, 0.0)
                upper = min(start + duration, horizon)
                if upper > lower:
                    intervals.append(PhaseInterval(phase, lower, upper))
                start += duration
        phases[approachId] = intervals
    return SignalTimeline(phases=phases)


@dataclass(frozen=True)
class BrakingPlan:
    """Undisturbed approach of a stop-and-go track, times relative to its start."""

    stopDistance: float
    deceleration: float
    brakeStart: float
    brakeTime: float
    stopTime: float


def brakingPlan(config: GeneratorConfig, speed: float) -> BrakingPlan:
    stopDistance = config.getStopLineDistance() - STOP_MARGIN
    deceleration = max(STOP_AND_GO_ACCELERATION, speed**2 / (1.8 * stopDistance))
    brakeStart = stopDistance - speed**2 / (2.0 * deceleration)
    brakeTime = brakeStart / speed
    return BrakingPlan(
        stopDistance, deceleration, brakeStart, brakeTime, brakeTime + speed / deceleration
    )


def _stopAndGoProfile(
    config: GeneratorConfig, speed: float, startTime: float, approachId: int, t: np.ndarray
) -> np.ndarray:
    """Arc length of a track that brakes to the stop line and departs on green."""
    plan = brakingPlan(config, speed)
    acceleration = STOP_AND_GO_ACCELERATION

    cycle = config.getCycle()
    offset = approachOffset(config, approachId)
    arrival = startTime + plan.stopTime
    if signalPhase(config, approachId, arrival) == SignalPhase.GREEN:
        greenTime = plan.stopTime
    else:
        nextCycle = offset + cycle * (np.floor((arrival - offset) / cycle) + 1.0)
        greenTime = nextCycle - startTime
    rampTime = speed / acceleration

    s = np.empty_like(t)
    cruise = t <= plan.brakeTime
    braking = (t > plan.brakeTime) & (t <= plan.stopTime)
    waiting = (t > plan.stopTime) & (t <= greenTime)
    starting = (t > greenTime) & (t <= greenTime + rampTime)
    leaving = t > greenTime + rampTime

    s[cruise] = speed * t[cruise]
    tau = t[braking] - plan.brakeTime
    s[braking] = plan.brakeStart + speed * tau - 0.5 * plan.deceleration * tau**2
    s[waiting] = plan.stopDistance
    tau = t[starting] - greenTime
    s[starting] = plan.stopDistance + 0.5 * acceleration * tau**2
    tau = t[leaving] - greenTime - rampTime
    s[leaving] = plan.stopDistance + 0.5 * acceleration * rampTime**2 + speed * tau
    return s


def _stopAndGoStartTime(
    config: GeneratorConfig, speed: float, approachId: int, rawStart: float, u: float
) -> float:
    """Start time on the snapping grid whose undisturbed stop falls into a red phase."""
    cycle = config.getCycle()
    offset = approachOffset(config, approachId)
    travel = brakingPlan(config, speed).stopTime
    arrival = rawStart + travel
    cycleStart = offset + cycle * np.floor((arrival - offset) / cycle)
    redStart = cycleStart + config.green_s + config.yellow_s
    margin = min(START_TIME_GRID, config.red_s / 4.0)
    if not redStart + START_TIME_GRID <= arrival <= cycleStart + cycle - margin:
        if arrival > redStart:
            redStart += cycle
        arrival = redStart + START_TIME_GRID + u * max(config.red_s - START_TIME_GRID - margin, 0.0)
    startTime = np.floor((arrival - travel) / START_TIME_GRID) * START_TIME_GRID
    while startTime < 0:
        startTime += cycle
    return float(startTime)


def _generateTrack(
    config: GeneratorConfig,
    rng: np.random.Generator,
    trackIndex: int,
    behavior: str,
    template: PathTemplate,
    arm: int,
    agentType: AgentType,
) -> Track:
    dt = 1.0 / config.rate_hz
    speed = NOMINAL_SPEEDS[agentType] * config.speed_scale
    speed *= 1.0 + config.speed_jitter * rng.uniform(-1.0, 1.0)
    rawStart = rng.uniform(0.0, config.duration_s)
    u = rng.uniform()

    length = template.getLength()
    if behavior == "stop_and_go":
        startTime = _stopAndGoStartTime(config, speed, arm, rawStart, u)
        waitBound = config.getCycle() + 2.0 * speed / STOP_AND_GO_ACCELERATION
    else:
        startTime = float(np.floor(rawStart / START_TIME_GRID) * START_TIME_GRID)
        waitBound = 0.0
    maxTime = 1.5 * (length / speed + waitBound) + 10.0
    numberOfSamples = int(np.ceil(maxTime / dt)) + 1
    t = np.arange(numberOfSamples) * dt

    accelerationNoise = rng.normal(0.0, config.accel_noise_std, numberOfSamples)
    headingNoise = rng.normal(0.0, config.heading_noise_std, numberOfSamples)

    if behavior == "stop_and_go":
        sTemplate = _stopAndGoProfile(config, speed, startTime, arm, t)
    else:
        sTemplate = speed * t

    templateSteps = np.diff(sTemplate)
    velocityNoise = np.cumsum(accelerationNoise) * dt
    steps = templateSteps + velocityNoise[1:] * dt * (templateSteps > 0)
    steps = np.maximum(steps, 0.0)
    s = np.concatenate([[0.0], np.cumsum(steps)])

    keep = int(np.searchsorted(s, length, side="left"))
    keep = max(keep, 2)
    s = s[:keep]

    (positions, headings) = template.evaluate(s)
    lateral = np.concatenate([[0.0], np.cumsum(steps[: keep - 1] * headingNoise[1:keep])])
    normals = np.column_stack([-np.sin(headings), np.cos(headings)])
    positions = positions + lateral[:, None] * normals

    return Track(
        track_id=f"{trackIndex:04d}",
        agent_type=agentType,
        times=startTime + t[:keep],
        positions=positions,
    )


def generate_scene(config: GeneratorConfig, scene_id: str = "synthetic") -> Scene:
    """Generate one synthetic intersection scene.

    Tracks follow straight, quarter-circle turn, half-turn and stop-and-go
    templates entering from a random arm, perturbed by acceleration noise
    (integrated twice into the arc length) and heading noise (a lateral
    random-walk drift). The scene carries the stage map and the signal
    plan. The output only depends on the configuration.

    :param config: Generator configuration.
    :param scene_id: Identifier of the scene.
    :returns: The scene.
    """
    rng = np.random.default_rng(config.seed)
    agentTypes = list(config.agent_mix.keys())
    agentWeights = np.array([config.agent_mix[a] for a in agentTypes])

    tracks = []
    for behavior in BEHAVIORS:
        count = int(round(5 * config.n_tracks * config.behavior_mix.get(behavior, 0.0)))
        for _ in range(count):
            arm = int(rng.integers(4))
            agentType = AgentType(agentTypes[int(rng.choice(len(agentTypes), p=agentWeights))])
            template = buildTemplate(
                behavior,
                arm,
                config.arm_length_m,
                config.lane_offset_m,
                config.box_half_width_m,
            )
            tracks.append(
                _generateTrack(config, rng, len(tracks), behavior, template, arm, agentType)
            )

    cycle = config.getCycle()
    horizon = max([config.duration_s] + [float(track.times[-1]) for track in tracks])
    horizon = (np.floor(horizon / cycle) + 1.0) * cycle
    logging.debug(f"generated {len(tracks)} tracks for scene {scene_id}")
    return Scene(
        scene_id=scene_id,
        tracks=tracks,
        map=intersectionMap(config),
        signals=signalTimeline(config, float(horizon)),
    )


def generate_dataset_family(
    base: GeneratorConfig, shifts: list[dict], n_jobs: int = 1
) -> list[tuple[str, Scene]]:
    """Generate a family of scenes with controlled distribution shifts.

    Member i uses the base configuration with the overrides of shifts[i] and
    the seed base.seed + i, unless the overrides set a seed. An optional
    ``name`` key names the member, the default is ``member_i``.

    .. code-block:: python

        family = generate_dataset_family(
            GeneratorConfig(seed=0),
            [{"name": "slow", "speed_scale": 1.0}, {"name": "fast", "speed_scale": 2.0}],
        )

    :param base: Base configuration.
    :param shifts: One override dictionary per member, at least two.
    :param n_jobs: joblib workers; the output does not depend on it.
    :returns: List of (name, scene).
    :raises ValueError: For fewer than two members, duplicate names or unknown keys.
    """
    if len(shifts) < 2:
        raise ValueError("a dataset family needs at least 2 members")

    names = []
    configs = []
    for index, overrides in enumerate(shifts):
        overrides = dict(overrides)
        names.append(str(overrides.pop("name", f"member_{index}")))
        overrides.setdefault("seed", base.seed + index)
        try:
            configs.append(dataclasses.replace(base, **overrides))
        except TypeError as exception:
            raise ValueError(f"invalid override in family member {index}: {exception}")

    if len(set(names)) != len(names):
        raise ValueError(f"duplicate dataset names in family: {names}")

    scenes = Parallel(n_jobs=n_jobs)(
        delayed(generate_scene)(config, name) for name, config in zip(names, configs)
    )
    return list(zip(names, scenes))
