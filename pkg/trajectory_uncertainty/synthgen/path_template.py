r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import numpy as np
from dataclasses import dataclass
from typing import Union

#: Exact rotation matrices of the four arms, counter-clockwise in 90 degree steps.
ARM_ROTATIONS = [
    np.array([[1.0, 0.0], [0.0, 1.0]]),
    np.array([[0.0, -1.0], [1.0, 0.0]]),
    np.array([[-1.0, 0.0], [0.0, -1.0]]),
    np.array([[0.0, 1.0], [-1.0, 0.0]]),
]

BEHAVIORS = ["straight", "left", "right", "u_turn", "stop_and_go"]


@dataclass(frozen=True)
class LineSegment:
    start: tuple
    heading: float
    length: float

    def evaluate(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        direction = np.array([np.cos(self.heading), np.sin(self.heading)])
        positions = np.asarray(self.start) + s[:, None] * direction
        return positions, np.full(len(s), self.heading)


@dataclass(frozen=True)
class ArcSegment:
    """Circular arc; a positive ``sweepAngle`` turns counter-clockwise."""

    center: tuple
    radius: float
    startAngle: float
    sweepAngle: float

    @property
    def length(self) -> float:
        return self.radius * abs(self.sweepAngle)

    def evaluate(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        sign = np.sign(self.sweepAngle)
        angles = self.startAngle + sign * s / self.radius
        positions = np.asarray(self.center) + self.radius * np.column_stack(
            [np.cos(angles), np.sin(angles)]
        )
        return positions, angles + sign * np.pi / 2


Segment = Union[LineSegment, ArcSegment]


class PathTemplate:
    """Piecewise path of line and arc segments, parametrized by arc length.

    :param segments: Consecutive segments; each starts where the previous ends.
    :param rotation: 2x2 rotation applied to the evaluated positions.
    """

    def __init__(self, segments: list[Segment], rotation: np.ndarray = ARM_ROTATIONS[0]):
        self.segments = segments
        self.rotation = rotation
        self.lengths = np.array([segment.length for segment in segments])
        self.offsets = np.concatenate([[0.0], np.cumsum(self.lengths)])
        return

    def getLength(self) -> float:
        return float(self.offsets[-1])

    def evaluate(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Positions (n, 2) and headings (n,) at the arc lengths s."""
        s = np.clip(np.asarray(s, dtype=float), 0.0, self.getLength())
        positions = np.zeros((len(s), 2))
        headings = np.zeros(len(s))
        segmentIndex = np.searchsorted(self.offsets[1:], s, side="left")
        segmentIndex = np.minimum(segmentIndex, len(self.segments) - 1)
        for index, segment in enumerate(self.segments):
            selected = segmentIndex == index
            if np.any(selected):
                (positions[selected], headings[selected]) = segment.evaluate(
                    s[selected] - self.offsets[index]
                )
        rotationAngle = np.arctan2(self.rotation[1, 0], self.rotation[0, 0])
        return positions @ self.rotation.T, headings + rotationAngle


def buildTemplate(
    behavior: str, arm: int, armLength: float, laneOffset: float, boxHalfWidth: float
) -> PathTemplate:
    """Path of one behavior entering from one arm.

    Templates are laid out for the south arm with right-hand traffic: the
    inbound lane runs north at x = laneOffset, the intersection box is the
    square of half width boxHalfWidth around the origin. Other arms are
    exact rotations.

    :param behavior: One of straight, left, right, u_turn, stop_and_go.
    :param arm: Entry arm, 0 south, 1 east, 2 north, 3 west.
    :returns: The rotated template.
    """
    w = laneOffset
    b = boxHalfWidth
    entry = LineSegment((w, -(b + armLength)), np.pi / 2, armLength)

    if behavior in ("straight", "stop_and_go"):
        segments = [LineSegment((w, -(b + armLength)), np.pi / 2, 2.0 * (b + armLength))]
    elif behavior == "left":
        segments = [
            entry,
            ArcSegment((-b, -b), b + w, 0.0, np.pi / 2),
            LineSegment((-b, w), np.pi, armLength),
        ]
    elif behavior == "right":
        segments = [
            entry,
            ArcSegment((b, -b), b - w, np.pi, -np.pi / 2),
            LineSegment((b, -w), 0.0, armLength),
        ]
    elif behavior == "u_turn":
        segments = [
            entry,
            ArcSegment((0.0, -b), w, 0.0, np.pi),
            LineSegment((-w, -b), -np.pi / 2, armLength),
        ]
    else:
        raise ValueError(f"unknown behavior {behavior!r}")
    return PathTemplate(segments, ARM_ROTATIONS[arm])
