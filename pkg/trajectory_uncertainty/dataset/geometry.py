r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import numpy as np
from typing import Optional, Sequence
from shapely.geometry import LineString, Point
from shapely.geometry.polygon import LinearRing, Polygon


def polygonIsSimple(polygon: Sequence) -> bool:
    """Check that a region outline is a valid polygon without self-intersections.

    :param polygon: List of (x, y) vertices, not closed.
    :returns: True for simple polygons with at least three vertices and a non-zero area.
    """
    if len(polygon) < 3:
        return False
    shape = Polygon(polygon)
    return LinearRing(polygon).is_simple and shape.is_valid and shape.area > 0.0


def pointInPolygon(point, polygon: Polygon) -> bool:
    """Point in polygon test; points on the boundary count as inside.

    :param point: (x, y) point.
    :param polygon: The region polygon.
    :returns: True if the point is inside or on the boundary.
    """
    return polygon.covers(Point(point[0], point[1]))


def polygonCentroid(polygon: Sequence) -> np.ndarray:
    """Area centroid of a simple polygon.

    :param polygon: List of (x, y) vertices, not closed.
    :returns: Centroid as array [x, y].
    """
    centroid = Polygon(polygon).centroid
    return np.array([centroid.x, centroid.y])


def segmentCrossingParameter(p1, p2, line: LineString) -> Optional[float]:
    """Fraction along the step p1-p2 at which it crosses a line.

    A step that only runs along the line, or has no length, does not cross it.

    :param p1: Start of the step.
    :param p2: End of the step.
    :param line: The crossed line, e.g. a stop line.
    :returns: u in [0, 1] such that p1 + u * (p2 - p1) is the crossing point, or None.
    """
    if p1[0] == p2[0] and p1[1] == p2[1]:
        return None
    step = LineString([tuple(p1), tuple(p2)])
    if not step.intersects(line):
        return None
    crossing = step.intersection(line)
    if crossing.geom_type != "Point":
        return None
    return min(max(step.project(crossing, normalized=True), 0.0), 1.0)


def wrapAngle(angle):
    """Wrap angles to the interval (-pi, pi].

    :param angle: Scalar or array in radians.
    :returns: Wrapped angle(s).
    """
    return np.pi - np.mod(np.pi - np.asarray(angle, dtype=float), 2.0 * np.pi)
