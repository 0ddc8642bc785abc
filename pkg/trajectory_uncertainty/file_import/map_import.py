r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import json
from typing import Union

from trajectory_uncertainty.analysis_tools.error import TrackFormatError
from trajectory_uncertainty.dataset.scene import (
    MapRegion,
    MapSpec,
    PhaseInterval,
    SignalPhase,
    SignalTimeline,
    StopLine,
)


def _readJson(source: Union[str, dict]) -> dict:
    if isinstance(source, dict):
        return source
    with open(source, "r", encoding="utf-8") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as exception:
            raise TrackFormatError(f"{source} is not valid JSON: {exception}")


def mapFromDict(content: dict) -> MapSpec:
    """Build a map from its JSON document.

    .. code-block:: json

        {
          "regions": [
            {"label": 1, "approach_id": 0, "polygon": [[0, -60], [7, -60], [7, -18], [0, -18]]}
          ],
          "stop_lines": [
            {"approach_id": 0, "start": [0, -18], "end": [7, -18]}
          ]
        }

    Regions keep their order; it decides ties in the location lookup.

    :param content: Parsed JSON document.
    :returns: The map.
    """
    try:
        regions = [
            MapRegion(
                label=int(region["label"]),
                approach_id=int(region["approach_id"]),
                polygon=tuple(tuple(float(c) for c in vertex) for vertex in region["polygon"]),
            )
            for region in content.get("regions", [])
        ]
        stopLines = [
            StopLine(
                approach_id=int(line["approach_id"]),
                start=tuple(float(c) for c in line["start"]),
                end=tuple(float(c) for c in line["end"]),
            )
            for line in content.get("stop_lines", [])
        ]
    except (KeyError, TypeError, ValueError) as exception:
        raise TrackFormatError(f"malformed map document: {exception}")
    return MapSpec(regions=regions, stop_lines=stopLines)


def signalsFromDict(content: dict) -> SignalTimeline:
    """Build a signal timeline from its JSON document.

    .. code-block:: json

        {
          "approaches": {
            "0": [
              {"phase": "green", "start_s": 0.0, "end_s": 25.0},
              {"phase": "yellow", "start_s": 25.0, "end_s": 28.0},
              {"phase": "red", "start_s": 28.0, "end_s": 60.0}
            ]
          }
        }

    :param content: Parsed JSON document.
    :returns: The signal timeline.
    """
    try:
        phases = {}
        for approachId, intervals in content.get("approaches", {}).items():
            phases[int(approachId)] = [
                PhaseInterval(
                    phase=SignalPhase(interval["phase"]),
                    start_s=float(interval["start_s"]),
                    end_s=float(interval["end_s"]),
                )
                for interval in intervals
            ]
    except (KeyError, TypeError, ValueError) as exception:
        raise TrackFormatError(f"malformed signal document: {exception}")
    return SignalTimeline(phases=phases)


def load_map(source: Union[str, dict]) -> MapSpec:
    """Read a map file.

    :param source: Path to the JSON file or the parsed document.
    :returns: The map.
    """
    return mapFromDict(_readJson(source))


def load_signals(source: Union[str, dict]) -> SignalTimeline:
    """Read a signal timeline file.

    :param source: Path to the JSON file or the parsed document.
    :returns: The signal timeline.
    """
    return signalsFromDict(_readJson(source))
