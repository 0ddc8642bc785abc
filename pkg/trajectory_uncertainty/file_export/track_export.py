r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import os
import json
import logging
import numpy as np
import pandas as pd

from trajectory_uncertainty.dataset.scene import MapSpec, Scene, SignalTimeline
from trajectory_uncertainty.file_import.track_import import (
    MAP_FILENAME,
    SIGNALS_FILENAME,
    TRACKS_FILENAME,
)


def mapToDict(mapSpec: MapSpec) -> dict:
    return {
        "regions": [
            {
                "label": region.label,
                "approach_id": region.approach_id,
                "polygon": [list(vertex) for vertex in region.polygon],
            }
            for region in mapSpec.regions
        ],
        "stop_lines": [
            {
                "approach_id": line.approach_id,
                "start": list(line.start),
                "end": list(line.end),
            }
            for line in mapSpec.stop_lines
        ],
    }


def signalsToDict(signals: SignalTimeline) -> dict:
    return {
        "approaches": {
            str(approachId): [
                {
                    "phase": interval.phase.value,
                    "start_s": interval.start_s,
                    "end_s": interval.end_s,
                }
                for interval in intervals
            ]
            for approachId, intervals in sorted(signals.phases.items())
        }
    }


def tracksToFrame(scene: Scene) -> pd.DataFrame:
    """Long table with one row per track point in track order."""
    columns = {"track_id": [], "t": [], "agent_type": [], "x": [], "y": []}
    for track in scene.tracks:
        n = track.getNumberOfPoints()
        columns["track_id"] += [track.track_id] * n
        columns["t"].append(track.times)
        columns["agent_type"] += [track.agent_type.value] * n
        columns["x"].append(track.positions[:, 0])
        columns["y"].append(track.positions[:, 1])
    for name in ["t", "x", "y"]:
        columns[name] = np.concatenate(columns[name]) if columns[name] else np.zeros(0)
    return pd.DataFrame(columns)


def write_scene(scene: Scene, out_dir: str) -> list[str]:
    """Write a scene as tracks.csv, map.json and signals.json.

    Floats are written in their shortest round-trip representation, so
    :func:`load_scene` reads back an identical scene.

    .. code-block:: python

        write_scene(generate_scene(GeneratorConfig(seed=3)), "data/seed3")

    :param scene: Scene to write.
    :param out_dir: Target directory, created if missing.
    :returns: Paths of the written files.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []

    tracksPath = os.path.join(out_dir, TRACKS_FILENAME)
    tracksToFrame(scene).to_csv(tracksPath, index=False, lineterminator="\n")
    written.append(tracksPath)

    if scene.map is not None:
        mapPath = os.path.join(out_dir, MAP_FILENAME)
        with open(mapPath, "w", encoding="utf-8") as f:
            json.dump(mapToDict(scene.map), f, indent=1)
        written.append(mapPath)

    if scene.signals is not None:
        signalPath = os.path.join(out_dir, SIGNALS_FILENAME)
        with open(signalPath, "w", encoding="utf-8") as f:
            json.dump(signalsToDict(scene.signals), f, indent=1)
        written.append(signalPath)

    logging.info(f"scene {scene.scene_id} written to {out_dir}")
    return written
