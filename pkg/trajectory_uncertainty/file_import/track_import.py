r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import os
import numpy as np
import pandas as pd
from typing import Optional

from trajectory_uncertainty.analysis_tools.error import TrackFormatError
from trajectory_uncertainty.dataset.scene import AgentType, Scene, Track
from trajectory_uncertainty.file_import.map_import import load_map, load_signals

REQUIRED_COLUMNS = ["track_id", "t", "agent_type", "x", "y"]
OPTIONAL_COLUMNS = ["vx", "vy", "heading"]

TRACKS_FILENAME = "tracks.csv"
MAP_FILENAME = "map.json"
SIGNALS_FILENAME = "signals.json"


def load_tracks(
    path: str,
    schema: Optional[dict] = None,
    map_path: Optional[str] = None,
    signal_path: Optional[str] = None,
    scene_id: Optional[str] = None,
) -> Scene:
    """Read a track CSV file into a scene.

    The file needs a header with the columns track_id, t, agent_type, x and y.
    Other column names can be mapped with the schema dictionary, which maps
    the canonical name to the name used in the file:

    .. code-block:: python

        scene = load_tracks(
            "recording_07.csv",
            schema={"track_id": "id", "t": "timestamp"},
            map_path="map.json",
            signal_path="signals.json",
        )

    The optional columns vx, vy and heading are accepted and ignored;
    velocities are always recomputed from positions.

    :param path: Path to the CSV file.
    :param schema: Optional map from canonical column name to file column name.
    :param map_path: Optional map JSON file attached to the scene.
    :param signal_path: Optional signal JSON file attached to the scene.
    :param scene_id: Scene identifier, defaults to the file name without extension.
    :returns: Scene with one track per track_id, points sorted by time.
    :raises TrackFormatError: For missing columns, non-monotone timestamps or unknown agent types.
    """
    schema = dict(schema or {})
    fileColumns = {name: schema.get(name, name) for name in REQUIRED_COLUMNS}

    frame = pd.read_csv(
        path,
        dtype={fileColumns["track_id"]: str, fileColumns["agent_type"]: str},
        float_precision="round_trip",
    )
    missing = [name for name, column in fileColumns.items() if column not in frame.columns]
    if missing:
        raise TrackFormatError(f"missing column(s) {missing} in {path}")

    frame = frame.rename(columns={column: name for name, column in fileColumns.items()})

    if scene_id is None:
        (_, filename) = os.path.split(path)
        scene_id = os.path.splitext(filename)[0]

    tracks = []
    for trackId, group in frame.groupby("track_id", sort=False):
        group = group.sort_values("t", kind="mergesort")
        times = group["t"].to_numpy(dtype=float)
        if np.any(np.diff(times) <= 0.0):
            raise TrackFormatError(f"non-monotone timestamps in track {trackId}")
        agentTags = group["agent_type"].unique()
        if len(agentTags) != 1:
            raise TrackFormatError(f"track {trackId} has more than one agent_type")
        tracks.append(
            Track(
                track_id=str(trackId),
                agent_type=AgentType.fromTag(agentTags[0]),
                times=times,
                positions=group[["x", "y"]].to_numpy(dtype=float),
            )
        )

    mapSpec = load_map(map_path) if map_path is not None else None
    signals = load_signals(signal_path) if signal_path is not None else None
    return Scene(scene_id=scene_id, tracks=tracks, map=mapSpec, signals=signals)


def load_scene(directory: str, scene_id: Optional[str] = None) -> Scene:
    """Read a scene directory written by :func:`write_scene`.

    The directory holds tracks.csv and optionally map.json and signals.json.

    :param directory: Scene directory.
    :param scene_id: Scene identifier, defaults to the directory name.
    :returns: The scene.
    """
    mapPath = os.path.join(directory, MAP_FILENAME)
    signalPath = os.path.join(directory, SIGNALS_FILENAME)
    if scene_id is None:
        scene_id = os.path.basename(os.path.normpath(directory))
    return load_tracks(
        os.path.join(directory, TRACKS_FILENAME),
        map_path=mapPath if os.path.exists(mapPath) else None,
        signal_path=signalPath if os.path.exists(signalPath) else None,
        scene_id=scene_id,
    )
