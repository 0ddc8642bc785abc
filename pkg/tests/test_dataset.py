r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import numpy as np
import pytest

from conftest import makeTrack
from trajectory_uncertainty.analysis_tools.error import TrackFormatError
from trajectory_uncertainty.dataset.resampling import resample_scene, resample_track
from trajectory_uncertainty.dataset.scene import (
    AgentType,
    MapRegion,
    MapSpec,
    PhaseInterval,
    Scene,
    SignalPhase,
    SignalTimeline,
    StopLine,
)
from trajectory_uncertainty.dataset.splitting import split_dataset
from trajectory_uncertainty.dataset.windows import extract_windows
from trajectory_uncertainty.file_export.track_export import write_scene
from trajectory_uncertainty.file_import.map_import import load_map, load_signals
from trajectory_uncertainty.file_import.track_import import load_scene, load_tracks
from trajectory_uncertainty.synthgen.scene_generator import GeneratorConfig, generate_scene


def writeCsv(path, text):
    path.write_text(text)
    return str(path)


class TestLoadTracks:
    def test_minimal_file(self, tmp_path):
        path = writeCsv(tmp_path / "one.csv", "track_id,t,agent_type,x,y\n7,0.0,pedestrian,1,2\n7,0.5,pedestrian,1.5,2\n")
        scene = load_tracks(path)
        assert scene.scene_id == "one"
        assert len(scene.tracks) == 1
        track = scene.tracks[0]
        assert track.track_id == "7"
        assert track.agent_type == AgentType.PEDESTRIAN
        assert track.getNumberOfPoints() == 2

    def test_rows_are_sorted_by_time(self, tmp_path):
        path = writeCsv(
            tmp_path / "shuffled.csv",
            "track_id,t,agent_type,x,y\na,1.0,two_wheeler,2,0\na,0.0,two_wheeler,0,0\na,0.5,two_wheeler,1,0\n",
        )
        track = load_tracks(path).tracks[0]
        np.testing.assert_array_equal(track.times, [0.0, 0.5, 1.0])
        np.testing.assert_array_equal(track.positions[:, 0], [0.0, 1.0, 2.0])

    def test_duplicate_timestamp(self, tmp_path):
        path = writeCsv(
            tmp_path / "dup.csv",
            "track_id,t,agent_type,x,y\na,0.0,small_vehicle,0,0\na,0.0,small_vehicle,1,0\n",
        )
        with pytest.raises(TrackFormatError, match="non-monotone timestamps"):
            load_tracks(path)

    def test_missing_column(self, tmp_path):
        path = writeCsv(tmp_path / "missing.csv", "track_id,t,agent_type,x\na,0.0,small_vehicle,0\n")
        with pytest.raises(TrackFormatError, match="missing column"):
            load_tracks(path)

    def test_unknown_agent_type(self, tmp_path):
        path = writeCsv(
            tmp_path / "bus.csv",
            "track_id,t,agent_type,x,y\na,0.0,bus,0,0\na,0.5,bus,1,0\n",
        )
        with pytest.raises(TrackFormatError, match="unknown agent_type"):
            load_tracks(path)

    def test_schema_mapping(self, tmp_path):
        path = writeCsv(
            tmp_path / "renamed.csv",
            "id,timestamp,class,px,py,vx\n1,0.0,large_vehicle,0,0,9\n1,0.5,large_vehicle,0,3,9\n",
        )
        scene = load_tracks(
            path, schema={"track_id": "id", "t": "timestamp", "agent_type": "class", "x": "px", "y": "py"}
        )
        np.testing.assert_array_equal(scene.tracks[0].positions, [[0, 0], [0, 3]])

    def test_generated_scene_round_trip(self, tmp_path, quietConfig):
        scene = generate_scene(quietConfig, scene_id="roundtrip")
        write_scene(scene, str(tmp_path / "roundtrip"))
        loaded = load_scene(str(tmp_path / "roundtrip"))
        assert loaded == scene

    def test_noisy_generated_scene_round_trip(self, tmp_path):
        scene = generate_scene(GeneratorConfig(seed=5, n_tracks=2), scene_id="noisy")
        write_scene(scene, str(tmp_path / "noisy"))
        assert load_scene(str(tmp_path / "noisy")) == scene


class TestLoadMapAndSignals:
    def test_map_document(self):
        mapSpec = load_map(
            {
                "regions": [{"label": 1, "approach_id": 0, "polygon": [[0, -60], [7, -60], [7, -18], [0, -18]]}],
                "stop_lines": [{"approach_id": 0, "start": [0, -18], "end": [7, -18]}],
            }
        )
        assert [region.label for region in mapSpec.regions] == [1]
        assert mapSpec.stop_lines[0].end == (7.0, -18.0)

    def test_map_without_polygon(self):
        with pytest.raises(TrackFormatError):
            load_map({"regions": [{"label": 1, "approach_id": 0}]})

    def test_signal_file(self, tmp_path):
        path = tmp_path / "signals.json"
        path.write_text(
            '{"approaches": {"2": [{"phase": "green", "start_s": 0, "end_s": 5},'
            ' {"phase": "red", "start_s": 5, "end_s": 9}]}}'
        )
        timeline = load_signals(str(path))
        assert timeline.phaseAt(2, 7.0) == SignalPhase.RED

    def test_unknown_phase(self):
        with pytest.raises(TrackFormatError):
            load_signals({"approaches": {"0": [{"phase": "blue", "start_s": 0, "end_s": 5}]}})

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{regions: ")
        with pytest.raises(TrackFormatError):
            load_map(str(path))


class TestSceneTypes:
    def test_duplicate_track_ids(self):
        track = makeTrack("a", [0, 1], [0, 0])
        with pytest.raises(TrackFormatError):
            Scene("dup", [track, track])

    def test_region_label_range(self):
        with pytest.raises(TrackFormatError):
            MapSpec(regions=[MapRegion(7, 0, ((0, 0), (1, 0), (0, 1)))])

    def test_self_intersecting_polygon(self):
        bowTie = ((0, 0), (1, 1), (1, 0), (0, 1))
        with pytest.raises(TrackFormatError):
            MapSpec(regions=[MapRegion(1, 0, bowTie)])

    def test_flat_polygon(self):
        with pytest.raises(TrackFormatError):
            MapSpec(regions=[MapRegion(1, 0, ((0, 0), (1, 0), (2, 0)))])

    def test_center(self):
        boxes = [
            MapRegion(4, 0, ((0, 0), (4, 0), (4, 2), (0, 2))),
            MapRegion(4, 1, ((0, 2), (4, 2), (4, 4), (0, 4))),
        ]
        np.testing.assert_allclose(MapSpec(regions=boxes).getCenter(), [2.0, 2.0])
        lines = [StopLine(0, (0, -2), (2, -2)), StopLine(1, (0, 4), (2, 4))]
        np.testing.assert_allclose(MapSpec(stop_lines=lines).getCenter(), [1.0, 1.0])

    def test_signal_gap_is_rejected(self):
        with pytest.raises(TrackFormatError):
            SignalTimeline(
                {0: [PhaseInterval(SignalPhase.GREEN, 0, 10), PhaseInterval(SignalPhase.RED, 11, 20)]}
            )

    def test_phase_boundary_belongs_to_ending_phase(self):
        timeline = SignalTimeline(
            {
                0: [
                    PhaseInterval(SignalPhase.GREEN, 0, 10),
                    PhaseInterval(SignalPhase.YELLOW, 10, 13),
                    PhaseInterval(SignalPhase.RED, 13, 30),
                ]
            }
        )
        assert timeline.phaseAt(0, 0.0) == SignalPhase.GREEN
        assert timeline.phaseAt(0, 13.0) == SignalPhase.YELLOW
        assert timeline.phaseAt(0, 13.5) == SignalPhase.RED
        assert timeline.phaseAt(0, 31.0) is None
        assert timeline.phaseAt(1, 5.0) is None


class TestResampling:
    def test_endpoints_preserved(self):
        track = makeTrack("a", [0, 1, 2], [0, 0, 0], dt=0.25)
        resampled = resample_track(track, 2.0)
        np.testing.assert_array_equal(resampled.times, [0.0, 0.5])
        np.testing.assert_array_equal(resampled.positions[:, 0], [0.0, 2.0])

    def test_idempotent(self):
        track = makeTrack("a", [0, 1, 3, 2], [0, 1, 1, 0], dt=0.5)
        assert resample_track(track, 2.0) == track

    def test_linear_interpolation(self):
        track = makeTrack("a", [0, 4], [0, 0], dt=1.0)
        resampled = resample_track(track, 2.0)
        np.testing.assert_allclose(resampled.times, [0.0, 0.5, 1.0])
        np.testing.assert_allclose(resampled.positions[:, 0], [0.0, 2.0, 4.0])

    def test_no_extrapolation(self):
        track = makeTrack("a", [0, 1, 2, 3], [0, 0, 0, 0], dt=0.3)
        resampled = resample_track(track, 2.0)
        assert resampled.times[-1] <= track.times[-1]
        assert resampled.positions[0, 0] == 0.0

    def test_too_short(self):
        track = makeTrack("a", [0, 1], [0, 0], dt=0.2)
        with pytest.raises(ValueError):
            resample_track(track, 2.0)

    def test_invalid_rate(self):
        with pytest.raises(ValueError):
            resample_track(makeTrack("a", [0, 1], [0, 0]), 0.0)

    def test_scene_drops_short_tracks(self):
        scene = Scene(
            "s",
            [makeTrack("long", [0, 1, 2], [0, 0, 0]), makeTrack("short", [0, 1], [0, 0], dt=0.1)],
        )
        assert resample_scene(scene, 2.0).getTrackIds() == ["long"]


class TestExtractWindows:
    def test_exact_length_gives_one_window(self):
        scene = Scene("s", [makeTrack("a", np.arange(13), np.zeros(13))])
        windows = extract_windows(scene)
        assert len(windows) == 1
        window = windows[0]
        assert window.history.shape == (7, 2)
        assert window.future.shape == (6, 2)
        assert window.history_times[-1] == window.t0
        assert len(window.neighbor_states) == 7

    def test_too_short_gives_no_window(self):
        scene = Scene("s", [makeTrack("a", np.arange(12), np.zeros(12))])
        assert extract_windows(scene) == []

    def test_stride(self):
        scene = Scene("s", [makeTrack("a", np.arange(20), np.zeros(20))])
        assert len(extract_windows(scene, stride_steps=1)) == 8
        assert len(extract_windows(scene, stride_steps=3)) == 3

    def test_parallel_neighbors(self, parallelScene):
        for window in extract_windows(parallelScene):
            for states in window.neighbor_states:
                assert states.shape == (1, 4)
                assert np.hypot(states[0, 0], states[0, 1]) == pytest.approx(5.0)
                np.testing.assert_allclose(states[0, 2:], [0.0, 0.0])

    def test_neighbors_match_brute_force(self):
        rng = np.random.default_rng(3)
        tracks = [
            makeTrack(f"{i}", rng.uniform(-40, 40) + np.cumsum(rng.normal(0, 1, 15)), rng.uniform(-40, 40) + np.cumsum(rng.normal(0, 1, 15)), t0=0.5 * rng.integers(0, 4))
            for i in range(12)
        ]
        scene = Scene("random", tracks)
        for window in extract_windows(scene, neighbor_radius_m=30.0, max_neighbors=3):
            target = scene.getTrack(window.target_track_id)
            for t, states in zip(window.history_times, window.neighbor_states):
                own = target.positions[np.argmin(np.abs(target.times - t))]
                distances = []
                for other in tracks:
                    if other.track_id == target.track_id:
                        continue
                    match = np.where(np.abs(other.times - t) < 1e-9)[0]
                    if len(match) == 1:
                        d = np.hypot(*(other.positions[match[0]] - own))
                        if d <= 30.0:
                            distances.append(d)
                expected = sorted(distances)[:3]
                np.testing.assert_allclose(np.hypot(states[:, 0], states[:, 1]), expected)

    def test_neighbor_cap(self):
        tracks = [makeTrack(f"{i}", np.arange(13) * 1.0, np.full(13, float(i))) for i in range(12)]
        windows = extract_windows(Scene("crowd", tracks), max_neighbors=8)
        assert all(len(states) == 8 for states in windows[0].neighbor_states)


class TestSplitDataset:
    def makeWindows(self, numberOfTracks):
        tracks = [makeTrack(f"{i}", np.arange(15) * 1.0, np.full(15, 100.0 * i)) for i in range(numberOfTracks)]
        return extract_windows(Scene("s", tracks))

    def test_ratio_and_determinism(self):
        windows = self.makeWindows(10)
        split = split_dataset(windows, 0.2, 7)
        testTracks = {w.target_track_id for w in split.test}
        assert len(testTracks) == 2
        again = split_dataset(windows, 0.2, 7)
        assert [w.window_id for w in again.test] == [w.window_id for w in split.test]

    def test_input_order_does_not_matter(self):
        windows = self.makeWindows(10)
        forward = split_dataset(windows, 0.3, 1)
        backward = split_dataset(windows[::-1], 0.3, 1)
        assert {w.window_id for w in forward.test} == {w.window_id for w in backward.test}

    def test_half_of_two(self):
        split = split_dataset(self.makeWindows(2), 0.5, 0)
        assert len({w.target_track_id for w in split.train}) == 1
        assert len({w.target_track_id for w in split.test}) == 1

    def test_no_leakage(self):
        split = split_dataset(self.makeWindows(10), 0.4, 3)
        trainTracks = {w.trackKey for w in split.train}
        assert all(w.trackKey not in trainTracks for w in split.test)
        assert len(split.train) + len(split.test) == 10 * 3

    @pytest.mark.parametrize("ratio", [0.0, 1.0, -0.1])
    def test_invalid_ratio(self, ratio):
        with pytest.raises(ValueError):
            split_dataset(self.makeWindows(4), ratio, 0)

    def test_single_track(self):
        with pytest.raises(ValueError):
            split_dataset(self.makeWindows(1), 0.5, 0)
