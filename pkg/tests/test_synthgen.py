r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import dataclasses
import numpy as np
import pytest

from conftest import onlyBehavior
from trajectory_uncertainty.dataset.scene import SignalPhase
from trajectory_uncertainty.features.categorical import classify_behavior
from trajectory_uncertainty.synthgen.path_template import buildTemplate
from trajectory_uncertainty.synthgen.scene_generator import (
    GeneratorConfig,
    generate_dataset_family,
    generate_scene,
    intersectionMap,
    signalPhase,
)


def netHeadingChange(positions: np.ndarray) -> float:
    entry = positions[1] - positions[0]
    exit = positions[-1] - positions[-2]
    change = np.arctan2(exit[1], exit[0]) - np.arctan2(entry[1], entry[0])
    return float(np.pi - np.mod(np.pi - change, 2.0 * np.pi))


class TestGeneratorConfig:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValueError):
            GeneratorConfig(behavior_mix={"straight": 0.5, "left": 0.4})

    def test_negative_noise(self):
        with pytest.raises(ValueError):
            GeneratorConfig(accel_noise_std=-0.1)

    def test_unknown_behavior(self):
        with pytest.raises(ValueError):
            GeneratorConfig(behavior_mix={"drift": 1.0})

    def test_positive_durations(self):
        with pytest.raises(ValueError):
            GeneratorConfig(red_s=0.0)


class TestGenerateScene:
    def test_noiseless_straight_speed(self, quietConfig):
        scene = generate_scene(onlyBehavior(quietConfig, "straight"))
        assert len(scene.tracks) == 10
        for track in scene.tracks:
            speeds = np.hypot(*np.diff(track.positions, axis=0).T) / np.diff(track.times)
            np.testing.assert_allclose(speeds, 8.0, atol=1e-9)

    def test_uniform_mix_gives_n_tracks_per_class(self, quietConfig):
        behaviors = ["straight", "left", "right", "u_turn", "stop_and_go"]
        config = dataclasses.replace(
            onlyBehavior(quietConfig, "straight"),
            n_tracks=3,
            behavior_mix={behavior: 0.2 for behavior in behaviors},
        )
        scene = generate_scene(config)
        labels = [classify_behavior(track, scene.map) for track in scene.tracks]
        assert len(scene.tracks) == 15
        # stop-and-go tracks drive straight through
        assert {label: labels.count(label) for label in set(labels)} == {
            "straight": 6,
            "left": 3,
            "right": 3,
            "u_turn": 3,
        }

    def test_deterministic(self):
        config = GeneratorConfig(seed=21, n_tracks=3)
        assert generate_scene(config) == generate_scene(config)

    def test_different_seeds_differ(self):
        first = generate_scene(GeneratorConfig(seed=1, n_tracks=2))
        second = generate_scene(GeneratorConfig(seed=2, n_tracks=2))
        assert first != second

    def test_left_turn_heading(self, quietConfig):
        scene = generate_scene(onlyBehavior(quietConfig, "left"))
        for track in scene.tracks:
            assert netHeadingChange(track.positions) == pytest.approx(np.pi / 2, abs=1e-6)

    def test_right_turn_heading(self, quietConfig):
        scene = generate_scene(onlyBehavior(quietConfig, "right"))
        for track in scene.tracks:
            assert netHeadingChange(track.positions) == pytest.approx(-np.pi / 2, abs=1e-6)

    def test_u_turn_heading(self, quietConfig):
        scene = generate_scene(onlyBehavior(quietConfig, "u_turn"))
        for track in scene.tracks:
            assert abs(netHeadingChange(track.positions)) == pytest.approx(np.pi, abs=1e-6)

    def test_arc_keeps_radius(self):
        template = buildTemplate("left", 0, 60.0, 3.5, 12.0)
        s = np.linspace(60.0, 60.0 + template.segments[1].length, 50)
        (positions, _) = template.evaluate(s)
        radii = np.hypot(positions[:, 0] + 12.0, positions[:, 1] + 12.0)
        np.testing.assert_allclose(radii, 15.5)

    def test_stop_and_go_waits_during_red(self, quietConfig):
        config = onlyBehavior(quietConfig, "stop_and_go")
        scene = generate_scene(config)
        assert len(scene.tracks) == 10
        for track in scene.tracks:
            speeds = np.hypot(*np.diff(track.positions, axis=0).T) / np.diff(track.times)
            stopped = np.where(speeds < 1e-9)[0]
            assert len(stopped) > 0
            entryRegions = scene.map.getRegionsByLabel(1)
            distances = [
                np.hypot(*(track.positions[0] - np.mean(region.polygon, axis=0)))
                for region in entryRegions
            ]
            approach = entryRegions[int(np.argmin(distances))].approach_id
            for index in stopped:
                assert signalPhase(config, approach, track.times[index] - 1e-6) != SignalPhase.GREEN

    def test_map_has_six_stages_per_arm(self, quietConfig):
        mapSpec = intersectionMap(quietConfig)
        assert len(mapSpec.regions) == 24
        for label in range(1, 7):
            assert len(mapSpec.getRegionsByLabel(label)) == 4
        assert len(mapSpec.stop_lines) == 4

    def test_signals_cover_tracks(self):
        scene = generate_scene(GeneratorConfig(seed=4, n_tracks=2))
        end = max(track.times[-1] for track in scene.tracks)
        for approachId in range(4):
            assert scene.signals.phaseAt(approachId, end) is not None
            assert scene.signals.phaseAt(approachId, 0.0) is not None

    def test_start_times_on_grid(self):
        scene = generate_scene(GeneratorConfig(seed=8, n_tracks=2))
        for track in scene.tracks:
            assert track.times[0] / 0.5 == pytest.approx(round(track.times[0] / 0.5))


class TestDatasetFamily:
    def test_speed_scale_doubles_mean_speed(self):
        base = GeneratorConfig(
            seed=0, n_tracks=8, behavior_mix={"straight": 1.0}, accel_noise_std=0.0
        )
        family = generate_dataset_family(base, [{"speed_scale": 1.0}, {"speed_scale": 2.0}])

        def meanSpeed(scene):
            speeds = [np.hypot(*np.diff(t.positions, axis=0).T) / np.diff(t.times) for t in scene.tracks]
            return float(np.mean(np.concatenate(speeds)))

        ratio = meanSpeed(family[1][1]) / meanSpeed(family[0][1])
        assert ratio == pytest.approx(2.0, rel=0.1)

    def test_names(self, quietConfig):
        family = generate_dataset_family(quietConfig, [{}, {"name": "fast", "speed_scale": 1.5}, {}])
        assert [name for name, _ in family] == ["member_0", "fast", "member_2"]
        assert [scene.scene_id for _, scene in family] == ["member_0", "fast", "member_2"]

    def test_empty_override_clones_base(self, quietConfig):
        family = generate_dataset_family(quietConfig, [{}, {"seed": quietConfig.seed}])
        assert family[0][1].tracks == family[1][1].tracks

    def test_duplicate_names(self, quietConfig):
        with pytest.raises(ValueError):
            generate_dataset_family(quietConfig, [{"name": "a"}, {"name": "a"}])

    def test_single_member(self, quietConfig):
        with pytest.raises(ValueError):
            generate_dataset_family(quietConfig, [{}])

    def test_unknown_override(self, quietConfig):
        with pytest.raises(ValueError):
            generate_dataset_family(quietConfig, [{}, {"warp": 9}])

    def test_parallel_equals_serial(self, quietConfig):
        shifts = [{}, {"speed_scale": 2.0}]
        serial = generate_dataset_family(quietConfig, shifts, n_jobs=1)
        parallel = generate_dataset_family(quietConfig, shifts, n_jobs=2)
        assert serial == parallel
