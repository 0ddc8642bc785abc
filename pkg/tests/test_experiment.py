r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import os
import re
import json
import numpy as np
import pytest

from trajectory_uncertainty.analysis_tools.error import TrainingDivergenceError
from trajectory_uncertainty.ensemble.deep_ensemble import train_ensemble
from trajectory_uncertainty.evaluation.displacement_error import ade
from trajectory_uncertainty.evaluation.retention import retentionAnalysis
from trajectory_uncertainty.experiment.cli import cli
from trajectory_uncertainty.experiment.config import WorkbenchConfig, load_config
from trajectory_uncertainty.experiment.cross_dataset import (
    CROSS_METRICS,
    comprehensive_performance,
    performanceFrame,
    prepareDataset,
    run_cross_dataset,
)
from trajectory_uncertainty.experiment.method_comparison import compare_methods
from trajectory_uncertainty.experiment.pipeline import run_pipeline
from trajectory_uncertainty.experiment.report import PipelineResults, emit_report
from trajectory_uncertainty.file_import.checkpoint_import import load_ensemble
from trajectory_uncertainty.file_import.table_import import readTable
from trajectory_uncertainty.file_import.track_import import load_scene
from trajectory_uncertainty.synthgen.scene_generator import generate_dataset_family

SMALL_CONFIG = {
    "seed": 1,
    "serial": True,
    "generator": {"n_tracks": 2, "duration_s": 60.0},
    "family": [{"name": "base"}, {"name": "fast", "speed_scale": 2.0}],
    "model": {"hidden_size": 4},
    "training": {"batch_size": 16, "epochs": 1},
    "ensemble": {"K": 2},
    "forest": {"n_trees": 5},
}


def smallConfig(**changes) -> WorkbenchConfig:
    return WorkbenchConfig.fromDict({**SMALL_CONFIG, **changes})


@pytest.fixture
def configFile(tmp_path):
    path = tmp_path / "small.json"
    path.write_text(json.dumps(SMALL_CONFIG), encoding="utf-8")
    return str(path)


def readBytes(path) -> bytes:
    with open(path, "rb") as f:
        return f.read()


class TestConfig:
    def test_defaults(self):
        config = WorkbenchConfig()
        assert config.ensemble.K == 5
        assert config.dataset.t_h_steps == 6
        assert config.getTrainingConfig().getL2Coefficient() == 0.0
        assert config.getTrainingConfig(dropout_rate=0.5).getL2Coefficient() == pytest.approx(1e-4)
        assert config.getForestConfig().n_trees == 100

    def test_sections_merge_over_defaults(self):
        config = smallConfig()
        assert config.generator.n_tracks == 2
        assert config.generator.speed_scale == 1.0
        assert config.getTrainingConfig().learning_rate == pytest.approx(1e-3)
        assert config.getTrainingConfig().hidden_size == 4

    @pytest.mark.parametrize(
        "content",
        [
            {"unknown": 1},
            {"training": {"momentum": 0.9}},
            {"training": {"seed": 3}},
            {"ensemble": {"K": 1}},
            {"evaluation": {"uncertainty": "variance"}},
            {"family": {"name": "base"}},
        ],
    )
    def test_rejects_bad_content(self, content):
        with pytest.raises(ValueError):
            WorkbenchConfig.fromDict(content)

    def test_hash(self):
        assert smallConfig().configHash() == smallConfig().configHash()
        assert smallConfig().configHash() != smallConfig().withOverrides(seed=2).configHash()
        assert len(smallConfig().configHash()) == 64

    def test_effective_config_round_trip(self):
        config = smallConfig()
        assert WorkbenchConfig.fromDict(config.toDict()).configHash() == config.configHash()

    def test_overrides(self):
        config = WorkbenchConfig().withOverrides(seed=7, serial=True)
        assert config.seed == 7
        assert config.getJobs() == 1
        assert config.generator.seed == 0

    def test_load_config(self, configFile, tmp_path):
        assert load_config(configFile).configHash() == smallConfig().configHash()
        broken = tmp_path / "broken.json"
        broken.write_text("{seed: 1", encoding="utf-8")
        with pytest.raises(ValueError):
            load_config(str(broken))


class TestCrossDataset:
    def test_matrix_shapes(self):
        config = smallConfig()
        family = generate_dataset_family(config.generator, config.family)
        cross = run_cross_dataset(family, config)
        assert cross.names == ["base", "fast"]
        for metric in CROSS_METRICS:
            assert cross.matrices[metric].shape == (2, 2)
            assert np.all(np.isfinite(cross.matrices[metric]))
        assert len(cross.toFrame()) == len(CROSS_METRICS) * 4

        comprehensive = comprehensive_performance(cross)
        assert len(comprehensive) == len(CROSS_METRICS) * 2 * 2
        trainRow = comprehensive[
            (comprehensive["metric"] == "APE") & (comprehensive["role"] == "train") & (comprehensive["dataset"] == "base")
        ]
        assert trainRow["value"].iloc[0] == pytest.approx(cross.matrices["APE"][0].mean())

    def test_identical_datasets_give_identical_rows(self):
        config = smallConfig(family=[{"name": "a", "seed": 5}, {"name": "b", "seed": 5}])
        family = generate_dataset_family(config.generator, config.family)
        cross = run_cross_dataset(family, config)
        for metric in CROSS_METRICS:
            matrix = cross.matrices[metric]
            np.testing.assert_array_equal(matrix[0], matrix[1])
            np.testing.assert_array_equal(matrix[:, 0], matrix[:, 1])

    def test_needs_two_datasets(self):
        config = smallConfig()
        family = generate_dataset_family(config.generator, config.family)
        with pytest.raises(ValueError):
            run_cross_dataset(family[:1], config)
        with pytest.raises(ValueError):
            run_cross_dataset([family[0], family[0]], config)

    def test_divergence_names_dataset_and_member(self):
        config = smallConfig(training={"batch_size": 16, "epochs": 1, "learning_rate": 1e300})
        family = generate_dataset_family(config.generator, config.family)
        with np.errstate(all="ignore"), pytest.raises(TrainingDivergenceError) as info:
            run_cross_dataset(family, config)
        assert "dataset 0" in info.value.message
        assert "ensemble member 0" in info.value.message


class TestMethodComparison:
    def test_ensemble_ade_below_member_average(self):
        config = smallConfig(ensemble={"K": 3})
        family = generate_dataset_family(config.generator, config.family)
        prepared = prepareDataset(*family[0], config)
        members = train_ensemble(prepared.split.train, config.getTrainingConfig(), K=3)
        (frame, predictions) = performanceFrame(members, prepared.split.test, config)
        memberAverage = [
            np.mean([ade(memberPositions, window.future) for memberPositions in prediction.member_predictions])
            for prediction, window in zip(predictions, prepared.split.test)
        ]
        assert np.all(frame["ADE"].to_numpy() <= np.asarray(memberAverage) + 1e-9)

    def test_rows(self):
        config = smallConfig()
        family = generate_dataset_family(config.generator, config.family)
        prepared = prepareDataset(*family[0], config)
        table = compare_methods(prepared.split, config)
        assert list(table.columns) == ["method", "subset", "ADE", "FDE", "APE", "FPE"]
        assert list(zip(table["method"], table["subset"])) == [
            ("single", "train"),
            ("single", "test"),
            ("mc_dropout", "train"),
            ("mc_dropout", "test"),
            ("ensemble", "train"),
            ("ensemble", "test"),
        ]
        single = table[table["method"] == "single"]
        assert single["APE"].isna().all()
        assert single["FPE"].isna().all()
        assert table[table["method"] != "single"][["ADE", "FDE", "APE", "FPE"]].notna().all().all()


@pytest.fixture(scope="module")
def pipelineRuns(tmp_path_factory):
    config = smallConfig()
    first = str(tmp_path_factory.mktemp("first"))
    second = str(tmp_path_factory.mktemp("second"))
    return run_pipeline(config, first), first, second, run_pipeline(config, second)


class TestReport:
    def test_manifest_lists_artifacts(self, pipelineRuns):
        (results, first, _, _) = pipelineRuns
        with open(os.path.join(first, "manifest.json"), "r", encoding="utf-8") as f:
            manifest = json.load(f)
        paths = [entry["path"] for entry in manifest["files"]]
        assert len(paths) >= 8
        assert paths == sorted(paths)
        assert manifest["config_hash"] == results.config.configHash()
        assert manifest["config"] == results.config.toDict()
        assert "tables/cross_matrix.csv" in paths
        assert "figures/cross_ADE_ensemble.svg" in paths
        assert "models/ensemble/member_00.ckpt" in paths
        for path in paths:
            assert os.path.exists(os.path.join(first, path))

    def test_rerun_is_byte_identical(self, pipelineRuns):
        (_, first, second, _) = pipelineRuns
        with open(os.path.join(first, "manifest.json"), "r", encoding="utf-8") as f:
            paths = [entry["path"] for entry in json.load(f)["files"]]
        for path in paths:
            if path.endswith(".csv"):
                assert readBytes(os.path.join(first, path)) == readBytes(os.path.join(second, path)), path
        assert pipelineRuns[0].config.configHash() == pipelineRuns[3].config.configHash()

    def test_heatmap_cells(self, pipelineRuns):
        (results, first, _, _) = pipelineRuns
        size = results.cross.getSize()
        svg = readBytes(os.path.join(first, "figures", "cross_APE.svg")).decode("utf-8")
        cells = set(re.findall(r'id="(cell_\d+_\d+)"', svg))
        assert len(cells) == size**2

    def test_retention_for_both_methods_and_pairs(self, pipelineRuns):
        (_, first, _, _) = pipelineRuns
        aucs = readTable(os.path.join(first, "tables", "retention_aucs.csv"))
        pairs = set(zip(aucs["method"], aucs["error"], aucs["uncertainty"]))
        assert pairs == {
            ("ensemble", "ADE", "APE"),
            ("ensemble", "FDE", "FPE"),
            ("mc_dropout", "ADE", "APE"),
            ("mc_dropout", "FDE", "FPE"),
        }
        for _, row in aucs[aucs["mode"] == "random"].iterrows():
            assert row["auc"] >= 0.0

    def test_cross_only_report(self, pipelineRuns, tmp_path):
        (results, _, _, _) = pipelineRuns
        written = emit_report(PipelineResults(config=results.config, cross=results.cross), str(tmp_path))
        names = sorted(os.path.relpath(path, tmp_path).replace(os.sep, "/") for path in written)
        assert names == sorted(
            ["tables/cross_matrix.csv", "tables/comprehensive_performance.csv", "manifest.json"]
            + [f"figures/cross_{metric}.svg" for metric in CROSS_METRICS]
        )


class TestCli:
    def test_missing_config(self, tmp_path):
        assert cli(["cross", "--out", str(tmp_path)]) == 1

    def test_unknown_command(self, configFile):
        assert cli(["fly", "--config", configFile]) == 1

    def test_unknown_flag(self, configFile):
        assert cli(["cross", "--config", configFile, "--fast"]) == 1

    def test_runtime_errors(self, tmp_path):
        assert cli(["synth", "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path)]) == 2
        broken = tmp_path / "broken.json"
        broken.write_text(json.dumps({"ensemble": {"K": 1}}), encoding="utf-8")
        assert cli(["synth", "--config", str(broken), "--out", str(tmp_path)]) == 2

    def test_cross(self, configFile, tmp_path):
        out = str(tmp_path / "cross")
        assert cli(["cross", "--config", configFile, "--out", out, "--serial"]) == 0
        frame = readTable(os.path.join(out, "tables", "cross_matrix.csv"))
        assert len(frame) == len(CROSS_METRICS) * 4
        assert os.path.exists(os.path.join(out, "manifest.json"))

    def test_chain_matches_library(self, configFile, tmp_path):
        data = str(tmp_path / "data")
        models = str(tmp_path / "models")
        evaluation = str(tmp_path / "eval")
        retention = str(tmp_path / "retention")
        analysis = str(tmp_path / "analysis")
        features = str(tmp_path / "features")
        common = ["--config", configFile, "--serial"]

        assert cli(["synth", *common, "--out", data, "--family"]) == 0
        scene = os.path.join(data, "base")
        assert cli(["features", *common, "--scene", scene, "--out", features]) == 0
        assert cli(["train", *common, "--scene", scene, "--ensemble", "2", "--out", models]) == 0
        ensembleDir = os.path.join(models, "ensemble")
        assert cli(["eval", *common, "--scene", scene, "--models", ensembleDir, "--out", evaluation]) == 0
        performancePath = os.path.join(evaluation, "tables", "performance.csv")
        assert cli(["retention", *common, "--performance", performancePath, "--out", retention]) == 0
        assert (
            cli(
                [
                    "analyze",
                    *common,
                    "--features",
                    os.path.join(features, "tables", "features.csv"),
                    "--performance",
                    performancePath,
                    "--out",
                    analysis,
                ]
            )
            == 0
        )
        assert os.path.exists(os.path.join(analysis, "tables", "importances.csv"))

        config = load_config(configFile)
        prepared = prepareDataset("scene", load_scene(scene), config)
        (frame, _) = performanceFrame(load_ensemble(ensembleDir), prepared.split.test, config)
        result = retentionAnalysis(frame["ADE"].to_numpy(), frame["APE"].to_numpy())
        curves = readTable(os.path.join(retention, "tables", "retention_curves.csv"))
        for mode, curve in result.curves.items():
            values = curves[curves["mode"] == mode]["value"].to_numpy()
            np.testing.assert_array_equal(values, curve.values)
