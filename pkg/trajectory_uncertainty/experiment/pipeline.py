r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import os
import logging
import pandas as pd

from trajectory_uncertainty.analysis_tools.correlation_report import (
    category_summary,
    correlation_report,
    importance_report,
)
from trajectory_uncertainty.analysis_tools.distribution_comparison import compare_distributions
from trajectory_uncertainty.dataset.scene import PredictionWindow
from trajectory_uncertainty.ensemble.deep_ensemble import predictionTable
from trajectory_uncertainty.evaluation.retention import retentionAnalysis
from trajectory_uncertainty.experiment.config import WorkbenchConfig
from trajectory_uncertainty.experiment.cross_dataset import (
    PreparedDataset,
    evaluateCross,
    performanceFrame,
    prepareDataset,
    trainFamilyEnsembles,
)
from trajectory_uncertainty.experiment.method_comparison import compare_methods, trainDropoutModel
from trajectory_uncertainty.experiment.report import PipelineResults, RetentionEntry, emit_report
from trajectory_uncertainty.features.feature_table import featureFrame, feature_table
from trajectory_uncertainty.file_export.checkpoint_export import save_ensemble, save_model
from trajectory_uncertainty.synthgen.scene_generator import generate_dataset_family

#: (error metric, uncertainty metric) pairs of the retention analysis.
RETENTION_PAIRS = [("ADE", "APE"), ("FDE", "FPE")]


def windowFeatures(dataset: PreparedDataset, windows: list[PredictionWindow], config: WorkbenchConfig) -> pd.DataFrame:
    return featureFrame(feature_table(dataset.scene, windows, config.features), config.features.x_set)


def retentionEntries(performance: dict) -> list[RetentionEntry]:
    """Retention analyses of every method for both error/uncertainty pairs."""
    entries = []
    for method, frame in performance.items():
        for error, uncertainty in RETENTION_PAIRS:
            result = retentionAnalysis(frame[error].to_numpy(), frame[uncertainty].to_numpy())
            entries.append(RetentionEntry(method, error, uncertainty, result))
    return entries


def run_pipeline(config: WorkbenchConfig, out_dir: str) -> PipelineResults:
    """Run the complete workbench and write its report.

    The dataset family of the configuration is generated and prepared. One
    deep ensemble per family member is trained. On the first member the
    ensemble and an MC-dropout model are evaluated on the test windows,
    followed by retention, correlation, importance and category analyses
    of the test features and the method comparison. The feature
    distributions of all members are compared and the cross-dataset
    matrices are evaluated with the already trained ensembles.

    .. code-block:: python

        config = load_config("Examples/CrossDatasetShift/demo.json")
        results = run_pipeline(config.withOverrides(serial=True), "runs/demo")

    :param config: Workbench configuration.
    :param out_dir: Report directory.
    :returns: The results that were written.
    """
    family = generate_dataset_family(config.generator, config.family, n_jobs=config.getJobs())
    prepared = [prepareDataset(name, scene, config) for name, scene in family]
    ensembles = trainFamilyEnsembles(prepared, config)

    first = prepared[0]
    members = ensembles[0]
    dropoutModel = trainDropoutModel(first.split.train, config)
    ensembleDir = os.path.join(out_dir, "models", "ensemble")
    save_ensemble(members, ensembleDir)
    modelFiles = [os.path.join(ensembleDir, name) for name in sorted(os.listdir(ensembleDir))]
    modelFiles.append(save_model(dropoutModel, os.path.join(out_dir, "models", "mc_dropout.ckpt")))

    testWindows = first.split.test
    performance = {}
    predictions = {}
    for mode, models in [("ensemble", members), ("mc_dropout", [dropoutModel])]:
        (frame, modePredictions) = performanceFrame(models, testWindows, config, mode=mode)
        performance[mode] = frame
        predictions[mode] = predictionTable(testWindows, modePredictions)
    logging.info(
        f"{first.name}: test ADE {performance['ensemble']['ADE'].mean():.4g} (ensemble), "
        f"{performance['mc_dropout']['ADE'].mean():.4g} (MC dropout)"
    )

    features = windowFeatures(first, testWindows, config)
    ensemblePerformance = performance["ensemble"][["window_id", "ADE", "FDE", "APE", "FPE"]]
    results = PipelineResults(
        config=config,
        features=features,
        performance=performance,
        predictions=predictions,
        retention=retentionEntries(performance),
        correlations=correlation_report(features, ensemblePerformance),
        importances=importance_report(features, ensemblePerformance, config.getForestConfig(), config.getJobs()),
        categories=category_summary(features, ensemblePerformance),
        methods=compare_methods(first.split, config, members, dropoutModel),
        distributions=compare_distributions(
            [(dataset.name, windowFeatures(dataset, dataset.windows, config)) for dataset in prepared]
        ),
        cross=evaluateCross(prepared, ensembles, config),
    )
    emit_report(results, out_dir, modelFiles)
    return results
