r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import os
import json
import hashlib
import logging
import pandas as pd
from dataclasses import dataclass, field
from typing import Optional

from trajectory_uncertainty.analysis_tools.distribution_comparison import DistributionComparison
from trajectory_uncertainty.evaluation.retention import (
    RetentionResult,
    curvesFrame,
    scoresFrame,
)
from trajectory_uncertainty.experiment.config import WorkbenchConfig
from trajectory_uncertainty.experiment.cross_dataset import (
    CROSS_METRICS,
    CrossMatrix,
    comprehensive_performance,
)
from trajectory_uncertainty.file_export.figure_export import writeSvg
from trajectory_uncertainty.file_export.table_export import writeTable
from trajectory_uncertainty.plotting.distribution_plot import histogramPlotter
from trajectory_uncertainty.plotting.matrix_plot import matrixPlotter
from trajectory_uncertainty.plotting.retention_plot import retentionPlotter, retentionScorePlotter

MANIFEST_FILENAME = "manifest.json"
TABLE_DIRECTORY = "tables"
FIGURE_DIRECTORY = "figures"

#: Features drawn as overlaid histograms of the distribution comparison.
HISTOGRAM_FEATURES = ["CV", "AVHT", "AAHT"]


@dataclass
class RetentionEntry:
    """Retention analysis of one (method, error metric, uncertainty metric) triple."""

    method: str
    error: str
    uncertainty: str
    result: RetentionResult


@dataclass
class PipelineResults:
    """Everything a workbench run produced; absent parts are skipped by the report."""

    config: WorkbenchConfig
    features: Optional[pd.DataFrame] = None
    performance: dict = field(default_factory=dict)
    predictions: dict = field(default_factory=dict)
    retention: list = field(default_factory=list)
    correlations: Optional[pd.DataFrame] = None
    importances: Optional[pd.DataFrame] = None
    categories: Optional[pd.DataFrame] = None
    methods: Optional[pd.DataFrame] = None
    distributions: Optional[DistributionComparison] = None
    cross: Optional[CrossMatrix] = None


def fileChecksum(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def writeManifest(config: WorkbenchConfig, outDir: str, files: list[str]) -> str:
    """Write manifest.json with the effective configuration, its hash and every artifact.

    Artifacts are listed relative to ``outDir`` in sorted order with their
    SHA-256 checksums. The manifest holds no timestamps.

    :param config: Effective configuration of the run.
    :param outDir: Output directory.
    :param files: Paths of the artifacts.
    :returns: Path of the manifest.
    """
    entries = sorted(
        (
            {
                "path": os.path.relpath(path, outDir).replace(os.sep, "/"),
                "sha256": fileChecksum(path),
            }
            for path in files
        ),
        key=lambda entry: entry["path"],
    )
    manifest = {
        "config": config.toDict(),
        "config_hash": config.configHash(),
        "files": entries,
    }
    path = os.path.join(outDir, MANIFEST_FILENAME)
    os.makedirs(outDir, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    logging.info(f"manifest with {len(entries)} artifacts written to {path}")
    return path


def retentionTables(entries: list[RetentionEntry]) -> tuple[pd.DataFrame, pd.DataFrame, pd.DataFrame]:
    """Long curve, AUC and score tables of several retention analyses."""
    curves = []
    scores = []
    aucRows = []
    for entry in entries:
        labels = {"method": entry.method, "error": entry.error, "uncertainty": entry.uncertainty}
        curves.append(curvesFrame(list(entry.result.curves.values()), **labels))
        fractions = entry.result.curves["uncertainty"].fractions
        scores.append(scoresFrame(fractions, entry.result.scores, **labels))
        for mode, auc in entry.result.aucs.items():
            aucRows.append({**labels, "mode": mode, "auc": auc})
    return (
        pd.concat(curves, ignore_index=True),
        pd.DataFrame(aucRows, columns=["method", "error", "uncertainty", "mode", "auc"]),
        pd.concat(scores, ignore_index=True),
    )


def _writeRetention(entries: list[RetentionEntry], tableDir: str, figureDir: str) -> list[str]:
    written = []
    (curves, aucs, scores) = retentionTables(entries)
    written.append(writeTable(curves, os.path.join(tableDir, "retention_curves.csv")))
    written.append(writeTable(aucs, os.path.join(tableDir, "retention_aucs.csv")))
    written.append(writeTable(scores, os.path.join(tableDir, "retention_scores.csv")))

    for entry in entries:
        (fig, _) = retentionPlotter(
            None, list(entry.result.curves.values()), label=f"{entry.error} ({entry.uncertainty}-ordered)"
        )
        written.append(writeSvg(fig, os.path.join(figureDir, f"retention_{entry.method}_{entry.error}.svg")))

    for method in sorted(set(entry.method for entry in entries)):
        fig = None
        ax = None
        for entry in entries:
            if entry.method != method:
                continue
            (fig, ax) = retentionScorePlotter(
                ax,
                entry.result.curves["uncertainty"].fractions,
                entry.result.scores,
                label=f"{entry.error}/{entry.uncertainty}",
                argsScores={"color": "red" if entry.error == "ADE" else "blue"},
            )
        written.append(writeSvg(fig, os.path.join(figureDir, f"retention_scores_{method}.svg")))
    return written


def _writeCross(cross: CrossMatrix, tableDir: str, figureDir: str) -> list[str]:
    written = [
        writeTable(cross.toFrame(), os.path.join(tableDir, "cross_matrix.csv")),
        writeTable(comprehensive_performance(cross), os.path.join(tableDir, "comprehensive_performance.csv")),
    ]
    for metric in CROSS_METRICS:
        (fig, _) = matrixPlotter(None, cross.matrices[metric], cross.names, title=metric)
        written.append(writeSvg(fig, os.path.join(figureDir, f"cross_{metric}.svg")))
    return written


def _writeDistributions(comparison: DistributionComparison, tableDir: str, figureDir: str) -> list[str]:
    written = [
        writeTable(comparison.summary, os.path.join(tableDir, "distribution_summary.csv")),
        writeTable(comparison.shares, os.path.join(tableDir, "distribution_shares.csv")),
    ]
    for feature in HISTOGRAM_FEATURES:
        samples = {
            name: table[feature].to_numpy(dtype=float)
            for name, table in comparison.tables.items()
            if feature in table.columns
        }
        if not samples:
            continue
        (fig, _) = histogramPlotter(None, samples, feature)
        written.append(writeSvg(fig, os.path.join(figureDir, f"histogram_{feature}.svg")))
    return written


def emit_report(results: PipelineResults, out_dir: str, extraFiles: list[str] = ()) -> list[str]:
    """Write the tables, figures and the manifest of a workbench run.

    Tables go to ``tables/`` as CSV, figures to ``figures/`` as SVG. Both are
    byte-identical for equal results. The manifest lists every artifact with
    its checksum together with the effective configuration and its hash.

    .. code-block:: python

        results = run_pipeline(load_config("demo.json"), "runs/demo")
        emit_report(results, "runs/demo_copy")

    :param results: Results of a run; parts that are None or empty are skipped.
    :param out_dir: Output directory, created if missing.
    :param extraFiles: Files written elsewhere under out_dir that the manifest lists too.
    :returns: Paths of all written files, the manifest last.
    """
    tableDir = os.path.join(out_dir, TABLE_DIRECTORY)
    figureDir = os.path.join(out_dir, FIGURE_DIRECTORY)
    written = []

    if results.features is not None:
        written.append(writeTable(results.features, os.path.join(tableDir, "features.csv")))
    for mode, frame in sorted(results.performance.items()):
        written.append(writeTable(frame, os.path.join(tableDir, f"performance_{mode}.csv")))
    for mode, frame in sorted(results.predictions.items()):
        written.append(writeTable(frame, os.path.join(tableDir, f"predictions_{mode}.csv")))
    if results.retention:
        written += _writeRetention(results.retention, tableDir, figureDir)

    for name, frame in [
        ("correlations", results.correlations),
        ("importances", results.importances),
        ("category_summary", results.categories),
        ("method_comparison", results.methods),
    ]:
        if frame is not None:
            written.append(writeTable(frame, os.path.join(tableDir, f"{name}.csv")))

    if results.distributions is not None:
        written += _writeDistributions(results.distributions, tableDir, figureDir)
    if results.cross is not None:
        written += _writeCross(results.cross, tableDir, figureDir)

    for path in written:
        logging.info(f"written {path}")
    written.append(writeManifest(results.config, out_dir, written + list(extraFiles)))
    return written
