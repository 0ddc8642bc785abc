r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import logging
import numpy as np
import pandas as pd
from typing import Optional

from trajectory_uncertainty.analysis_tools.random_forest import (
    ForestConfig,
    feature_importance,
    fit_forest,
)
from trajectory_uncertainty.analysis_tools.spearman import spearman
from trajectory_uncertainty.features.feature_table import CATEGORICAL_COLUMNS, KINEMATIC_COLUMNS

PERFORMANCE_METRICS = ["ADE", "FDE", "APE", "FPE"]


def alignTables(featureTable: pd.DataFrame, performanceTable: pd.DataFrame) -> pd.DataFrame:
    """Join both tables on window_id, keeping the feature table order.

    :raises ValueError: If a feature row has no performance row.
    """
    metrics = [metric for metric in PERFORMANCE_METRICS if metric in performanceTable.columns]
    merged = featureTable.merge(
        performanceTable[["window_id"] + metrics], on="window_id", how="left", validate="one_to_one"
    )
    if merged[metrics].isna().all(axis=1).any():
        raise ValueError("feature and performance tables are not aligned on window_id")
    return merged


def numericFeatureColumns(featureTable: pd.DataFrame) -> list[str]:
    """Kinematic and interaction columns present in a feature table, in table order."""
    interaction = [
        column for column in featureTable.columns if column.startswith(("NTP_", "DTP_", "DCTP_"))
    ]
    return [column for column in KINEMATIC_COLUMNS if column in featureTable.columns] + interaction


def correlation_report(featureTable: pd.DataFrame, performanceTable: pd.DataFrame) -> pd.DataFrame:
    """Spearman correlation of every numeric feature with every performance metric.

    Rows are the numeric features, columns the metrics present among ADE,
    FDE, APE and FPE. A pair with a constant column has no defined
    correlation and is reported as NaN.

    .. code-block:: python

        matrix = correlation_report(features, performance)
        writeTable(matrix, "correlations.csv")

    :param featureTable: Feature table of the windows.
    :param performanceTable: Table with window_id and the metric columns.
    :returns: Table with a leading ``feature`` column.
    """
    merged = alignTables(featureTable, performanceTable)
    metrics = [metric for metric in PERFORMANCE_METRICS if metric in merged.columns]
    rows = []
    for feature in numericFeatureColumns(featureTable):
        row = {"feature": feature}
        for metric in metrics:
            valid = merged[[feature, metric]].dropna()
            try:
                row[metric] = spearman(valid[feature], valid[metric])
            except ValueError as error:
                logging.warning(f"no correlation for {feature} and {metric}: {error}")
                row[metric] = np.nan
        rows.append(row)
    return pd.DataFrame(rows, columns=["feature"] + metrics)


def category_summary(featureTable: pd.DataFrame, performanceTable: pd.DataFrame) -> pd.DataFrame:
    """Per-category count, mean and median of every metric for the categorical features."""
    merged = alignTables(featureTable, performanceTable)
    metrics = [metric for metric in PERFORMANCE_METRICS if metric in merged.columns]
    frames = []
    for feature in CATEGORICAL_COLUMNS:
        if feature not in merged.columns:
            continue
        grouped = merged.groupby(feature, sort=True)[metrics]
        summary = grouped.agg(["mean", "median"])
        summary.columns = [f"{metric}_{statistic}" for metric, statistic in summary.columns]
        summary.insert(0, "count", grouped.size())
        summary = summary.reset_index().rename(columns={feature: "category"})
        summary.insert(0, "feature", feature)
        frames.append(summary)
    return pd.concat(frames, ignore_index=True)


def importance_report(
    featureTable: pd.DataFrame,
    performanceTable: pd.DataFrame,
    config: Optional[ForestConfig] = None,
    n_jobs: int = 1,
) -> pd.DataFrame:
    """Random forest variable importance of the numeric features per metric.

    One forest is fitted per metric on the rows where the metric is
    defined. A metric whose forest has no split gets NaN importances.

    :param featureTable: Feature table of the windows.
    :param performanceTable: Table with window_id and the metric columns.
    :param config: Forest settings.
    :param n_jobs: joblib workers per forest.
    :returns: Table with a leading ``feature`` column and one VIM column per metric.
    """
    merged = alignTables(featureTable, performanceTable)
    metrics = [metric for metric in PERFORMANCE_METRICS if metric in merged.columns]
    features = numericFeatureColumns(featureTable)
    report = pd.DataFrame({"feature": features})
    for metric in metrics:
        rows = merged[features + [metric]].dropna()
        model = fit_forest(rows[features], rows[metric], config, n_jobs=n_jobs)
        try:
            report[metric] = feature_importance(model)
        except ValueError as error:
            logging.warning(f"no importances for {metric}: {error}")
            report[metric] = np.nan
    return report
