r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import numpy as np
import pandas as pd
from dataclasses import dataclass

from trajectory_uncertainty.analysis_tools.correlation_report import numericFeatureColumns

#: Current speeds below this value (m/s) count as near zero.
NEAR_ZERO_SPEED = 0.5
SHARE_COLUMNS = ["agent_type", "behavior"]


@dataclass
class DistributionComparison:
    """Feature distributions of several datasets.

    ``summary`` has one row per (dataset, feature) with mean, std and the
    10/50/90 % quantiles. ``shares`` has one row per (dataset, variable,
    category) with the share of windows; the variable ``near_zero_speed``
    holds the share of windows with CV below 0.5 m/s.
    """

    summary: pd.DataFrame
    shares: pd.DataFrame
    tables: dict


def compare_distributions(tables: list[tuple[str, pd.DataFrame]]) -> DistributionComparison:
    """Summary statistics of the feature tables of several datasets.

    :param tables: (dataset name, feature table) pairs.
    :returns: The comparison, datasets in the given order.
    :raises ValueError: For no tables or duplicate names.
    """
    names = [name for name, _ in tables]
    if len(names) == 0:
        raise ValueError("compare_distributions needs at least one table")
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate dataset names in {names}")

    summaryRows = []
    shareRows = []
    for name, table in tables:
        for feature in numericFeatureColumns(table):
            values = table[feature].to_numpy(dtype=float)
            values = values[np.isfinite(values)]
            if len(values) == 0:
                continue
            (q10, q50, q90) = np.quantile(values, [0.1, 0.5, 0.9])
            summaryRows.append(
                {
                    "dataset": name,
                    "feature": feature,
                    "count": len(values),
                    "mean": float(np.mean(values)),
                    "std": float(np.std(values)),
                    "q10": float(q10),
                    "q50": float(q50),
                    "q90": float(q90),
                }
            )

        total = len(table)
        if "CV" in table.columns and total > 0:
            shareRows.append(
                {
                    "dataset": name,
                    "variable": "near_zero_speed",
                    "category": f"CV<{NEAR_ZERO_SPEED:g}",
                    "share": float(np.mean(table["CV"].to_numpy(dtype=float) < NEAR_ZERO_SPEED)),
                }
            )
        for variable in SHARE_COLUMNS:
            if variable not in table.columns or total == 0:
                continue
            counts = table[variable].value_counts(sort=False).sort_index()
            for category, count in counts.items():
                shareRows.append(
                    {"dataset": name, "variable": variable, "category": category, "share": count / total}
                )

    return DistributionComparison(
        summary=pd.DataFrame(
            summaryRows, columns=["dataset", "feature", "count", "mean", "std", "q10", "q50", "q90"]
        ),
        shares=pd.DataFrame(shareRows, columns=["dataset", "variable", "category", "share"]),
        tables=dict(tables),
    )
