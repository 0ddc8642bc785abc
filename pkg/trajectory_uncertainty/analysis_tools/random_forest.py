r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import math
import numpy as np
from dataclasses import dataclass
from typing import Optional
from sklearn.ensemble import RandomForestRegressor


@dataclass(frozen=True)
class ForestConfig:
    """Random forest settings.

    ``m_try`` None selects ceil(J / 3) features per split.
    """

    n_trees: int = 100
    max_depth: int = 12
    min_leaf: int = 5
    m_try: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1 or self.max_depth < 1 or self.min_leaf < 1:
            raise ValueError("n_trees, max_depth and min_leaf must be at least 1")
        if self.m_try is not None and self.m_try < 1:
            raise ValueError(f"m_try must be at least 1, got {self.m_try}")
        return

    def getMTry(self, numberOfFeatures: int) -> int:
        if self.m_try is not None:
            return min(self.m_try, numberOfFeatures)
        return max(1, math.ceil(numberOfFeatures / 3))


class ForestModel:
    """
    Fitted random forest of variance-impurity regression trees.

    Each tree is grown on a bootstrap sample of the rows, every split
    considers ``m_try`` features drawn without replacement.

    Split ties are broken by scikit-learn: features are visited in a
    random permutation per node and the first best split found wins. Equal
    gains are therefore not resolved towards the lowest feature index or
    threshold. Fixed ``seed`` keeps the choice reproducible.

    :param estimator: The fitted scikit-learn forest.
    :param config: The configuration it was fitted with.
    """

    def __init__(self, estimator: RandomForestRegressor, config: ForestConfig):
        self.estimator = estimator
        self.config = config
        self.n_features = int(estimator.n_features_in_)
        self.n_trees = len(estimator.estimators_)
        return

    def getTrees(self) -> list:
        """Low-level tree structures with children, features, thresholds and impurities."""
        return [tree.tree_ for tree in self.estimator.estimators_]

    def getNumberOfSplits(self) -> int:
        return int(sum(np.sum(tree.children_left >= 0) for tree in self.getTrees()))

    def getOutOfBagR2(self) -> float:
        """Out-of-bag coefficient of determination; needs ``oob=True`` at fit time."""
        return float(self.estimator.oob_score_)


def fit_forest(
    features,
    targets,
    config: Optional[ForestConfig] = None,
    n_jobs: int = 1,
    oob: bool = False,
) -> ForestModel:
    """Fit a random forest regression.

    Trees stop growing at ``max_depth``, when a child would hold fewer than
    ``min_leaf`` rows, or at zero impurity. With fewer than ``2 * min_leaf``
    rows every tree is a single leaf predicting its bootstrap mean.

    .. code-block:: python

        model = fit_forest(table[numericColumns()], table["ADE"], ForestConfig(seed=1))
        importances = feature_importance(model)

    :param features: N x J table or array.
    :param targets: N target values.
    :param config: Forest settings.
    :param n_jobs: joblib workers for tree fitting; the forest does not depend on it.
    :param oob: Compute the out-of-bag score.
    :returns: The fitted forest.
    :raises ValueError: For non-finite cells or a row count mismatch.
    """
    if config is None:
        config = ForestConfig()
    features = np.asarray(features, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if features.ndim != 2 or len(features) != len(targets):
        raise ValueError("features must be an N x J table matching the N targets")
    if not (np.all(np.isfinite(features)) and np.all(np.isfinite(targets))):
        raise ValueError("forest inputs must be finite")

    estimator = RandomForestRegressor(
        n_estimators=config.n_trees,
        criterion="squared_error",
        max_depth=config.max_depth,
        min_samples_leaf=config.min_leaf,
        max_features=config.getMTry(features.shape[1]),
        bootstrap=True,
        oob_score=oob,
        random_state=config.seed,
        n_jobs=n_jobs,
    )
    estimator.fit(features, targets)
    return ForestModel(estimator, config)


def forest_predict(model: ForestModel, row) -> float:
    """Mean of the leaf predictions of all trees for one feature row.

    :raises ValueError: If the row length differs from the number of features.
    """
    row = np.asarray(row, dtype=float)
    if row.shape != (model.n_features,):
        raise ValueError(f"expected {model.n_features} features, got shape {row.shape}")
    return float(model.estimator.predict(row.reshape(1, -1))[0])


def _nodeImpurityDecrease(tree) -> np.ndarray:
    """Weighted impurity decrease of every internal node, 0 for leaves."""
    internal = tree.children_left >= 0
    left = np.where(internal, tree.children_left, 0)
    right = np.where(internal, tree.children_right, 0)
    weights = tree.weighted_n_node_samples
    decrease = (
        weights * tree.impurity - weights[left] * tree.impurity[left] - weights[right] * tree.impurity[right]
    )
    return np.where(internal, decrease, 0.0) / weights[0]


def treeImportances(model: ForestModel) -> np.ndarray:
    """Unnormalized importance (I, J): sample fraction times impurity decrease summed per feature."""
    importances = np.zeros((model.n_trees, model.n_features))
    for index, tree in enumerate(model.getTrees()):
        decrease = _nodeImpurityDecrease(tree)
        internal = tree.children_left >= 0
        np.add.at(importances[index], tree.feature[internal], decrease[internal])
    return importances


def feature_importance(model: ForestModel) -> np.ndarray:
    """Variable importance measure of every feature.

    The impurity decreases of every tree are summed per feature and the
    totals over all trees are normalized to sum to 1. A feature that is
    never split on gets 0.

    :param model: A fitted forest.
    :returns: Array of length J.
    :raises ValueError: If no tree has a split.
    """
    totals = treeImportances(model).sum(axis=0)
    if model.getNumberOfSplits() == 0 or totals.sum() <= 0:
        raise ValueError("feature importance is undefined for a forest without splits")
    return totals / totals.sum()
