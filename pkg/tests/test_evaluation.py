r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import itertools
import numpy as np
import pytest
from scipy.integrate import trapezoid

from trajectory_uncertainty.evaluation.displacement_error import ade, fde
from trajectory_uncertainty.evaluation.retention import (
    RetentionCurve,
    curvesFrame,
    retentionAnalysis,
    retention_auc,
    retention_curve,
    retention_scores,
)


def orderedCurve(errors, order) -> np.ndarray:
    """Retention values for an explicit retention order."""
    errors = np.asarray(errors, dtype=float)
    return np.concatenate([[0.0], np.cumsum(errors[list(order)])]) / len(errors)


class TestDisplacementError:
    def test_identical(self):
        points = np.random.default_rng(0).normal(size=(6, 2))
        assert ade(points, points) == 0.0
        assert fde(points, points) == 0.0

    def test_unit_offset(self):
        truth = np.zeros((6, 2))
        assert ade(truth + [1.0, 0.0], truth) == pytest.approx(1.0)

    def test_hand_example(self):
        assert ade([[3.0, 4.0], [0.0, 0.0]], np.zeros((2, 2))) == pytest.approx(2.5)
        assert fde([[0.0, 0.0], [3.0, 4.0]], np.zeros((2, 2))) == pytest.approx(5.0)

    def test_fde_ignores_earlier_steps(self):
        rng = np.random.default_rng(1)
        truth = rng.normal(size=(6, 2))
        pred = truth + [0.0, 2.0]
        reference = fde(pred, truth)
        pred[:-1] += rng.normal(size=(5, 2))
        assert fde(pred, truth) == reference

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            ade(np.zeros((5, 2)), np.zeros((6, 2)))
        with pytest.raises(ValueError):
            fde(np.zeros((0, 2)), np.zeros((0, 2)))


class TestRetentionCurve:
    def test_co_ordered_uncertainty(self):
        errors = [1.0, 2.0, 3.0, 4.0]
        curve = retention_curve(errors, [0.1, 0.2, 0.3, 0.4])
        optimal = retention_curve(errors, [0.1, 0.2, 0.3, 0.4], mode="optimal")
        np.testing.assert_allclose(curve.fractions, [0.0, 0.25, 0.5, 0.75, 1.0])
        assert curve.values[2] == pytest.approx(0.75)
        np.testing.assert_array_equal(curve.values, optimal.values)

    def test_random_expectation(self):
        curve = retention_curve([1.0, 2.0, 3.0, 4.0], [4, 3, 2, 1], mode="random")
        assert curve.values[2] == pytest.approx(1.25)

    @pytest.mark.parametrize("mode", ["uncertainty", "optimal", "random"])
    def test_boundaries(self, mode):
        rng = np.random.default_rng(2)
        errors = rng.uniform(0.0, 5.0, 37)
        curve = retention_curve(errors, rng.normal(size=37), mode)
        assert curve.values[0] == 0.0
        assert curve.values[-1] == pytest.approx(np.mean(errors), abs=1e-12)

    def test_optimal_is_minimal(self):
        rng = np.random.default_rng(3)
        for size in range(1, 7):
            errors = rng.uniform(0.0, 3.0, size)
            optimal = retention_curve(errors, np.zeros(size), "optimal").values
            for order in itertools.permutations(range(size)):
                assert np.all(optimal <= orderedCurve(errors, order) + 1e-12)

    def test_ties_by_index(self):
        curve = retention_curve([5.0, 1.0, 3.0], [0.0, 0.0, 0.0])
        np.testing.assert_allclose(curve.values, [0.0, 5.0 / 3, 6.0 / 3, 9.0 / 3])

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(4)
        errors = rng.uniform(0.0, 2.0, 50)
        uncertainties = rng.normal(size=50)
        first = retention_curve(errors, uncertainties)
        second = retention_curve(errors, np.exp(3.0 * uncertainties) + 7.0)
        np.testing.assert_array_equal(first.values, second.values)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            retention_curve([1.0, 2.0], [1.0])

    def test_negative_error(self):
        with pytest.raises(ValueError):
            retention_curve([1.0, -2.0], [1.0, 2.0])

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            retention_curve([1.0], [1.0], mode="oracle")


class TestRetentionAuc:
    def test_random_is_half_mean(self):
        errors = np.random.default_rng(5).uniform(0.0, 4.0, 20)
        curve = retention_curve(errors, np.zeros(20), "random")
        assert retention_auc(curve) == pytest.approx(np.mean(errors) / 2.0, abs=1e-12)

    def test_ordering_of_aucs(self):
        errors = [1.0, 2.0, 3.0, 4.0]
        optimal = retention_auc(retention_curve(errors, [0, 0, 0, 0], "optimal"))
        enumerated = min(
            float(trapezoid(orderedCurve(errors, order), np.linspace(0, 1, 5)))
            for order in itertools.permutations(range(4))
        )
        assert optimal == pytest.approx(enumerated)
        for uncertainties in itertools.permutations([1, 2, 3, 4]):
            assert retention_auc(retention_curve(errors, uncertainties)) >= optimal - 1e-12

    def test_zero_errors(self):
        assert retention_auc(retention_curve(np.zeros(8), np.arange(8))) == 0.0


class TestRetentionScores:
    def test_perfect_ordering(self):
        errors = [1.0, 2.0, 3.0, 4.0, 7.0]
        result = retentionAnalysis(errors, errors)
        np.testing.assert_allclose(result.scores[1:-1], 1.0)
        assert result.scores[0] == 0.0

    def test_independent_uncertainty_near_zero(self):
        rng = np.random.default_rng(6)
        errors = rng.exponential(1.0, 200)
        means = []
        for _ in range(100):
            result = retentionAnalysis(errors, rng.permutation(200))
            means.append(np.mean(result.scores))
        assert abs(np.mean(means)) < 0.2

    def test_grid_mismatch(self):
        small = retention_curve([1.0, 2.0], [1.0, 2.0])
        large = retention_curve([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            retention_scores(small, large, large)

    def test_curves_frame(self):
        result = retentionAnalysis([1.0, 2.0], [2.0, 1.0])
        frame = curvesFrame(list(result.curves.values()), method="ensemble", metric="ADE")
        assert list(frame.columns) == ["method", "metric", "mode", "fraction", "value"]
        assert len(frame) == 9
        assert isinstance(result.curves["random"], RetentionCurve)
