r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import numpy as np
import pytest

from conftest import straightWindow
from trajectory_uncertainty.analysis_tools.error import TrainingDivergenceError
from trajectory_uncertainty.ensemble.deep_ensemble import (
    EnsemblePrediction,
    aggregate,
    ensemble_predict,
    mc_dropout_predict,
    predictWindows,
    predictionTable,
    train_ensemble,
)
from trajectory_uncertainty.ensemble.predictive_entropy import ape, fpe
from trajectory_uncertainty.evaluation.displacement_error import ade
from trajectory_uncertainty.file_export.checkpoint_export import save_ensemble
from trajectory_uncertainty.file_import.checkpoint_import import load_ensemble
from trajectory_uncertainty.predictor.gru_model import ModelParams, forward, init_model, zeroModel
from trajectory_uncertainty.predictor.training import TrainingConfig


def constantMember(value: float, hiddenSize: int = 4) -> ModelParams:
    """Model whose prediction ignores its input and is stationary at the last position plus an offset."""
    params = zeroModel(hiddenSize)
    params.tensors["out_b"][:] = value / 5.0
    return params


def varianceOnly(varX, varY) -> EnsemblePrediction:
    varX = np.asarray(varX, dtype=float)
    varY = np.asarray(varY, dtype=float)
    steps = len(varX)
    return EnsemblePrediction(np.zeros((steps, 2)), varX, varY, np.zeros((2, steps, 2)))


@pytest.fixture
def smallWindows():
    return [
        straightWindow(speed=speed, direction=direction, trackId=f"{index:04d}")
        for index, (speed, direction) in enumerate(
            [(2.0, (1, 0)), (3.0, (0, 1)), (4.0, (1, 1)), (1.0, (-1, 0)), (5.0, (1, -1)), (2.5, (0, -1))]
        )
    ]


class TestAggregate:
    def test_two_point_statistics(self):
        members = np.array([np.zeros((6, 2)), np.full((6, 2), 2.0)])
        prediction = aggregate(members)
        np.testing.assert_allclose(prediction.mean, 1.0)
        np.testing.assert_allclose(prediction.var_x, 2.0)
        np.testing.assert_allclose(prediction.var_y, 2.0)

    def test_identical_members_hit_floor(self):
        members = np.array([np.ones((6, 2))] * 3)
        prediction = aggregate(members)
        np.testing.assert_array_equal(prediction.var_x, 1e-6)
        np.testing.assert_array_equal(prediction.var_y, 1e-6)

    def test_single_member(self):
        with pytest.raises(ValueError):
            aggregate(np.zeros((1, 6, 2)))


class TestEnsemblePredict:
    def test_constant_members(self):
        window = straightWindow()
        prediction = ensemble_predict([zeroModel(4), constantMember(2.0)], window)
        last = window.history[-1]
        expectedMean = last + np.arange(1, 7)[:, None] * 1.0
        np.testing.assert_allclose(prediction.mean, expectedMean)
        assert prediction.getNumberOfMembers() == 2

    def test_single_member_rejected(self):
        with pytest.raises(ValueError):
            ensemble_predict([init_model(0, 4)], straightWindow())

    def test_mean_error_below_member_average(self, smallWindows):
        members = [init_model(seed, 8) for seed in range(5)]
        for window in smallWindows:
            prediction = ensemble_predict(members, window)
            memberErrors = [ade(positions, window.future) for positions in prediction.member_predictions]
            assert ade(prediction.mean, window.future) <= np.mean(memberErrors) + 1e-12

    def test_batched_equals_single(self, smallWindows):
        members = [init_model(seed, 8) for seed in range(3)]
        batched = predictWindows(members, smallWindows)
        for window, prediction in zip(smallWindows, batched):
            single = ensemble_predict(members, window)
            np.testing.assert_allclose(prediction.mean, single.mean, rtol=0, atol=1e-12)
            np.testing.assert_allclose(prediction.var_x, single.var_x, rtol=1e-9, atol=1e-15)


class TestMcDropout:
    def test_requires_dropout(self):
        with pytest.raises(ValueError):
            mc_dropout_predict(init_model(0, 8), straightWindow())

    def test_same_seed(self):
        params = init_model(0, 8, dropout_rate=0.5)
        first = mc_dropout_predict(params, straightWindow(), seed=3)
        second = mc_dropout_predict(params, straightWindow(), seed=3)
        np.testing.assert_array_equal(first.member_predictions, second.member_predictions)

    def test_different_seeds(self):
        params = init_model(0, 8, dropout_rate=0.5)
        first = mc_dropout_predict(params, straightWindow(), seed=3)
        second = mc_dropout_predict(params, straightWindow(), seed=30)
        assert not np.array_equal(first.mean, second.mean)

    def test_pass_matches_forward(self):
        params = init_model(0, 8, dropout_rate=0.5)
        window = straightWindow()
        prediction = mc_dropout_predict(params, window, K=4, seed=10)
        for k in range(4):
            single = forward(params, window, dropout_on=True, rng_seed=10 + k)
            np.testing.assert_array_equal(prediction.member_predictions[k], single.positions)

    def test_batched_equals_single(self, smallWindows):
        params = init_model(1, 8, dropout_rate=0.5)
        batched = predictWindows([params], smallWindows, mode="mc_dropout", K=5, seed=4)
        for window, prediction in zip(smallWindows, batched):
            single = mc_dropout_predict(params, window, K=5, seed=4)
            np.testing.assert_allclose(prediction.mean, single.mean, rtol=0, atol=1e-12)

    def test_running_spread_settles(self):
        params = init_model(2, 8, dropout_rate=0.5)
        window = straightWindow()
        small = mc_dropout_predict(params, window, K=5, seed=0)
        large = mc_dropout_predict(params, window, K=50, seed=0)
        runningVariance = [
            np.var(large.member_predictions[:k, -1, 0], ddof=1) for k in range(5, 51)
        ]
        assert np.std(runningVariance[-10:]) < np.std(runningVariance[:10]) + 1e-12
        assert small.var_x.shape == large.var_x.shape


class TestEntropy:
    def test_unit_variance(self):
        assert ape(varianceOnly(np.ones(6), np.ones(6))) == pytest.approx(2.8379, abs=1e-4)

    def test_e_squared_variance(self):
        e2 = np.full(6, np.e**2)
        assert ape(varianceOnly(e2, e2)) == pytest.approx(4.8379, abs=1e-4)

    def test_scaling_adds_log4(self):
        rng = np.random.default_rng(0)
        varX = rng.uniform(0.1, 3.0, 6)
        varY = rng.uniform(0.1, 3.0, 6)
        difference = ape(varianceOnly(4 * varX, 4 * varY)) - ape(varianceOnly(varX, varY))
        assert difference == pytest.approx(np.log(4.0), abs=1e-12)

    def test_fpe_uses_last_step(self):
        e2 = np.e**2
        assert fpe(varianceOnly([5.0, 0.1, 9.0, e2], [1.0, 7.0, 0.3, e2])) == pytest.approx(4.8379, abs=1e-4)
        assert fpe(varianceOnly(np.ones(6), np.ones(6))) == pytest.approx(2.8379, abs=1e-4)

    def test_fpe_equals_ape_for_constant_variances(self):
        prediction = varianceOnly(np.full(6, 0.7), np.full(6, 1.9))
        assert fpe(prediction) == pytest.approx(ape(prediction), abs=1e-12)

    def test_monotone_in_variance(self):
        base = varianceOnly(np.ones(6), np.ones(6))
        for step in range(6):
            varX = np.ones(6)
            varX[step] = 1.5
            assert ape(varianceOnly(varX, np.ones(6))) > ape(base)


class TestTrainEnsemble:
    def test_single_member_rejected(self, smallWindows):
        with pytest.raises(ValueError):
            train_ensemble(smallWindows, TrainingConfig(batch_size=2, epochs=1, hidden_size=4), K=1)

    def test_members_distinct_and_parallel_equal(self, smallWindows):
        config = TrainingConfig(batch_size=2, epochs=2, hidden_size=4, seed=3)
        serial = train_ensemble(smallWindows, config, K=3, n_jobs=1)
        parallel = train_ensemble(smallWindows, config, K=3, n_jobs=2)
        assert len(serial) == 3
        assert serial[0] != serial[1] and serial[1] != serial[2]
        assert serial == parallel

    def test_divergence_names_member(self, smallWindows):
        config = TrainingConfig(batch_size=2, epochs=1, hidden_size=4, learning_rate=1e300)
        with np.errstate(all="ignore"), pytest.raises(TrainingDivergenceError) as info:
            train_ensemble(smallWindows, config, K=2)
        assert "ensemble member 0" in info.value.message


class TestEnsembleFiles:
    def test_directory_round_trip(self, tmp_path):
        members = [init_model(seed, 4) for seed in range(3)]
        save_ensemble(members, str(tmp_path / "ensemble"))
        assert (tmp_path / "ensemble" / "member_00.ckpt").exists()
        assert (tmp_path / "ensemble" / "manifest.json").exists()
        assert load_ensemble(str(tmp_path / "ensemble")) == members

    def test_prediction_table(self, smallWindows):
        members = [init_model(seed, 4) for seed in range(2)]
        predictions = predictWindows(members, smallWindows[:2])
        table = predictionTable(smallWindows[:2], predictions)
        assert list(table.columns) == ["window_id", "step", "mean_x", "mean_y", "var_x", "var_y"]
        assert len(table) == 12
        assert list(table["step"][:6]) == [1, 2, 3, 4, 5, 6]
