from trajectory_uncertainty.dataset.resampling import resample_scene
from trajectory_uncertainty.dataset.splitting import split_dataset
from trajectory_uncertainty.dataset.windows import extract_windows
from trajectory_uncertainty.ensemble.deep_ensemble import mc_dropout_predict, predictWindows, train_ensemble
from trajectory_uncertainty.ensemble.predictive_entropy import ape
from trajectory_uncertainty.evaluation.displacement_error import windowErrors
from trajectory_uncertainty.evaluation.retention import retentionAnalysis
from trajectory_uncertainty.plotting.retention_plot import retentionPlotter, retentionScorePlotter
from trajectory_uncertainty.predictor.training import TrainingConfig, train
from trajectory_uncertainty.synthgen.scene_generator import GeneratorConfig, generate_scene
import matplotlib.pyplot as plt
import numpy as np

scene = resample_scene(generate_scene(GeneratorConfig(seed=1, n_tracks=10)), rate_hz=2.0)
split = split_dataset(extract_windows(scene), test_ratio=0.2, seed=0)
print(f"{len(split.train)} training and {len(split.test)} test windows")

trainingConfig = TrainingConfig(epochs=10, hidden_size=32, seed=0)
members = train_ensemble(split.train, trainingConfig, K=5, n_jobs=5)

predictions = predictWindows(members, split.test)
(ades, fdes) = windowErrors(predictions, split.test)
apes = np.array([ape(prediction) for prediction in predictions])

result = retentionAnalysis(ades, apes)
for mode, auc in result.aucs.items():
    print(f"AUC {mode}: {auc:.4f} m")

dropoutModel = train(split.train, TrainingConfig(epochs=10, hidden_size=32, seed=0, dropout_rate=0.5))
dropoutPrediction = mc_dropout_predict(dropoutModel, split.test[0], K=5, seed=0)
print(f"MC dropout APE of the first test window: {ape(dropoutPrediction):.3f}")

(fig, (curveAxis, scoreAxis)) = plt.subplots(1, 2)
retentionPlotter(curveAxis, list(result.curves.values()), label="ADE")
retentionScorePlotter(scoreAxis, result.curves["uncertainty"].fractions, result.scores, label="ADE/APE")
fig.set_size_inches(18, 8)
plt.show()

fig.savefig("retention.svg")
