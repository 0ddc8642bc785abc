from trajectory_uncertainty.experiment.config import load_config
from trajectory_uncertainty.experiment.cross_dataset import comprehensive_performance, run_cross_dataset
from trajectory_uncertainty.experiment.pipeline import run_pipeline
from trajectory_uncertainty.plotting.matrix_plot import matrixPlotter
from trajectory_uncertainty.synthgen.scene_generator import generate_dataset_family
import logging
import matplotlib.pyplot as plt

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s.%(msecs)03d %(levelname)s %(module)s - %(funcName)s: %(message)s",
)

config = load_config("demo.json")
family = generate_dataset_family(config.generator, config.family, n_jobs=config.getJobs())

cross = run_cross_dataset(family, config)
print(cross.toFrame())
print(comprehensive_performance(cross))

(fig, (adeAxis, apeAxis)) = plt.subplots(1, 2)
matrixPlotter(adeAxis, cross.matrices["ADE_ensemble"], cross.names, title="ADE")
matrixPlotter(apeAxis, cross.matrices["APE"], cross.names, title="APE", colormap="magma")
fig.set_size_inches(16, 8)
plt.show()

# complete run with all tables, figures and manifest.json
results = run_pipeline(config, "demo_report")
print(results.methods)
