r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import numpy as np

from trajectory_uncertainty.dataset.scene import PredictionWindow
from trajectory_uncertainty.predictor.gru_model import Prediction


def cv_predict(window: PredictionWindow) -> Prediction:
    """Constant-velocity extrapolation.

    The displacement of the last history step is repeated for every future
    step, starting at the last observed position.

    :param window: The window.
    :returns: The prediction with as many points as the window future.
    """
    lastStep = window.history[-1] - window.history[-2]
    steps = np.arange(1, len(window.future_times) + 1)[:, None]
    return Prediction(window.history[-1] + steps * lastStep)
