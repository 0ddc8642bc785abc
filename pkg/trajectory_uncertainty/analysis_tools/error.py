r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""


class TrajectoryUncertaintyError(Exception):
    """trajectory_uncertainty exception class

    This exception is issued in case of an unspecific error.
    """

    message: str

    def __init__(self, message: str):
        self.message = message
        super().__init__(self.message)
        return


class TrackFormatError(TrajectoryUncertaintyError):
    """Error while reading track, map, signal or checkpoint files.

    Raised for missing columns, non-monotone timestamps, unknown agent types
    and malformed structured files.
    """


class TrainingDivergenceError(TrajectoryUncertaintyError):
    """The training loss or an intermediate value became non-finite."""
