r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import io
import os
import json
import numpy as np
from typing import Union

from trajectory_uncertainty.analysis_tools.error import TrackFormatError
from trajectory_uncertainty.file_export.checkpoint_export import (
    CHECKPOINT_MAGIC,
    CHECKPOINT_VERSION,
    ENSEMBLE_MANIFEST,
)
from trajectory_uncertainty.predictor.gru_model import ModelParams, parameterShapes


class CheckpointImport:
    """
    Class to be able to read model checkpoints.

    The file can be passed as a path or as bytes, as returned by
    :meth:`CheckpointExport.getBinaryFileContent`.

    :param file: The path to the checkpoint or the checkpoint content as bytes.
    :raises TrackFormatError: For a malformed checkpoint.
    """

    def __init__(self, file: Union[str, bytes]):
        if isinstance(file, (bytes, bytearray)):
            content = io.BytesIO(bytes(file))
        else:
            with open(file, "rb") as f:
                content = io.BytesIO(f.read())

        if content.readline() != CHECKPOINT_MAGIC:
            raise TrackFormatError("not a model checkpoint")
        try:
            self.header = json.loads(content.readline().decode("ascii"))
        except (UnicodeDecodeError, json.JSONDecodeError) as error:
            raise TrackFormatError(f"malformed checkpoint header: {error}") from error
        if self.header.get("version") != CHECKPOINT_VERSION:
            raise TrackFormatError(f"unsupported checkpoint version {self.header.get('version')}")

        self.tensors = {}
        for entry in self.header["tensors"]:
            shape = tuple(entry["shape"])
            count = int(np.prod(shape))
            data = content.read(8 * count)
            if len(data) != 8 * count:
                raise TrackFormatError(f"checkpoint truncated in tensor {entry['name']}")
            self.tensors[entry["name"]] = np.ndarray(shape, dtype="<f8", buffer=data).astype(np.float64)
        if content.read(1):
            raise TrackFormatError("trailing data after the last tensor")
        return

    def getHiddenSize(self) -> int:
        return int(self.header["hidden_size"])

    def getDropoutRate(self) -> float:
        return float(self.header["dropout_rate"])

    def getModelParams(self) -> ModelParams:
        """
        Get the parameters stored in the checkpoint.

        :returns: The parameters.
        :raises TrackFormatError: If the tensors do not match the model layout.
        """
        expected = parameterShapes(self.getHiddenSize())
        if {name: t.shape for name, t in self.tensors.items()} != expected:
            raise TrackFormatError("checkpoint tensors do not match the model layout")
        ordered = {name: self.tensors[name] for name in expected}
        return ModelParams(
            ordered,
            self.getHiddenSize(),
            self.getDropoutRate(),
            list(self.header.get("loss_history", [])),
        )


def load_model(path: str) -> ModelParams:
    """Read a model checkpoint written by :func:`save_model`.

    :param path: File path of the checkpoint.
    :returns: The parameters.
    :raises TrackFormatError: For a malformed checkpoint.
    """
    return CheckpointImport(path).getModelParams()


def load_ensemble(directory: str) -> list[ModelParams]:
    """Read an ensemble directory written by :func:`save_ensemble`.

    :param directory: The ensemble directory.
    :returns: The members in manifest order.
    :raises TrackFormatError: For a malformed manifest or checkpoint.
    """
    try:
        with open(os.path.join(directory, ENSEMBLE_MANIFEST), "r", encoding="utf-8") as f:
            manifest = json.load(f)
        files = manifest["members"]
    except (json.JSONDecodeError, KeyError, TypeError) as error:
        raise TrackFormatError(f"malformed ensemble manifest in {directory}: {error}") from error
    return [load_model(os.path.join(directory, name)) for name in files]
