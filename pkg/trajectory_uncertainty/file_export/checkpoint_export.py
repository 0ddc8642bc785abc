r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import os
import json
import logging
import numpy as np

from trajectory_uncertainty.predictor.gru_model import (
    CONTEXT_SIZE,
    INPUT_SIZE,
    OUTPUT_SIZE,
    ModelParams,
)

CHECKPOINT_MAGIC = b"TRAJUQ-CHECKPOINT 1\n"
CHECKPOINT_VERSION = 1
ENSEMBLE_MANIFEST = "manifest.json"


class CheckpointExport:
    """
    Class for saving model parameters.

    The container starts with the ASCII line ``TRAJUQ-CHECKPOINT 1``,
    followed by one line of JSON with the dimensions, the dropout rate, the
    loss history and the ordered tensor names and shapes. The tensors follow
    as little-endian float64 in header order.

    :param params: The parameters to save.
    """

    def __init__(self, params: ModelParams):
        header = {
            "version": CHECKPOINT_VERSION,
            "input_size": INPUT_SIZE,
            "hidden_size": params.hidden_size,
            "output_size": OUTPUT_SIZE,
            "context_size": CONTEXT_SIZE,
            "dropout_rate": params.dropout_rate,
            "loss_history": [float(loss) for loss in params.lossHistory],
            "tensors": [
                {"name": name, "shape": list(tensor.shape)} for name, tensor in params.tensors.items()
            ],
        }

        self._binaryFileContent = bytearray(CHECKPOINT_MAGIC)
        self._binaryFileContent += json.dumps(header, sort_keys=True).encode("ascii") + b"\n"
        for tensor in params.tensors.values():
            self._binaryFileContent += np.asarray(tensor, dtype="<f8").tobytes()
        return

    def getBinaryFileContent(self) -> bytearray:
        """
        Get the content of the file as binary.

        :returns: Bytearray with the file content.
        """
        return self._binaryFileContent

    def writeToFile(self, file: str):
        """
        Writing the file to the hard disk.

        :param file: Path to the file to be written.
        """
        directory = os.path.dirname(file)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(file, "wb") as f:
            f.write(self._binaryFileContent)
        return


def save_model(params: ModelParams, path: str) -> str:
    """Write a model checkpoint.

    :param params: The parameters.
    :param path: File path of the checkpoint.
    :returns: The path.
    """
    CheckpointExport(params).writeToFile(path)
    logging.debug(f"checkpoint written to {path}")
    return path


def memberFilename(member: int) -> str:
    return f"member_{member:02d}.ckpt"


def save_ensemble(members: list[ModelParams], directory: str) -> str:
    """Write an ensemble directory with one checkpoint per member and a manifest.

    :param members: The member parameters in member order.
    :param directory: Target directory, created when missing.
    :returns: Path of the manifest.
    """
    os.makedirs(directory, exist_ok=True)
    files = []
    for member, params in enumerate(members):
        save_model(params, os.path.join(directory, memberFilename(member)))
        files.append(memberFilename(member))
    manifest = {
        "members": files,
        "hidden_size": members[0].hidden_size if members else None,
        "dropout_rate": members[0].dropout_rate if members else None,
    }
    path = os.path.join(directory, ENSEMBLE_MANIFEST)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    logging.info(f"ensemble of {len(members)} members written to {directory}")
    return path
