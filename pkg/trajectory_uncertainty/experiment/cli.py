r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import os
import sys
import logging
import argparse
from typing import Optional

from trajectory_uncertainty.analysis_tools.correlation_report import (
    category_summary,
    correlation_report,
    importance_report,
)
from trajectory_uncertainty.analysis_tools.error import TrajectoryUncertaintyError
from trajectory_uncertainty.ensemble.deep_ensemble import predictWindows, predictionTable, train_ensemble
from trajectory_uncertainty.evaluation.retention import retentionAnalysis
from trajectory_uncertainty.experiment.config import WorkbenchConfig, load_config
from trajectory_uncertainty.experiment.cross_dataset import performanceFrame, prepareDataset, run_cross_dataset
from trajectory_uncertainty.experiment.method_comparison import trainDropoutModel
from trajectory_uncertainty.experiment.pipeline import run_pipeline, windowFeatures
from trajectory_uncertainty.experiment.report import (
    PipelineResults,
    RetentionEntry,
    emit_report,
    retentionTables,
    writeManifest,
)
from trajectory_uncertainty.file_export.checkpoint_export import save_ensemble, save_model
from trajectory_uncertainty.file_export.table_export import writeTable
from trajectory_uncertainty.file_export.track_export import write_scene
from trajectory_uncertainty.file_import.checkpoint_import import load_ensemble, load_model
from trajectory_uncertainty.file_import.table_import import readTable
from trajectory_uncertainty.file_import.track_import import load_scene
from trajectory_uncertainty.predictor.training import train
from trajectory_uncertainty.synthgen.scene_generator import generate_dataset_family, generate_scene

LOG_FORMAT = "%(asctime)s.%(msecs)03d %(levelname)s %(module)s - %(funcName)s: %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class UsageError(Exception):
    pass


class WorkbenchArgumentParser(argparse.ArgumentParser):
    """Argument parser that raises instead of exiting, so usage errors map to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _commonArguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON configuration file")
    common.add_argument("--seed", type=int, default=None, help="overrides the seed of the configuration")
    common.add_argument("--out", default="out", help="output directory (default: out)")
    common.add_argument("--serial", action="store_true", help="run every job in the calling process")
    common.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="logging level (default: INFO)",
    )
    return common


def _sceneArgument(parser: argparse.ArgumentParser):
    parser.add_argument("--scene", required=True, help="scene directory with tracks.csv")


def buildParser() -> argparse.ArgumentParser:
    common = _commonArguments()
    parser = WorkbenchArgumentParser(
        prog="trajectory-uncertainty",
        description="Trajectory prediction workbench with epistemic uncertainty.",
        epilog="""
Examples:
    trajectory-uncertainty synth --config demo.json --out data --family
    trajectory-uncertainty train --config demo.json --scene data/base --ensemble 5 --out runs/models
    trajectory-uncertainty eval --config demo.json --scene data/base --models runs/models/ensemble --out runs/eval
    trajectory-uncertainty retention --config demo.json --performance runs/eval/tables/performance.csv --out runs/ret
    trajectory-uncertainty cross --config demo.json --out runs/cross
        """,
        formatter_class=argparse.RawTextHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", metavar="command", required=True)

    synth = subparsers.add_parser("synth", parents=[common], help="generate a synthetic scene or dataset family")
    synth.add_argument("--family", action="store_true", help="generate the dataset family of the configuration")

    features = subparsers.add_parser("features", parents=[common], help="feature table of the windows of a scene")
    _sceneArgument(features)
    features.add_argument("--subset", choices=["train", "test", "all"], default="test")

    trainCommand = subparsers.add_parser("train", parents=[common], help="train a model on the training windows of a scene")
    _sceneArgument(trainCommand)
    trainMode = trainCommand.add_mutually_exclusive_group()
    trainMode.add_argument("--ensemble", type=int, default=None, metavar="K", help="train a deep ensemble of K members")
    trainMode.add_argument("--dropout", action="store_true", help="train the MC-dropout model")

    for name, helpText in [
        ("predict", "predictions with variances of the windows of a scene"),
        ("eval", "per-window ADE, FDE, APE and FPE of the windows of a scene"),
    ]:
        command = subparsers.add_parser(name, parents=[common], help=helpText)
        _sceneArgument(command)
        command.add_argument("--models", required=True, help="ensemble directory or MC-dropout checkpoint")
        command.add_argument("--subset", choices=["train", "test", "all"], default="test")

    retention = subparsers.add_parser("retention", parents=[common], help="retention curves, AUCs and scores")
    retention.add_argument("--performance", required=True, help="performance table written by eval")
    retention.add_argument("--method", default="ensemble", help="method label of the output rows")

    analyze = subparsers.add_parser("analyze", parents=[common], help="correlation and importance analysis")
    analyze.add_argument("--features", required=True, help="feature table written by features")
    analyze.add_argument("--performance", required=True, help="performance table written by eval")

    subparsers.add_parser("cross", parents=[common], help="cross-dataset protocol on the dataset family")
    subparsers.add_parser("report", parents=[common], help="complete workbench run with report")
    return parser


def _loadModels(path: str) -> tuple[list, str]:
    if os.path.isdir(path):
        return load_ensemble(path), "ensemble"
    return [load_model(path)], "mc_dropout"


def _selectWindows(prepared, subset: str):
    if subset == "train":
        return prepared.split.train
    if subset == "test":
        return prepared.split.test
    return prepared.windows


def commandSynth(args, config: WorkbenchConfig) -> list[str]:
    written = []
    if args.family:
        for name, scene in generate_dataset_family(config.generator, config.family, n_jobs=config.getJobs()):
            written += write_scene(scene, os.path.join(args.out, name))
    else:
        written += write_scene(generate_scene(config.generator), os.path.join(args.out, "synthetic"))
    return written


def commandFeatures(args, config: WorkbenchConfig) -> list[str]:
    prepared = prepareDataset("scene", load_scene(args.scene), config)
    frame = windowFeatures(prepared, _selectWindows(prepared, args.subset), config)
    return [writeTable(frame, os.path.join(args.out, "tables", "features.csv"))]


def commandTrain(args, config: WorkbenchConfig) -> list[str]:
    prepared = prepareDataset("scene", load_scene(args.scene), config)
    if args.dropout:
        params = trainDropoutModel(prepared.split.train, config)
        return [save_model(params, os.path.join(args.out, "mc_dropout.ckpt"))]
    if args.ensemble is not None:
        members = train_ensemble(prepared.split.train, config.getTrainingConfig(), args.ensemble, config.getJobs())
        directory = os.path.join(args.out, "ensemble")
        save_ensemble(members, directory)
        return [os.path.join(directory, name) for name in sorted(os.listdir(directory))]
    return [save_model(train(prepared.split.train, config.getTrainingConfig()), os.path.join(args.out, "model.ckpt"))]


def commandPredict(args, config: WorkbenchConfig) -> list[str]:
    prepared = prepareDataset("scene", load_scene(args.scene), config)
    (models, mode) = _loadModels(args.models)
    windows = _selectWindows(prepared, args.subset)
    predictions = predictWindows(
        models, windows, mode=mode, K=config.ensemble.K, seed=config.seed, variance_floor=config.ensemble.variance_floor
    )
    return [writeTable(predictionTable(windows, predictions), os.path.join(args.out, "tables", "predictions.csv"))]


def commandEval(args, config: WorkbenchConfig) -> list[str]:
    prepared = prepareDataset("scene", load_scene(args.scene), config)
    (models, mode) = _loadModels(args.models)
    windows = _selectWindows(prepared, args.subset)
    (frame, predictions) = performanceFrame(models, windows, config, mode=mode)
    return [
        writeTable(frame, os.path.join(args.out, "tables", "performance.csv")),
        writeTable(predictionTable(windows, predictions), os.path.join(args.out, "tables", "predictions.csv")),
    ]


def commandRetention(args, config: WorkbenchConfig) -> list[str]:
    uncertainty = config.evaluation.uncertainty
    error = "ADE" if uncertainty == "APE" else "FDE"
    performance = readTable(args.performance, required=["window_id", error, uncertainty])
    result = retentionAnalysis(performance[error].to_numpy(), performance[uncertainty].to_numpy())
    (curves, aucs, scores) = retentionTables([RetentionEntry(args.method, error, uncertainty, result)])
    tableDir = os.path.join(args.out, "tables")
    return [
        writeTable(curves, os.path.join(tableDir, "retention_curves.csv")),
        writeTable(aucs, os.path.join(tableDir, "retention_aucs.csv")),
        writeTable(scores, os.path.join(tableDir, "retention_scores.csv")),
    ]


def commandAnalyze(args, config: WorkbenchConfig) -> list[str]:
    features = readTable(args.features, required=["window_id"])
    performance = readTable(args.performance, required=["window_id"])
    performance = performance[[c for c in ["window_id", "ADE", "FDE", "APE", "FPE"] if c in performance.columns]]
    tableDir = os.path.join(args.out, "tables")
    return [
        writeTable(correlation_report(features, performance), os.path.join(tableDir, "correlations.csv")),
        writeTable(
            importance_report(features, performance, config.getForestConfig(), config.getJobs()),
            os.path.join(tableDir, "importances.csv"),
        ),
        writeTable(category_summary(features, performance), os.path.join(tableDir, "category_summary.csv")),
    ]


def commandCross(args, config: WorkbenchConfig) -> Optional[list[str]]:
    family = generate_dataset_family(config.generator, config.family, n_jobs=config.getJobs())
    cross = run_cross_dataset(family, config)
    emit_report(PipelineResults(config=config, cross=cross), args.out)
    return None


def commandReport(args, config: WorkbenchConfig) -> Optional[list[str]]:
    run_pipeline(config, args.out)
    return None


COMMANDS = {
    "synth": commandSynth,
    "features": commandFeatures,
    "train": commandTrain,
    "predict": commandPredict,
    "eval": commandEval,
    "retention": commandRetention,
    "analyze": commandAnalyze,
    "cross": commandCross,
    "report": commandReport,
}


def cli(argv: Optional[list[str]] = None) -> int:
    """Run one workbench command.

    Every command reads the configuration given with ``--config``; ``--seed``
    and ``--serial`` override it. The files a command writes are listed in
    ``manifest.json`` of the output directory together with the effective
    configuration.

    :param argv: Arguments without the program name, defaults to ``sys.argv[1:]``.
    :returns: 0 on success, 1 on a usage error, 2 on a runtime error.
    """
    parser = buildParser()
    try:
        args = parser.parse_args(argv)
    except UsageError as error:
        print(str(error), file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT, datefmt=LOG_DATE_FORMAT)
    try:
        config = load_config(args.config).withOverrides(seed=args.seed, serial=args.serial)
        written = COMMANDS[args.command](args, config)
        if written is not None:
            writeManifest(config, args.out, written)
    except (TrajectoryUncertaintyError, ValueError, OSError) as error:
        logging.error(f"{args.command} failed: {getattr(error, 'message', error)}")
        return EXIT_RUNTIME
    return EXIT_OK


def main():
    sys.exit(cli())
