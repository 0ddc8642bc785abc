r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import json
import hashlib
import dataclasses
from dataclasses import dataclass, field
from typing import Optional

from trajectory_uncertainty.analysis_tools.random_forest import ForestConfig
from trajectory_uncertainty.features.interaction import FeatureParams
from trajectory_uncertainty.predictor.training import TrainingConfig
from trajectory_uncertainty.synthgen.scene_generator import GeneratorConfig

UNCERTAINTY_METRICS = ["APE", "FPE"]


@dataclass(frozen=True)
class DatasetConfig:
    rate_hz: float = 2.0
    t_h_steps: int = 6
    t_f_steps: int = 6
    stride_steps: int = 1
    neighbor_radius_m: float = 30.0
    max_neighbors: int = 8
    test_ratio: float = 0.2

    def __post_init__(self):
        if not self.rate_hz > 0:
            raise ValueError(f"rate_hz must be positive, got {self.rate_hz}")
        if self.t_h_steps < 1 or self.t_f_steps < 1 or self.stride_steps < 1:
            raise ValueError("t_h_steps, t_f_steps and stride_steps must be at least 1")
        if not 0.0 < self.test_ratio < 1.0:
            raise ValueError(f"test_ratio must be in (0, 1), got {self.test_ratio}")
        return


@dataclass(frozen=True)
class ModelConfig:
    """Network size and the dropout rate of the MC-dropout model."""

    hidden_size: int = 64
    dropout_rate: float = 0.5

    def __post_init__(self):
        if self.hidden_size < 1:
            raise ValueError(f"hidden_size must be at least 1, got {self.hidden_size}")
        if not 0.0 < self.dropout_rate < 1.0:
            raise ValueError(f"dropout_rate must be in (0, 1), got {self.dropout_rate}")
        return


@dataclass(frozen=True)
class EnsembleConfig:
    K: int = 5
    variance_floor: float = 1e-6

    def __post_init__(self):
        if self.K < 2:
            raise ValueError(f"an ensemble needs K >= 2, got {self.K}")
        if not self.variance_floor > 0:
            raise ValueError("variance_floor must be positive")
        return


@dataclass(frozen=True)
class EvaluationConfig:
    uncertainty: str = "APE"

    def __post_init__(self):
        if self.uncertainty not in UNCERTAINTY_METRICS:
            raise ValueError(f"uncertainty must be one of {UNCERTAINTY_METRICS}, got {self.uncertainty!r}")
        return


#: Keys of the training section; seed and model size come from elsewhere.
TRAINING_KEYS = ["learning_rate", "beta1", "beta2", "epsilon", "batch_size", "epochs", "l2_coefficient"]
FOREST_KEYS = ["n_trees", "max_depth", "min_leaf", "m_try"]
SECTIONS = ["generator", "family", "dataset", "features", "model", "training", "ensemble", "evaluation", "forest"]


def _sectionFields(cls, allowed: Optional[list[str]] = None) -> list[str]:
    names = [f.name for f in dataclasses.fields(cls)]
    return names if allowed is None else [name for name in names if name in allowed]


def _buildSection(cls, name: str, content: dict, allowed: Optional[list[str]] = None, **fixed):
    if not isinstance(content, dict):
        raise ValueError(f"config section {name!r} must be an object")
    known = _sectionFields(cls, allowed)
    unknown = sorted(set(content) - set(known))
    if unknown:
        raise ValueError(f"unknown key(s) {unknown} in config section {name!r}")
    return cls(**content, **fixed)


@dataclass
class WorkbenchConfig:
    """All settings of a workbench run.

    Built from a JSON object whose sections are merged over the defaults:

    .. code-block:: json

        {
            "seed": 3,
            "generator": {"n_tracks": 10},
            "family": [{"name": "base"}, {"name": "fast", "speed_scale": 2.0}],
            "training": {"epochs": 5},
            "ensemble": {"K": 3}
        }

    Unknown sections and keys raise ``ValueError``.
    """

    seed: int = 0
    n_jobs: int = 1
    serial: bool = False
    generator: GeneratorConfig = field(default_factory=GeneratorConfig)
    family: list = field(default_factory=lambda: [{"name": "base"}, {"name": "fast", "speed_scale": 2.0}])
    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    features: FeatureParams = field(default_factory=FeatureParams)
    model: ModelConfig = field(default_factory=ModelConfig)
    training: dict = field(default_factory=dict)
    ensemble: EnsembleConfig = field(default_factory=EnsembleConfig)
    evaluation: EvaluationConfig = field(default_factory=EvaluationConfig)
    forest: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_jobs == 0:
            raise ValueError("n_jobs must not be 0")
        self.getTrainingConfig()
        self.getForestConfig()
        return

    @classmethod
    def fromDict(cls, content: dict) -> "WorkbenchConfig":
        """Merge a configuration object over the defaults."""
        if not isinstance(content, dict):
            raise ValueError("the configuration must be a JSON object")
        unknown = sorted(set(content) - set(SECTIONS) - {"seed", "n_jobs", "serial"})
        if unknown:
            raise ValueError(f"unknown configuration key(s) {unknown}")

        family = content.get("family", cls().family)
        if not isinstance(family, list) or not all(isinstance(member, dict) for member in family):
            raise ValueError("config section 'family' must be a list of objects")
        features = dict(content.get("features", {}))
        if "x_set" in features:
            features["x_set"] = tuple(float(x) for x in features["x_set"])

        training = content.get("training", {})
        _buildSection(TrainingConfig, "training", training, TRAINING_KEYS)
        forest = content.get("forest", {})
        _buildSection(ForestConfig, "forest", forest, FOREST_KEYS)

        return cls(
            seed=int(content.get("seed", 0)),
            n_jobs=int(content.get("n_jobs", 1)),
            serial=bool(content.get("serial", False)),
            generator=_buildSection(GeneratorConfig, "generator", content.get("generator", {})),
            family=[dict(member) for member in family],
            dataset=_buildSection(DatasetConfig, "dataset", content.get("dataset", {})),
            features=_buildSection(FeatureParams, "features", features),
            model=_buildSection(ModelConfig, "model", content.get("model", {})),
            training=dict(training),
            ensemble=_buildSection(EnsembleConfig, "ensemble", content.get("ensemble", {})),
            evaluation=_buildSection(EvaluationConfig, "evaluation", content.get("evaluation", {})),
            forest=dict(forest),
        )

    def withOverrides(self, seed: Optional[int] = None, serial: Optional[bool] = None) -> "WorkbenchConfig":
        changes = {}
        if seed is not None:
            changes["seed"] = seed
        if serial is not None and serial:
            changes["serial"] = True
        return dataclasses.replace(self, **changes)

    def getJobs(self) -> int:
        return 1 if self.serial else self.n_jobs

    def getTrainingConfig(self, dropout_rate: float = 0.0, seed: Optional[int] = None) -> TrainingConfig:
        """Training settings of the point-estimate models, or of the dropout model."""
        return TrainingConfig(
            **self.training,
            seed=self.seed if seed is None else seed,
            hidden_size=self.model.hidden_size,
            dropout_rate=dropout_rate,
        )

    def getForestConfig(self) -> ForestConfig:
        return ForestConfig(**self.forest, seed=self.seed)

    def toDict(self) -> dict:
        """The effective configuration with every default filled in."""
        features = dataclasses.asdict(self.features)
        features["x_set"] = [float(x) for x in self.features.x_set]
        training = dataclasses.asdict(self.getTrainingConfig())
        forest = dataclasses.asdict(self.getForestConfig())
        return {
            "seed": self.seed,
            "n_jobs": self.n_jobs,
            "serial": self.serial,
            "generator": dataclasses.asdict(self.generator),
            "family": [dict(member) for member in self.family],
            "dataset": dataclasses.asdict(self.dataset),
            "features": features,
            "model": dataclasses.asdict(self.model),
            "training": {key: training[key] for key in TRAINING_KEYS},
            "ensemble": dataclasses.asdict(self.ensemble),
            "evaluation": dataclasses.asdict(self.evaluation),
            "forest": {key: forest[key] for key in FOREST_KEYS},
        }

    def canonicalJson(self) -> str:
        return json.dumps(self.toDict(), sort_keys=True, separators=(",", ":"))

    def configHash(self) -> str:
        """SHA-256 of the canonical JSON of the effective configuration."""
        return hashlib.sha256(self.canonicalJson().encode("utf-8")).hexdigest()


def load_config(path: str) -> WorkbenchConfig:
    """Read a JSON configuration file.

    :param path: Path to the file.
    :returns: The configuration.
    :raises ValueError: For malformed JSON or unknown keys.
    """
    with open(path, "r", encoding="utf-8") as f:
        try:
            content = json.load(f)
        except json.JSONDecodeError as error:
            raise ValueError(f"malformed configuration {path}: {error}") from error
    return WorkbenchConfig.fromDict(content)
