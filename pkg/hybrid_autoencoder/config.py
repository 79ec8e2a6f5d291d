import math
import os
from dataclasses import dataclass, field, fields, asdict
from pathlib import Path
from typing import Any, Dict, List, Optional, Union, get_args, get_origin

import dotenv

from .exceptions import InvalidInputError
from .quantum.ansatz import AnsatzVariant
from .quantum.gradients import ANALYTIC, EvalMode
from .utils.helpers import config_hash, read_json, write_json

OUTPUT_ROOT_ENV = "HYBRID_AE_OUTPUT_ROOT"
DEVICE_FILE_ENV = "HYBRID_AE_DEVICE_FILE"
DEFAULT_OUTPUT_ROOT = "./runs"
DEFAULT_DEVICES = ["t_shaped", "linear"]


@dataclass
class TrainConfig:
    """Settings of one training run (quantum or classical decoder)"""
    variant: AnsatzVariant = AnsatzVariant.WEIGHTED_DOUBLE_DR
    layers: int = 8
    steps: int = 1000
    batch_size: int = 64
    learning_rate: float = 0.1
    snr_db: float = 15.0
    eval_mode: EvalMode = ANALYTIC
    seeds: List[int] = field(default_factory=lambda: [0])
    ser_every: int = 25
    eval_symbols: int = 2000
    record_wall_time: bool = False
    progress: bool = True

    def __post_init__(self):
        self.variant = AnsatzVariant.parse(self.variant)

    def validation_errors(self) -> List[str]:
        errors = []
        if self.layers < 1:
            errors.append(f"layers must be >= 1, got {self.layers}")
        if self.steps < 1:
            errors.append(f"steps must be >= 1, got {self.steps}")
        if self.batch_size < 1:
            errors.append(f"batch_size must be >= 1, got {self.batch_size}")
        if not self.learning_rate > 0:
            errors.append(f"learning_rate must be positive, got {self.learning_rate}")
        if self.ser_every < 1:
            errors.append(f"ser_every must be >= 1, got {self.ser_every}")
        if self.eval_symbols < 1:
            errors.append(f"eval_symbols must be >= 1, got {self.eval_symbols}")
        if not self.seeds:
            errors.append("at least one seed is required")
        if not math.isfinite(float(self.snr_db)):
            errors.append(f"snr_db must be finite, got {self.snr_db}")
        return errors

    def validate(self) -> None:
        errors = self.validation_errors()
        if errors:
            raise InvalidInputError("Invalid training configuration: " + "; ".join(errors))


@dataclass
class SweepConfig:
    """SNR sweep of a trained model"""
    snr_grid: List[float] = field(default_factory=lambda: [0.0, 2.5, 5.0, 7.5, 10.0, 12.5, 15.0, 17.5, 20.0])
    n_symbols: int = 10000
    seed: int = 0
    reference_qam: bool = False


@dataclass
class TranspileConfig:
    """Depth / per-shot time report over layer counts and devices"""
    variant: AnsatzVariant = AnsatzVariant.WEIGHTED_DOUBLE_DR
    layer_set: List[int] = field(default_factory=lambda: [8, 12, 16, 20, 24])
    devices: List[str] = field(default_factory=lambda: list(DEFAULT_DEVICES))
    shots: int = 1000
    include_measure: bool = True
    include_reset: bool = True


def _coerce(name: str, kind: Any, value: Any) -> Any:
    """Convert a file or flag value to the declared field type"""
    origin = get_origin(kind)
    if origin is Union:
        if value is None:
            return None
        inner = next(arg for arg in get_args(kind) if arg is not type(None))
        return _coerce(name, inner, value)
    if origin is list:
        if not isinstance(value, (list, tuple)):
            raise InvalidInputError(f"{name} must be a list, got {value!r}")
        (item,) = get_args(kind)
        return [_coerce(name, item, v) for v in value]
    if kind is bool:
        if not isinstance(value, bool):
            raise InvalidInputError(f"{name} must be true or false, got {value!r}")
        return value
    try:
        if isinstance(value, bool) or value is None:
            raise ValueError
        if kind is int:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            return int(value)
        if kind is float:
            return float(value)
        if kind is str:
            if not isinstance(value, str):
                raise ValueError
            return value
    except (TypeError, ValueError):
        raise InvalidInputError(f"{name} must be of type {kind.__name__}, got {value!r}")
    return value


@dataclass
class RunConfig:
    """
    Flat key/value configuration shared by every subcommand

    Values come from defaults, then the environment (output root and device
    file only), then a JSON config file, then command-line overrides.
    """
    variant: str = AnsatzVariant.WEIGHTED_DOUBLE_DR.value
    layers: int = 8
    steps: int = 1000
    batch_size: int = 64
    learning_rate: float = 0.1
    snr_db: float = 15.0
    shots: Optional[int] = None
    seeds: List[int] = field(default_factory=lambda: [0])
    ser_every: int = 25
    eval_symbols: int = 2000
    record_timing: bool = False

    snr_grid: List[float] = field(default_factory=lambda: [0.0, 2.5, 5.0, 7.5, 10.0, 12.5, 15.0, 17.5, 20.0])
    n_symbols: int = 10000
    reference_qam: bool = False

    layer_set: List[int] = field(default_factory=lambda: [8, 12, 16, 20, 24])
    devices: List[str] = field(default_factory=lambda: list(DEFAULT_DEVICES))
    inference_shots: int = 1000
    include_measure: bool = True
    include_reset: bool = True

    variants: List[str] = field(default_factory=lambda: [v.value for v in AnsatzVariant])
    learning_rates: List[float] = field(default_factory=lambda: [0.1, 0.01, 0.001])
    epsilon: float = 1e-6

    checkpoint: Optional[str] = None
    baseline_checkpoint: Optional[str] = None
    resume: Optional[str] = None

    # Execution settings; they do not change results and are left out of provenance
    output_root: str = DEFAULT_OUTPUT_ROOT
    output_dir: Optional[str] = None
    jobs: int = 1
    progress: bool = True

    RUNTIME_KEYS = ("output_root", "output_dir", "jobs", "progress")

    @classmethod
    def load(cls, config_path: Optional[str] = None,
             overrides: Optional[Dict[str, Any]] = None) -> "RunConfig":
        """
        Resolve a configuration

        Args:
            config_path: Optional JSON file of flat key/value pairs
            overrides: Values given on the command line; ``None`` entries are ignored

        Returns:
            Validated RunConfig
        """
        # Load environment variables
        dotenv.load_dotenv()

        values: Dict[str, Any] = {}
        if os.getenv(OUTPUT_ROOT_ENV):
            values["output_root"] = os.getenv(OUTPUT_ROOT_ENV)
        if os.getenv(DEVICE_FILE_ENV):
            values["devices"] = [os.getenv(DEVICE_FILE_ENV)]

        if config_path is not None:
            values.update(cls._load_from_file(config_path))
        if overrides:
            values.update({k: v for k, v in overrides.items() if v is not None})

        kinds = {f.name: f.type for f in fields(cls)}
        unknown = sorted(set(values) - set(kinds))
        if unknown:
            raise InvalidInputError(f"Unknown configuration keys: {', '.join(unknown)}")

        errors = []
        for key, value in values.items():
            try:
                values[key] = _coerce(key, kinds[key], value)
            except InvalidInputError as e:
                errors.append(str(e))
        if errors:
            raise InvalidInputError("Invalid configuration: " + "; ".join(errors))

        config = cls(**values)
        config.validate()
        return config

    @staticmethod
    def _load_from_file(config_path: str) -> Dict[str, Any]:
        """Load configuration from file"""
        if not os.path.exists(config_path):
            raise InvalidInputError(f"Config file not found: {config_path}")
        try:
            data = read_json(config_path)
        except ValueError as e:
            raise InvalidInputError(f"Config file {config_path} is not valid JSON: {e}")
        if not isinstance(data, dict):
            raise InvalidInputError(f"Config file {config_path} must hold a JSON object")
        return data

    def validation_errors(self) -> List[str]:
        """Every violated constraint, empty when the configuration is usable"""
        errors = []
        try:
            AnsatzVariant.parse(self.variant)
        except InvalidInputError as e:
            errors.append(str(e))
        for name in self.variants:
            try:
                AnsatzVariant.parse(name)
            except InvalidInputError as e:
                errors.append(str(e))
        if self.shots is not None and self.shots < 1:
            errors.append(f"shots must be >= 1, got {self.shots}")
        if any(int(s) != s or s < 0 for s in self.seeds):
            errors.append(f"seeds must be non-negative integers, got {self.seeds}")
        if self.n_symbols < 1:
            errors.append(f"n_symbols must be >= 1, got {self.n_symbols}")
        if not self.snr_grid:
            errors.append("snr_grid must not be empty")
        if not self.layer_set or any(l < 1 for l in self.layer_set):
            errors.append(f"layer_set must hold positive integers, got {self.layer_set}")
        if not self.devices:
            errors.append("at least one device is required")
        if self.inference_shots < 1:
            errors.append(f"inference_shots must be >= 1, got {self.inference_shots}")
        if not self.learning_rates or any(not lr > 0 for lr in self.learning_rates):
            errors.append(f"learning_rates must be positive, got {self.learning_rates}")
        if not self.epsilon > 0:
            errors.append(f"epsilon must be positive, got {self.epsilon}")
        if self.jobs < 1:
            errors.append(f"jobs must be >= 1, got {self.jobs}")
        if not errors:
            errors.extend(self.train_config().validation_errors())
        return errors

    def validate(self) -> None:
        errors = self.validation_errors()
        if errors:
            raise InvalidInputError("Invalid configuration: " + "; ".join(errors))

    def eval_mode(self, seed: int = 0) -> EvalMode:
        return ANALYTIC if self.shots is None else EvalMode.with_shots(self.shots, seed)

    def train_config(self, **changes) -> TrainConfig:
        """TrainConfig view; keyword arguments replace individual fields"""
        values = dict(
            variant=AnsatzVariant.parse(self.variant),
            layers=self.layers,
            steps=self.steps,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
            snr_db=self.snr_db,
            eval_mode=self.eval_mode(),
            seeds=list(self.seeds),
            ser_every=self.ser_every,
            eval_symbols=self.eval_symbols,
            record_wall_time=self.record_timing,
            progress=self.progress,
        )
        values.update(changes)
        return TrainConfig(**values)

    def sweep_config(self) -> SweepConfig:
        return SweepConfig(
            snr_grid=[float(s) for s in self.snr_grid],
            n_symbols=self.n_symbols,
            seed=int(self.seeds[0]),
            reference_qam=self.reference_qam,
        )

    def transpile_config(self) -> TranspileConfig:
        return TranspileConfig(
            variant=AnsatzVariant.parse(self.variant),
            layer_set=[int(l) for l in self.layer_set],
            devices=list(self.devices),
            shots=self.inference_shots,
            include_measure=self.include_measure,
            include_reset=self.include_reset,
        )

    def to_dict(self, include_runtime: bool = False) -> Dict[str, Any]:
        """Canonical dictionary used for provenance headers and hashing"""
        data = asdict(self)
        if not include_runtime:
            for key in self.RUNTIME_KEYS:
                data.pop(key, None)
        return data

    def config_hash(self) -> str:
        return config_hash(self.to_dict())

    def save(self, path) -> Path:
        """Save the resolved configuration (runtime settings included) to file"""
        return write_json(self.to_dict(include_runtime=True), path)
