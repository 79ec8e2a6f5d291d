"""
End-to-end training of the autoencoder: encoder -> AWGN -> decoder.

Both decoders (quantum circuit and classical dense network) share one loop.
Step ``t`` draws its messages from substream (BATCH, t), its noise from
(NOISE, t) and, in SHOTS mode, its measurement samples from (SHOTS, t), so a
run resumed from a checkpoint at step ``t`` continues bitwise identically.
"""

import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..config import TrainConfig
from ..exceptions import InvalidInputError, TrainingAbortedError
from ..quantum.ansatz import AnsatzVariant, ParamSet, init_params
from ..quantum.gradients import ANALYTIC, EvalMode, evaluate_probabilities, loss_gradient
from ..quantum.simulator import make_rng
from ..utils.logger import get_logger
from .baseline import ClassicalDecoder
from .channel import AWGNChannel, Stream
from .encoder import DEGENERATE_NORM, N_MESSAGES, ConstellationTable, random_table
from .evaluation import model_ser
from .optimizer import AdamState, adam_step

logger = get_logger("trainer")

EMBEDDING = "embedding"


class QuantumModel:
    """Trainable encoder table plus a variational circuit decoder"""
    kind = "quantum"

    def __init__(self, table: ConstellationTable, variant: AnsatzVariant, params: ParamSet,
                 mode: EvalMode = ANALYTIC):
        self.table = table
        self.variant = AnsatzVariant.parse(variant)
        self.params = params
        self.mode = mode
        params.check_variant(self.variant)

    @classmethod
    def initialize(cls, variant: AnsatzVariant, layers: int, rng: np.random.Generator,
                   mode: EvalMode = ANALYTIC) -> "QuantumModel":
        table = random_table(rng)
        return cls(table, variant, init_params(variant, layers, rng), mode)

    @property
    def layers(self) -> int:
        return self.params.layers

    def parameters(self) -> Dict[str, np.ndarray]:
        values = {EMBEDDING: self.table.raw, "rotations": self.params.rotations}
        if self.params.encoding_weights is not None:
            values["encoding_weights"] = self.params.encoding_weights
        return values

    def with_parameters(self, values: Dict[str, np.ndarray]) -> "QuantumModel":
        params = ParamSet(values["rotations"], values.get("encoding_weights"))
        return QuantumModel(ConstellationTable(values[EMBEDDING]), self.variant, params, self.mode)

    def decode_batch(self, ys: np.ndarray, stream: Tuple[int, ...] = ()) -> np.ndarray:
        return evaluate_probabilities(self.variant, self.params, ys, self.mode, stream)

    def batch_loss(self, messages, ys, stream: Tuple[int, ...] = ()):
        """(loss, decoder gradients, per-sample gradients with respect to received signals)"""
        result = loss_gradient(messages, ys, self.variant, self.params, self.mode, stream)
        grads = {"rotations": result.gradients.d_rotations}
        if result.gradients.d_weights is not None:
            grads["encoding_weights"] = result.gradients.d_weights
        return result.loss, grads, result.sample_feature_grads

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "variant": self.variant.value,
            "layers": self.layers,
            "eval_shots": self.mode.shots,
            "eval_seed": self.mode.seed,
            **self.table.to_dict(),
            **self.params.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "QuantumModel":
        mode = EvalMode(data.get("eval_shots"), int(data.get("eval_seed", 0)))
        params = ParamSet.from_dict(data)
        if params.layers != int(data.get("layers", params.layers)):
            raise InvalidInputError(f"Layer count {data['layers']} does not match rotations {params.layers}")
        return cls(ConstellationTable.from_dict(data), data["variant"], params, mode)


class BaselineModel:
    """Trainable encoder table plus the classical dense decoder"""
    kind = "baseline"

    def __init__(self, table: ConstellationTable, decoder: ClassicalDecoder):
        self.table = table
        self.decoder = decoder

    @classmethod
    def initialize(cls, rng: np.random.Generator) -> "BaselineModel":
        table = random_table(rng)
        return cls(table, ClassicalDecoder.initialize(rng))

    def parameters(self) -> Dict[str, np.ndarray]:
        return {EMBEDDING: self.table.raw, **self.decoder.parameters()}

    def with_parameters(self, values: Dict[str, np.ndarray]) -> "BaselineModel":
        decoder = ClassicalDecoder.from_parameters(values)
        return BaselineModel(ConstellationTable(values[EMBEDDING]), decoder)

    def decode_batch(self, ys: np.ndarray, stream: Tuple[int, ...] = ()) -> np.ndarray:
        return self.decoder.forward(ys)

    def batch_loss(self, messages, ys, stream: Tuple[int, ...] = ()):
        loss, grads, d_inputs, _ = self.decoder.loss_gradient(messages, ys)
        return loss, grads, d_inputs

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, **self.table.to_dict(), "decoder": self.decoder.to_dict()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BaselineModel":
        return cls(ConstellationTable.from_dict(data), ClassicalDecoder.from_dict(data["decoder"]))


def model_from_dict(data: Dict[str, Any]):
    kind = data.get("kind")
    if kind == QuantumModel.kind:
        return QuantumModel.from_dict(data)
    if kind == BaselineModel.kind:
        return BaselineModel.from_dict(data)
    raise InvalidInputError(f"Unknown model kind: {kind!r}")


@dataclass
class MetricsHistory:
    """One row per training step; ``ser`` and ``wall_ms`` are NaN where not recorded"""
    steps: List[int] = field(default_factory=list)
    losses: List[float] = field(default_factory=list)
    sers: List[float] = field(default_factory=list)
    wall_ms: List[float] = field(default_factory=list)

    def append(self, step: int, loss: float, ser: Optional[float] = None,
               wall_ms: Optional[float] = None) -> None:
        self.steps.append(int(step))
        self.losses.append(float(loss))
        self.sers.append(np.nan if ser is None else float(ser))
        self.wall_ms.append(np.nan if wall_ms is None else float(wall_ms))

    def __len__(self) -> int:
        return len(self.steps)

    def truncate(self, step: int) -> None:
        """Drop rows at or after ``step``"""
        keep = sum(1 for s in self.steps if s < step)
        for column in (self.steps, self.losses, self.sers, self.wall_ms):
            del column[keep:]

    @property
    def ser_points(self) -> List[Tuple[int, float]]:
        return [(s, r) for s, r in zip(self.steps, self.sers) if not np.isnan(r)]

    @property
    def initial_ser(self) -> Optional[float]:
        points = self.ser_points
        return points[0][1] if points else None

    @property
    def final_ser(self) -> Optional[float]:
        points = self.ser_points
        return points[-1][1] if points else None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "step": np.array(self.steps, dtype=int),
            "loss": self.losses,
            "ser": self.sers,
            "wall_ms": self.wall_ms,
        })

    def to_dict(self) -> Dict[str, Any]:
        # NaN is not valid JSON; missing values are stored as null
        def clean(values):
            return [None if np.isnan(v) else v for v in values]

        return {"step": list(self.steps), "loss": list(self.losses),
                "ser": clean(self.sers), "wall_ms": clean(self.wall_ms)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MetricsHistory":
        def restore(values):
            return [np.nan if v is None else float(v) for v in values]

        return cls(list(map(int, data["step"])), [float(v) for v in data["loss"]],
                   restore(data["ser"]), restore(data["wall_ms"]))


@dataclass
class TrainResult:
    """Trained model with everything needed to resume"""
    model: Any
    history: MetricsHistory
    optimizer: AdamState
    step: int
    seed: int


def _checked_model(model, values: Dict[str, np.ndarray], step: int):
    raw = values[EMBEDDING]
    if not np.all(np.isfinite(raw)):
        raise TrainingAbortedError(f"Embedding became non-finite at step {step}")
    scale = float(np.sqrt(np.mean(np.sum(raw ** 2, axis=1))))
    if scale < DEGENERATE_NORM:
        raise TrainingAbortedError(f"Constellation collapsed at step {step} (norm {scale:.3g})")
    return model.with_parameters(values)


def _batch(seed: int, step: int, batch_size: int) -> np.ndarray:
    return make_rng(seed, Stream.BATCH, step).integers(0, N_MESSAGES, batch_size)


def _check_table(model, step: int) -> None:
    if model.table.is_degenerate():
        logger.error(f"Degenerate constellation at step {step}; aborting")
        raise TrainingAbortedError(f"Constellation is degenerate at step {step} (norm {model.table.scale:.3g})")


def _step_loss(model, channel: AWGNChannel, seed: int, step: int, batch_size: int):
    _check_table(model, step)
    messages = _batch(seed, step, batch_size)
    xs = model.table.normalized[messages]
    ys = channel.apply(xs, step)
    loss, grads, d_signal = model.batch_loss(messages, ys, (Stream.SHOTS, step))
    if not np.isfinite(loss):
        logger.error(f"Loss is {loss} at step {step}; aborting")
        raise TrainingAbortedError(f"Non-finite loss {loss} at step {step}")
    # dy/dx is the identity, so the signal gradient is the normalized-row gradient
    d_normalized = np.zeros((N_MESSAGES, 2))
    np.add.at(d_normalized, messages, d_signal)
    grads[EMBEDDING] = model.table.backprop(d_normalized)
    return loss, grads


def fit(model, cfg: TrainConfig, seed: int, resume: Optional[TrainResult] = None,
        label: str = "train") -> TrainResult:
    """
    Run the shared training loop

    Rows ``0 .. steps-1`` hold the batch loss seen by update ``t``; SER is
    measured on the pre-update model every ``ser_every`` steps. A final row at
    ``step = steps`` holds the loss of one more batch and the SER of the
    trained model.

    Args:
        model: QuantumModel or BaselineModel
        cfg: Training settings
        seed: Master seed of the run
        resume: Previous result to continue from
        label: Progress bar label

    Returns:
        TrainResult
    """
    cfg.validate()
    channel = AWGNChannel(cfg.snr_db, seed)
    if resume is not None:
        if resume.seed != seed:
            raise InvalidInputError(f"Checkpoint seed {resume.seed} differs from requested seed {seed}")
        model, history, state, start = resume.model, resume.history, resume.optimizer, resume.step
        if start > cfg.steps:
            raise InvalidInputError(f"Checkpoint step {start} exceeds configured steps {cfg.steps}")
        # The closing row of the previous run is recomputed by the loop
        if start < cfg.steps:
            history = MetricsHistory.from_dict(history.to_dict())
            history.truncate(start)
        logger.info(f"Resuming {label} at step {start}")
    else:
        history = MetricsHistory()
        state = AdamState.zeros(model.parameters(), cfg.learning_rate)
        start = 0

    def evaluate():
        return model_ser(model, cfg.snr_db, cfg.eval_symbols, seed)

    for step in tqdm(range(start, cfg.steps), desc=label, disable=not cfg.progress):
        started = time.perf_counter() if cfg.record_wall_time else None
        _check_table(model, step)
        rate = evaluate() if step % cfg.ser_every == 0 else None
        loss, grads = _step_loss(model, channel, seed, step, cfg.batch_size)
        values, state = adam_step(state, grads, model.parameters())
        model = _checked_model(model, values, step)
        elapsed = (time.perf_counter() - started) * 1000.0 if started is not None else None
        history.append(step, loss, rate, elapsed)
        logger.debug(f"{label} step {step}: loss {loss:.6f}")
        if rate is not None:
            logger.info(f"{label} step {step}: loss {loss:.4f}, SER {rate:.4f}")

    if not history.steps or history.steps[-1] != cfg.steps:
        final_loss, _ = _step_loss(model, channel, seed, cfg.steps, cfg.batch_size)
        final_rate = evaluate()
        history.append(cfg.steps, final_loss, final_rate)
        logger.info(f"{label} finished: loss {final_loss:.4f}, SER {final_rate:.4f}")

    return TrainResult(model=model, history=history, optimizer=state, step=cfg.steps, seed=seed)


def _seed(cfg: TrainConfig, seed: Optional[int]) -> int:
    return int(cfg.seeds[0] if seed is None else seed)


def train(cfg: TrainConfig, seed: Optional[int] = None,
          resume: Optional[TrainResult] = None) -> TrainResult:
    """
    Train the quantum autoencoder

    SHOTS-mode sampling is keyed by the run seed.
    """
    cfg.validate()
    seed = _seed(cfg, seed)
    mode = cfg.eval_mode if cfg.eval_mode.is_analytic else EvalMode(cfg.eval_mode.shots, seed)
    if resume is None:
        model = QuantumModel.initialize(cfg.variant, cfg.layers, make_rng(seed, Stream.INIT), mode)
    else:
        model = resume.model
        if not isinstance(model, QuantumModel):
            raise InvalidInputError("Checkpoint does not hold a quantum model")
        if model.variant != cfg.variant or model.layers != cfg.layers:
            raise InvalidInputError(
                f"Checkpoint model {model.variant.value} L={model.layers} does not match "
                f"{cfg.variant.value} L={cfg.layers}"
            )
    logger.info(f"Training {cfg.variant.value} L={cfg.layers} seed={seed} ({mode.describe()})")
    return fit(model, cfg, seed, resume, label=f"{cfg.variant.value} L={cfg.layers}")


def baseline_train(cfg: TrainConfig, seed: Optional[int] = None,
                   resume: Optional[TrainResult] = None) -> TrainResult:
    """Train the classical autoencoder with the same loss, optimizer and batches"""
    cfg.validate()
    seed = _seed(cfg, seed)
    if resume is None:
        model = BaselineModel.initialize(make_rng(seed, Stream.INIT))
    elif not isinstance(resume.model, BaselineModel):
        raise InvalidInputError("Checkpoint does not hold a baseline model")
    else:
        model = resume.model
    logger.info(f"Training classical baseline seed={seed}")
    return fit(model, cfg, seed, resume, label="baseline")


def embedding_gradient_check(model, messages, noise, epsilon: float = 1e-6) -> float:
    """
    Largest gap between the backpropagated gradient of the batch loss with respect
    to raw embedding entries and its central finite difference

    Noise is held fixed, so the loss is a deterministic function of the embedding.
    """
    messages = np.asarray(messages, dtype=int)
    noise = np.asarray(noise, dtype=float)

    def loss_and_grads(candidate):
        ys = candidate.table.normalized[messages] + noise
        loss, grads, d_signal = candidate.batch_loss(messages, ys)
        d_normalized = np.zeros((N_MESSAGES, 2))
        np.add.at(d_normalized, messages, d_signal)
        return loss, candidate.table.backprop(d_normalized)

    _, analytic = loss_and_grads(model)
    values = model.parameters()
    raw = values[EMBEDDING]
    worst = 0.0
    for idx in np.ndindex(raw.shape):
        step = np.zeros_like(raw)
        step[idx] = epsilon
        plus = model.with_parameters({**values, EMBEDDING: raw + step})
        minus = model.with_parameters({**values, EMBEDDING: raw - step})
        numeric = (loss_and_grads(plus)[0] - loss_and_grads(minus)[0]) / (2 * epsilon)
        worst = max(worst, abs(numeric - analytic[idx]))
    return float(worst)
