"""
Classical encoder: a trainable 16x2 embedding with table-wide power normalization.
"""

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from ..exceptions import InvalidInputError
from ..utils.logger import get_logger

logger = get_logger("encoder")

N_MESSAGES = 16
SIGNAL_DIM = 2
DEGENERATE_NORM = 1e-12
REDRAW_NORM = 1e-6


@dataclass
class ConstellationTable:
    """Raw embedding rows; the transmitted constellation is :attr:`normalized`"""
    raw: np.ndarray

    def __post_init__(self):
        self.raw = np.array(self.raw, dtype=float)
        if self.raw.shape != (N_MESSAGES, SIGNAL_DIM):
            raise InvalidInputError(
                f"Embedding must have shape ({N_MESSAGES}, {SIGNAL_DIM}), got {self.raw.shape}"
            )
        if not np.all(np.isfinite(self.raw)):
            raise InvalidInputError("Embedding entries must be finite")

    @property
    def scale(self) -> float:
        """sqrt((1/16) Σ_s ‖raw_s‖²)"""
        return float(np.sqrt(np.mean(np.sum(self.raw ** 2, axis=1))))

    @property
    def normalized(self) -> np.ndarray:
        scale = self.scale
        if scale < DEGENERATE_NORM:
            raise InvalidInputError(f"Constellation norm {scale:.3g} is below {DEGENERATE_NORM}")
        return self.raw / scale

    @property
    def average_power(self) -> float:
        return float(np.mean(np.sum(self.normalized ** 2, axis=1)))

    def is_degenerate(self) -> bool:
        """Norm below the floor, or every row identical"""
        if self.scale < DEGENERATE_NORM:
            return True
        return bool(np.allclose(self.raw, self.raw[0], rtol=0.0, atol=DEGENERATE_NORM))

    def validate(self) -> None:
        if self.scale < DEGENERATE_NORM:
            raise InvalidInputError(f"Constellation norm {self.scale:.3g} is below {DEGENERATE_NORM}")
        if self.is_degenerate():
            raise InvalidInputError("Constellation is degenerate: all rows are equal")

    def backprop(self, d_normalized: np.ndarray) -> np.ndarray:
        """
        Gradient with respect to raw rows given the gradient with respect to normalized rows

        With N = R / c and c = sqrt(Σ R² / 16):
        dL/dR = G / c − R (Σ G∘R) / (16 c³)
        """
        g = np.asarray(d_normalized, dtype=float)
        if g.shape != self.raw.shape:
            raise InvalidInputError(f"Gradient shape {g.shape} does not match {self.raw.shape}")
        c = self.scale
        if c < DEGENERATE_NORM:
            raise InvalidInputError(f"Constellation norm {c:.3g} is below {DEGENERATE_NORM}")
        return g / c - self.raw * np.sum(g * self.raw) / (N_MESSAGES * c ** 3)

    def min_distance(self) -> float:
        """Smallest pairwise Euclidean distance between normalized points"""
        points = self.normalized
        diff = points[:, np.newaxis, :] - points[np.newaxis, :, :]
        dist = np.sqrt(np.sum(diff ** 2, axis=-1))
        return float(np.min(dist[np.triu_indices(N_MESSAGES, k=1)]))

    def copy(self) -> "ConstellationTable":
        return ConstellationTable(self.raw.copy())

    def to_dict(self) -> Dict[str, Any]:
        return {"raw_embedding": self.raw.tolist()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ConstellationTable":
        return cls(np.array(data["raw_embedding"], dtype=float))


def _check_messages(messages) -> np.ndarray:
    messages = np.asarray(messages)
    if messages.size and (not np.issubdtype(messages.dtype, np.integer)
                          or messages.min() < 0 or messages.max() >= N_MESSAGES):
        raise InvalidInputError(f"Messages must be integers in [0, {N_MESSAGES}), got {messages}")
    return messages.astype(int)


def encode(table: ConstellationTable, s: int) -> np.ndarray:
    """Normalized symbol for message ``s``"""
    if isinstance(s, bool) or not isinstance(s, (int, np.integer)) or not 0 <= s < N_MESSAGES:
        raise InvalidInputError(f"Message must be an integer in [0, {N_MESSAGES}), got {s!r}")
    return table.normalized[int(s)].copy()


def encode_batch(table: ConstellationTable, messages) -> np.ndarray:
    """Normalized symbols for an array of messages, shape ``(B, 2)``"""
    return table.normalized[_check_messages(messages)]


def random_table(rng: np.random.Generator) -> ConstellationTable:
    """Standard normal embedding, redrawn while its norm is below 1e-6"""
    while True:
        raw = rng.standard_normal((N_MESSAGES, SIGNAL_DIM))
        table = ConstellationTable(raw)
        if table.scale >= REDRAW_NORM:
            return table
        logger.warning(f"Redrawing initial embedding with norm {table.scale:.3g}")


QAM_LEVELS = np.array([-3.0, -1.0, 1.0, 3.0])


def qam16_table() -> ConstellationTable:
    """Square 16-QAM grid {±1, ±3}²; message s sits at (levels[s % 4], levels[s // 4])"""
    s = np.arange(N_MESSAGES)
    return ConstellationTable(np.stack([QAM_LEVELS[s % 4], QAM_LEVELS[s // 4]], axis=1))
