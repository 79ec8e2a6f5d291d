"""
AWGN channel and the substream identifiers every run draws randomness from.
"""

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from ..exceptions import InvalidInputError
from ..quantum.simulator import make_rng


class Stream(IntEnum):
    """First key of every substream under a run's master seed"""
    INIT = 0
    BATCH = 1
    NOISE = 2
    SHOTS = 3
    EVAL = 4
    CHANNEL = 5


def snr_to_sigma(snr_db: float) -> float:
    """
    Noise standard deviation per real dimension

    Unit average symbol power with total noise power 1/SNR split over the two
    real dimensions: σ = sqrt(1 / (2 · 10^(snr_db/10))).
    """
    snr_db = float(snr_db)
    if math.isnan(snr_db) or snr_db == -math.inf:
        raise InvalidInputError(f"SNR must be finite or +inf, got {snr_db}")
    if snr_db == math.inf:
        return 0.0
    return math.sqrt(1.0 / (2.0 * 10.0 ** (snr_db / 10.0)))


@dataclass(frozen=True)
class ChannelConfig:
    snr_db: float = 15.0
    seed: int = 0

    def __post_init__(self):
        if not math.isfinite(float(self.snr_db)):
            raise InvalidInputError(f"snr_db must be finite, got {self.snr_db}")

    @property
    def sigma(self) -> float:
        return snr_to_sigma(self.snr_db)


def add_noise(xs: np.ndarray, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """y = x + n with n ~ N(0, σ² I), drawn in one call for the whole batch"""
    xs = np.asarray(xs, dtype=float)
    if not np.all(np.isfinite(xs)):
        raise InvalidInputError("Channel input must be finite")
    if sigma == 0.0:
        return xs.copy()
    return xs + rng.normal(0.0, sigma, size=xs.shape)


def channel_apply(x, cfg: ChannelConfig, draw_index: int = 0) -> np.ndarray:
    """Corrupt one symbol; the noise depends only on (cfg.seed, draw_index)"""
    x = np.asarray(x, dtype=float)
    if x.shape != (2,):
        raise InvalidInputError(f"Signal must have 2 components, got shape {x.shape}")
    return add_noise(x, cfg.sigma, make_rng(cfg.seed, Stream.CHANNEL, draw_index))


class AWGNChannel:
    """Batched AWGN channel keyed by a master seed"""

    def __init__(self, snr_db: float, seed: int = 0):
        self.config = ChannelConfig(snr_db, seed)

    @property
    def sigma(self) -> float:
        return self.config.sigma

    def apply(self, xs: np.ndarray, *stream: int) -> np.ndarray:
        """
        Corrupt a batch of symbols

        Args:
            xs: Symbols, shape ``(B, 2)``
            stream: Substream key (e.g. the training step); the same key gives the same noise
        """
        return add_noise(xs, self.sigma, make_rng(self.config.seed, Stream.NOISE, *stream))
