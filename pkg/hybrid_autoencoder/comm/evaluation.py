"""
Decoding, symbol error rate and evaluation sweeps.

Every evaluation draws its messages and unit-variance noise from the EVAL
substream of a seed, so a sweep over SNR values reuses the same messages and
noise directions (only the noise scale changes).
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..exceptions import InvalidInputError
from ..quantum.ansatz import AnsatzVariant, ParamSet
from ..quantum.gradients import ANALYTIC, EvalMode, evaluate_probabilities
from ..quantum.simulator import make_rng
from ..utils.logger import get_logger
from .channel import Stream, snr_to_sigma
from .encoder import N_MESSAGES, ConstellationTable, qam16_table

logger = get_logger("evaluation")

DecodeFn = Callable[[np.ndarray, Tuple[int, ...]], np.ndarray]


def decode(variant: AnsatzVariant, params: ParamSet, y, mode: EvalMode = ANALYTIC,
           stream: Tuple[int, ...] = ()) -> np.ndarray:
    """Output distribution of the quantum decoder for one received signal"""
    y = np.asarray(y, dtype=float)
    if y.shape != (2,):
        raise InvalidInputError(f"Received signal must have 2 components, got shape {y.shape}")
    return evaluate_probabilities(variant, params, y[np.newaxis, :], mode, stream)[0]


def predict(probs: np.ndarray) -> np.ndarray:
    """argmax over the last axis; ties go to the lowest index"""
    return np.argmax(np.asarray(probs), axis=-1)


def evaluation_draws(n_symbols: int, seed: int, stream: Tuple[int, ...] = ()) -> Tuple[np.ndarray, np.ndarray]:
    """Uniform messages and standard normal noise of one evaluation set"""
    if n_symbols < 1:
        raise InvalidInputError(f"n_symbols must be >= 1, got {n_symbols}")
    messages = make_rng(seed, Stream.EVAL, *stream, 0).integers(0, N_MESSAGES, n_symbols)
    noise = make_rng(seed, Stream.EVAL, *stream, 1).standard_normal((n_symbols, 2))
    return messages, noise


def _received(table: ConstellationTable, snr_db: float, n_symbols: int, seed: int,
              stream: Tuple[int, ...]) -> Tuple[np.ndarray, np.ndarray]:
    messages, noise = evaluation_draws(n_symbols, seed, stream)
    return messages, table.normalized[messages] + snr_to_sigma(snr_db) * noise


def symbol_error_rate(table: ConstellationTable, decode_batch: DecodeFn, snr_db: float,
                      n_symbols: int = 10000, seed: int = 0, stream: Tuple[int, ...] = ()) -> float:
    """Fraction of fresh channel outputs whose argmax decoding misses the sent message"""
    messages, ys = _received(table, snr_db, n_symbols, seed, stream)
    probs = decode_batch(ys, (Stream.EVAL,) + tuple(stream))
    return float(np.mean(predict(probs) != messages))


def ser(table: ConstellationTable, variant: AnsatzVariant, params: ParamSet, snr_db: float,
        n_symbols: int = 10000, seed: int = 0, mode: EvalMode = ANALYTIC) -> float:
    """Symbol error rate of a quantum decoder"""
    def decode_batch(ys, stream):
        return evaluate_probabilities(variant, params, ys, mode, stream)

    return symbol_error_rate(table, decode_batch, snr_db, n_symbols, seed)


def model_ser(model, snr_db: float, n_symbols: int = 10000, seed: int = 0,
              stream: Tuple[int, ...] = ()) -> float:
    """Symbol error rate of any model exposing ``table`` and ``decode_batch``"""
    return symbol_error_rate(model.table, model.decode_batch, snr_db, n_symbols, seed, stream)


def decoder_confidence(model, snr_db: float, n_symbols: int = 10000, seed: int = 0) -> float:
    """Mean of max_b p_b over fresh channel outputs"""
    _, ys = _received(model.table, snr_db, n_symbols, seed, ())
    probs = model.decode_batch(ys, (Stream.EVAL,))
    return float(np.mean(np.max(probs, axis=1)))


def qam_reference_ser(snr_db: float, n_symbols: int = 10000, seed: int = 0) -> float:
    """SER of square 16-QAM with minimum-distance detection"""
    table = qam16_table()
    points = table.normalized
    messages, ys = _received(table, snr_db, n_symbols, seed, ())
    dist = np.sum((ys[:, np.newaxis, :] - points[np.newaxis, :, :]) ** 2, axis=-1)
    return float(np.mean(np.argmin(dist, axis=1) != messages))


def ser_std(rate: float, n_symbols: int) -> float:
    """Monte-Carlo standard deviation of an SER estimate"""
    return float(np.sqrt(max(rate * (1.0 - rate), 0.0) / n_symbols))


def is_non_increasing(rates: Sequence[float], stds: Sequence[float], max_inversions: int = 1,
                      tolerance: float = 2.0) -> bool:
    """
    True when rates never rise, except for at most ``max_inversions`` rises each
    within ``tolerance`` standard deviations
    """
    rates = np.asarray(rates, dtype=float)
    stds = np.asarray(stds, dtype=float)
    inversions = 0
    for i in range(rates.size - 1):
        rise = rates[i + 1] - rates[i]
        if rise <= 0:
            continue
        inversions += 1
        if rise > tolerance * max(stds[i], stds[i + 1]):
            return False
    return inversions <= max_inversions


def sweep_snr(model, snr_grid: Sequence[float], n_symbols: int = 10000, seed: int = 0,
              baseline=None, reference_qam: bool = False, progress: bool = False) -> pd.DataFrame:
    """
    Evaluate a trained model over an SNR grid

    Args:
        model: Trained model (``table`` and ``decode_batch``)
        snr_grid: SNR values in dB
        n_symbols: Symbols per grid point
        seed: Evaluation seed
        baseline: Optional classical model evaluated on the same draws
        reference_qam: Add the minimum-distance 16-QAM SER

    Returns:
        One row per grid point: snr_db, ser, ser_std, mean_peak_prob, then
        baseline_ser and qam_ser when requested
    """
    rows = []
    for snr_db in tqdm(list(snr_grid), desc="SNR sweep", disable=not progress):
        rate = model_ser(model, snr_db, n_symbols, seed)
        row = {
            "snr_db": float(snr_db),
            "ser": rate,
            "ser_std": ser_std(rate, n_symbols),
            "mean_peak_prob": decoder_confidence(model, snr_db, n_symbols, seed),
        }
        if baseline is not None:
            row["baseline_ser"] = model_ser(baseline, snr_db, n_symbols, seed)
        if reference_qam:
            row["qam_ser"] = qam_reference_ser(snr_db, n_symbols, seed)
        logger.debug(f"SNR {snr_db} dB: SER {rate:.4f}")
        rows.append(row)
    return pd.DataFrame(rows)


@dataclass
class ConstellationExport:
    points: pd.DataFrame
    min_distance: float
    average_power: float


def export_constellation(table: ConstellationTable) -> ConstellationExport:
    """Normalized points labeled by message, with geometry summaries"""
    points = table.normalized
    frame = pd.DataFrame({
        "message": np.arange(N_MESSAGES),
        "i": points[:, 0],
        "q": points[:, 1],
    })
    return ConstellationExport(frame, table.min_distance(), table.average_power)


def curve_summary(history_frame: pd.DataFrame) -> Tuple[Optional[float], Optional[float]]:
    """(initial SER, final SER) of a metrics frame"""
    evaluated = history_frame.dropna(subset=["ser"])
    if evaluated.empty:
        return None, None
    return float(evaluated["ser"].iloc[0]), float(evaluated["ser"].iloc[-1])
