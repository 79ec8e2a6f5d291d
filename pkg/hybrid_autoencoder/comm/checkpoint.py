"""
JSON checkpoints of trained models.
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from ..exceptions import CheckpointError, HybridAutoencoderError
from ..utils.helpers import PathLike, read_json, write_json
from ..utils.logger import get_logger
from .optimizer import AdamState
from .trainer import MetricsHistory, TrainResult, model_from_dict

logger = get_logger("checkpoint")

FORMAT_VERSION = 1


def save_checkpoint(result: TrainResult, path: PathLike,
                    config: Optional[Dict[str, Any]] = None) -> Path:
    """
    Write model, optimizer state, step counter, master seed and metrics

    Args:
        result: Output of a training run
        path: Destination ``.json`` file
        config: Resolved run configuration stored alongside for provenance

    Returns:
        The written path
    """
    data = {
        "format": FORMAT_VERSION,
        "seed": result.seed,
        "step": result.step,
        "model": result.model.to_dict(),
        "adam": result.optimizer.to_dict(),
        "history": result.history.to_dict(),
        "config": config or {},
    }
    path = write_json(data, path)
    logger.info(f"Checkpoint written to {path}")
    return path


def load_checkpoint(path: PathLike) -> Tuple[TrainResult, Dict[str, Any]]:
    """
    Read a checkpoint written by :func:`save_checkpoint`

    Returns:
        (TrainResult, stored config)

    Raises:
        CheckpointError: the file is missing or malformed
    """
    path = Path(path)
    if not path.exists():
        raise CheckpointError(f"Checkpoint not found: {path}")
    try:
        data = read_json(path)
    except (OSError, json.JSONDecodeError) as e:
        raise CheckpointError(f"Cannot read checkpoint {path}: {e}")
    if data.get("format") != FORMAT_VERSION:
        raise CheckpointError(f"Unsupported checkpoint format {data.get('format')!r} in {path}")
    try:
        result = TrainResult(
            model=model_from_dict(data["model"]),
            history=MetricsHistory.from_dict(data["history"]),
            optimizer=AdamState.from_dict(data["adam"]),
            step=int(data["step"]),
            seed=int(data["seed"]),
        )
    except (KeyError, TypeError, ValueError, HybridAutoencoderError) as e:
        raise CheckpointError(f"Malformed checkpoint {path}: {e}")
    return result, data.get("config", {})


def load_model(path: PathLike):
    """Model stored in a checkpoint"""
    result, _ = load_checkpoint(path)
    return result.model
