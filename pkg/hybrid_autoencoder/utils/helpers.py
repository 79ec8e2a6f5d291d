import hashlib
import json
import os
import platform
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd

PathLike = Union[str, Path]


def sanitize_filename(name: str) -> str:
    """Convert a string to a valid filename"""
    # Replace spaces with underscores and remove invalid characters
    name = re.sub(r'[^\w\-\.]', '_', name)
    return name


def create_directory_if_not_exists(path: PathLike) -> None:
    """Create a directory if it doesn't exist"""
    os.makedirs(path, exist_ok=True)


def canonical_json(data: Dict[str, Any]) -> str:
    """Serialize a config dictionary with sorted keys and no whitespace"""
    return json.dumps(data, sort_keys=True, separators=(',', ':'))


def config_hash(data: Dict[str, Any]) -> str:
    """SHA-256 of the canonical JSON form of a config dictionary"""
    return hashlib.sha256(canonical_json(data).encode('utf-8')).hexdigest()


def provenance_lines(config: Dict[str, Any], seed: Optional[int] = None) -> List[str]:
    """
    Build the '#'-prefixed header block written on top of every CSV

    Args:
        config: Fully resolved run configuration
        seed: Seed of the run that produced the file (if any)

    Returns:
        Header lines without trailing newlines
    """
    from .. import __version__

    lines = [
        f"# hybrid-autoencoder {__version__}",
        f"# python {platform.python_version()} numpy {np.__version__} pandas {pd.__version__}",
        f"# config_hash {config_hash(config)}",
    ]
    if seed is not None:
        lines.append(f"# seed {seed}")
    lines.append(f"# config {canonical_json(config)}")
    return lines


def write_csv(frame: pd.DataFrame, path: PathLike, config: Dict[str, Any],
              seed: Optional[int] = None) -> Path:
    """
    Write a data frame as CSV preceded by the provenance header

    Args:
        frame: Data to write
        path: Destination file; parent directories are created
        config: Run configuration embedded in the header
        seed: Seed embedded in the header

    Returns:
        The written path
    """
    path = Path(path)
    create_directory_if_not_exists(path.parent)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        for line in provenance_lines(config, seed):
            f.write(line + "\n")
        frame.to_csv(f, index=False, float_format="%.12g", lineterminator="\n")
    return path


def read_csv(path: PathLike) -> pd.DataFrame:
    """Read a CSV written by :func:`write_csv`, skipping the header block"""
    return pd.read_csv(path, comment='#')


def write_json(data: Dict[str, Any], path: PathLike) -> Path:
    """Write a dictionary as indented JSON, creating parent directories"""
    path = Path(path)
    create_directory_if_not_exists(path.parent)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=2, sort_keys=True)
    return path


def read_json(path: PathLike) -> Dict[str, Any]:
    """Read a JSON object from disk"""
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)
