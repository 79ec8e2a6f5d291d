"""
Utility functions for the hybrid autoencoder package.
"""

from .logger import logger, setup_logger, get_logger
from .helpers import (
    sanitize_filename,
    create_directory_if_not_exists,
    canonical_json,
    config_hash,
    provenance_lines,
    write_csv,
    read_csv,
    write_json,
    read_json,
)

__all__ = [
    'logger',
    'setup_logger',
    'get_logger',
    'sanitize_filename',
    'create_directory_if_not_exists',
    'canonical_json',
    'config_hash',
    'provenance_lines',
    'write_csv',
    'read_csv',
    'write_json',
    'read_json',
]
