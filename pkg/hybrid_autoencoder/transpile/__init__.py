"""
Transpilation to device basis gates, routing, depth and execution-time estimates.
"""

from .device import DeviceModel, linear_device, load_device, resolve_device, t_shaped_device
from .decompose import decompose_to_basis, euler_to_basis, is_basis_circuit, zyz_angles
from .routing import TranspiledCircuit, route, validate_routing
from .estimator import (
    critical_path_ns,
    depth,
    estimate_time,
    fit_r2,
    inference_latency_ms,
    report,
    transpile,
)

__all__ = [
    'DeviceModel',
    'linear_device',
    'load_device',
    'resolve_device',
    't_shaped_device',
    'decompose_to_basis',
    'euler_to_basis',
    'is_basis_circuit',
    'zyz_angles',
    'TranspiledCircuit',
    'route',
    'validate_routing',
    'critical_path_ns',
    'depth',
    'estimate_time',
    'fit_r2',
    'inference_latency_ms',
    'report',
    'transpile',
]
