"""
Circuit depth and per-shot execution time estimates, and the layer/device report.
"""

from typing import Callable, Dict, List, Optional, Sequence

import networkx as nx
import numpy as np
import pandas as pd

from ..quantum.ansatz import AnsatzVariant, build_circuit, init_params
from ..quantum.gates import GateKind, GateOp
from ..quantum.simulator import make_rng
from ..utils.logger import get_logger
from .decompose import decompose_to_basis
from .device import DeviceModel
from .routing import TranspiledCircuit, route

logger = get_logger("estimator")

DEVICE_KIND = {
    GateKind.RZ: "rz",
    GateKind.SX: "sx",
    GateKind.X: "x",
    GateKind.CNOT: "cx",
}
# Fixed signal used to instantiate report circuits; depth does not depend on it
REPORT_SIGNAL = (0.37, -0.61)


def dependency_dag(circuit: Sequence[GateOp]) -> nx.DiGraph:
    """Gate ``k`` depends on the previous gate touching any of its qubits"""
    dag = nx.DiGraph()
    last: Dict[int, int] = {}
    for k, gate in enumerate(circuit):
        dag.add_node(k, gate=gate)
        for q in gate.targets:
            if q in last:
                dag.add_edge(last[q], k)
            last[q] = k
    return dag


def _longest_path(circuit: Sequence[GateOp], weight: Callable[[GateOp], float]) -> float:
    dag = dependency_dag(circuit)
    finish: Dict[int, float] = {}
    for node in nx.topological_sort(dag):
        before = max((finish[p] for p in dag.predecessors(node)), default=0.0)
        finish[node] = before + weight(dag.nodes[node]["gate"])
    return max(finish.values(), default=0.0)


def depth(circuit: Sequence[GateOp]) -> int:
    """Longest dependency chain; every gate counts 1"""
    return int(_longest_path(circuit, lambda gate: 1.0))


def critical_path_ns(circuit: Sequence[GateOp], device: DeviceModel) -> float:
    """Longest dependency chain weighted by device gate durations"""
    def duration(gate: GateOp) -> float:
        return device.duration(DEVICE_KIND.get(gate.kind, gate.kind.value.lower()), gate.targets)

    return float(_longest_path(circuit, duration))


def transpile(circuit: Sequence[GateOp], device: DeviceModel,
              initial_layout: Optional[Sequence[int]] = None) -> TranspiledCircuit:
    """decompose -> route, with depth and critical-path time filled in"""
    basis = decompose_to_basis(circuit)
    tc = route(basis, device, initial_layout)
    tc.depth = depth(tc.gates)
    tc.critical_path_ns = critical_path_ns(tc.gates, device)
    return tc


def estimate_time(tc: TranspiledCircuit, device: DeviceModel, include_measure: bool = True,
                  include_reset: bool = True) -> float:
    """Per-shot execution time in microseconds"""
    total = critical_path_ns(tc.gates, device)
    if include_measure:
        total += device.duration("measure")
    if include_reset:
        total += device.duration("reset")
    return total / 1000.0


def inference_latency_ms(us_per_shot: float, shots: int) -> float:
    """Time to collect ``shots`` measurements, in milliseconds"""
    return us_per_shot * shots / 1000.0


def report(variant: AnsatzVariant, layer_set: Sequence[int], devices: Sequence[DeviceModel],
           shots: int = 1000, include_measure: bool = True, include_reset: bool = True,
           seed: int = 0) -> pd.DataFrame:
    """
    Transpile the decoder for every (device, L) pair

    Returns:
        Rows (device, layers, depth, us_per_shot, latency_ms, swaps, cx_count)
    """
    variant = AnsatzVariant.parse(variant)
    rows: List[Dict] = []
    for device in devices:
        for layers in layer_set:
            params = init_params(variant, int(layers), make_rng(seed, int(layers)))
            circuit = build_circuit(variant, params, np.array(REPORT_SIGNAL))
            tc = transpile(circuit, device)
            us = estimate_time(tc, device, include_measure, include_reset)
            rows.append({
                "device": device.name,
                "layers": int(layers),
                "depth": tc.depth,
                "us_per_shot": us,
                "latency_ms": inference_latency_ms(us, shots),
                "swaps": tc.swaps,
                "cx_count": tc.cx_count,
            })
            logger.info(f"{device.name} L={layers}: depth {tc.depth}, {us:.1f} us/shot, {tc.swaps} SWAP(s)")
    return pd.DataFrame(rows)


def fit_r2(x: Sequence[float], y: Sequence[float]) -> float:
    """Coefficient of determination of a least-squares line through (x, y)"""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    residual = np.sum((y - (slope * x + intercept)) ** 2)
    total = np.sum((y - np.mean(y)) ** 2)
    return 1.0 if total == 0 else float(1.0 - residual / total)
