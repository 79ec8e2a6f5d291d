"""
Greedy SWAP routing onto a device coupling graph.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from ..exceptions import DeviceModelError, InvalidInputError
from ..quantum.gates import GateKind, GateOp
from ..utils.logger import get_logger
from .device import DeviceModel

logger = get_logger("routing")


@dataclass
class TranspiledCircuit:
    """
    Basis-gate circuit over physical qubits

    ``initial_layout[i]`` / ``final_layout[i]`` is the physical qubit holding
    logical qubit ``i`` before / after the circuit.
    """
    gates: List[GateOp]
    initial_layout: List[int]
    final_layout: List[int]
    n_physical: int
    swaps: int = 0
    depth: Optional[int] = None
    critical_path_ns: Optional[float] = None

    @property
    def cx_count(self) -> int:
        return sum(1 for g in self.gates if g.kind == GateKind.CNOT)


def _logical_qubits(circuit: Sequence[GateOp]) -> int:
    return max((q for g in circuit for q in g.targets), default=-1) + 1


def _upcoming_pairs(circuit: Sequence[GateOp]) -> List[Optional[Tuple[int, int]]]:
    """For each gate, the operands of the next two-qubit gate after it"""
    upcoming: List[Optional[Tuple[int, int]]] = [None] * len(circuit)
    following = None
    for k in range(len(circuit) - 1, -1, -1):
        upcoming[k] = following
        if circuit[k].is_two_qubit:
            following = circuit[k].targets
    return upcoming


def _after_swaps(layout: List[int], path: Sequence[int]) -> List[int]:
    moved = list(layout)
    where = {p: i for i, p in enumerate(moved)}
    for a, b in zip(path[:-2], path[1:-1]):
        la, lb = where.pop(a, None), where.pop(b, None)
        if la is not None:
            moved[la], where[b] = b, la
        if lb is not None:
            moved[lb], where[a] = a, lb
    return moved


def _choose_path(device: DeviceModel, layout: List[int], pc: int, pt: int,
                 following: Optional[Tuple[int, int]]) -> List[int]:
    """
    Move the control towards the target, or the target towards the control when
    that leaves the next two-qubit gate closer together
    """
    candidates = [device.shortest_path(pc, pt), device.shortest_path(pt, pc)]
    if following is None:
        return candidates[0]

    def cost(path):
        moved = _after_swaps(layout, path)
        return nx.shortest_path_length(device.graph, moved[following[0]], moved[following[1]])

    return min(candidates, key=cost)


def route(circuit: Sequence[GateOp], device: DeviceModel,
          initial_layout: Optional[Sequence[int]] = None) -> TranspiledCircuit:
    """
    Map logical qubits to physical ones, inserting SWAPs (as 3 CX each) so every
    CX acts on a coupling edge

    Before a CX whose operands are not adjacent, one operand is moved along a
    shortest path until it neighbours the other: the control, unless moving the
    target leaves the next two-qubit gate closer. The layout carries over to
    later gates.

    Args:
        circuit: Basis-gate circuit over logical qubits
        device: Target device
        initial_layout: Physical qubit of each logical qubit (identity by default)

    Returns:
        TranspiledCircuit
    """
    n_logical = _logical_qubits(circuit)
    if initial_layout is None:
        initial_layout = list(range(n_logical))
    layout = [int(p) for p in initial_layout]
    if len(layout) < n_logical:
        raise InvalidInputError(f"Layout covers {len(layout)} qubits, circuit uses {n_logical}")
    if n_logical > device.n_qubits or len(set(layout)) != len(layout) \
            or any(not 0 <= p < device.n_qubits for p in layout):
        raise InvalidInputError(f"Layout {layout} does not fit device {device.name} ({device.n_qubits} qubits)")
    if not nx.is_connected(device.graph):
        raise DeviceModelError(f"Coupling graph of {device.name} is not connected")

    start = list(layout)
    physical_to_logical: Dict[int, int] = {p: i for i, p in enumerate(layout)}
    out: List[GateOp] = []
    swaps = 0

    def swap(a: int, b: int):
        nonlocal swaps
        out.extend([GateOp(GateKind.CNOT, (a, b)), GateOp(GateKind.CNOT, (b, a)), GateOp(GateKind.CNOT, (a, b))])
        la, lb = physical_to_logical.pop(a, None), physical_to_logical.pop(b, None)
        if la is not None:
            layout[la] = b
            physical_to_logical[b] = la
        if lb is not None:
            layout[lb] = a
            physical_to_logical[a] = lb
        swaps += 1

    upcoming = _upcoming_pairs(circuit)
    for k, gate in enumerate(circuit):
        if gate.kind == GateKind.SWAP:
            raise InvalidInputError("Decompose SWAP gates before routing")
        if not gate.is_two_qubit:
            out.append(GateOp(gate.kind, (layout[gate.targets[0]],), gate.angles))
            continue
        control, target = gate.targets
        pc, pt = layout[control], layout[target]
        if not device.adjacent(pc, pt):
            path = _choose_path(device, layout, pc, pt, upcoming[k])
            logger.debug(f"CX {control}->{target} on {pc}->{pt}: {len(path) - 2} SWAP(s) along {path}")
            for a, b in zip(path[:-2], path[1:-1]):
                swap(a, b)
            pc, pt = layout[control], layout[target]
        out.append(GateOp(GateKind.CNOT, (pc, pt)))

    return TranspiledCircuit(out, start, list(layout), device.n_qubits, swaps)


def validate_routing(tc: TranspiledCircuit, device: DeviceModel) -> bool:
    """True when every CX acts on a coupling edge"""
    return all(device.adjacent(*g.targets) for g in tc.gates if g.is_two_qubit)
