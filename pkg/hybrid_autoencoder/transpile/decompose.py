"""
Lowering to the {RZ, SX, X, CX} basis.

Runs of single-qubit gates on a qubit are multiplied into one 2x2 unitary,
written as e^{iα} RZ(φ) RY(θ) RZ(λ) and emitted as

    RZ(λ) · SX · RZ(θ + π) · SX · RZ(φ + π)

in circuit order (equal up to global phase). CNOT is the basis CX.
"""

import math
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..exceptions import DeviceModelError
from ..quantum.gates import GateKind, GateOp, gate_matrix

BASIS_KINDS = frozenset({GateKind.RZ, GateKind.SX, GateKind.X, GateKind.CNOT})
ATOL = 1e-10


def zyz_angles(unitary: np.ndarray) -> Tuple[float, float, float, float]:
    """
    Euler angles of a 2x2 unitary

    Returns:
        (θ, φ, λ, α) with U = e^{iα} RZ(φ) RY(θ) RZ(λ)
    """
    u = np.asarray(unitary, dtype=complex)
    coeff = np.linalg.det(u) ** -0.5
    phase = -np.angle(coeff)
    su = coeff * u
    theta = 2 * math.atan2(abs(su[1, 0]), abs(su[0, 0]))
    phi_plus_lam = 2 * np.angle(su[1, 1])
    phi_minus_lam = 2 * np.angle(su[1, 0])
    phi = (phi_plus_lam + phi_minus_lam) / 2.0
    lam = (phi_plus_lam - phi_minus_lam) / 2.0
    return float(theta), float(phi), float(lam), float(phase)


def _is_zero_angle(angle: float) -> bool:
    # RZ(2π) is -I, a global phase
    return abs(math.remainder(angle, 2 * math.pi)) < ATOL


def euler_to_basis(unitary: np.ndarray, qubit: int) -> List[GateOp]:
    """At most 2 SX and 3 RZ reproducing ``unitary`` up to global phase"""
    theta, phi, lam, _ = zyz_angles(unitary)
    if abs(theta) < ATOL:
        total = phi + lam
        return [] if _is_zero_angle(total) else [GateOp(GateKind.RZ, (qubit,), (total,))]
    if abs(theta - math.pi / 2) < ATOL:
        return [
            GateOp(GateKind.RZ, (qubit,), (lam - math.pi / 2,)),
            GateOp(GateKind.SX, (qubit,)),
            GateOp(GateKind.RZ, (qubit,), (phi + math.pi / 2,)),
        ]
    return [
        GateOp(GateKind.RZ, (qubit,), (lam,)),
        GateOp(GateKind.SX, (qubit,)),
        GateOp(GateKind.RZ, (qubit,), (theta + math.pi,)),
        GateOp(GateKind.SX, (qubit,)),
        GateOp(GateKind.RZ, (qubit,), (phi + math.pi,)),
    ]


def _flush(run: List[GateOp], qubit: int) -> List[GateOp]:
    if not run:
        return []
    if all(g.kind == GateKind.RZ for g in run):
        if len(run) == 1:
            return list(run)
        return [GateOp(GateKind.RZ, (qubit,), (sum(g.angles[0] for g in run),))]
    if len(run) == 1 and run[0].kind in BASIS_KINDS:
        return list(run)
    unitary = np.eye(2, dtype=complex)
    for gate in run:
        unitary = gate_matrix(gate) @ unitary
    return euler_to_basis(unitary, qubit)


def decompose_to_basis(circuit: Sequence[GateOp], fuse: bool = True) -> List[GateOp]:
    """
    Rewrite a circuit into RZ, SX, X and CX (CNOT) gates

    Args:
        circuit: Gates from the ansatz inventory (RX, RY, RZ, ROT, CNOT, SWAP, SX, X)
        fuse: Merge adjacent single-qubit gates before decomposing; when False
            each gate is decomposed on its own

    Returns:
        Basis-gate circuit, equal to the input up to global phase
    """
    out: List[GateOp] = []
    pending: Dict[int, List[GateOp]] = {}

    def flush(qubit: int):
        out.extend(_flush(pending.pop(qubit, []), qubit))

    for gate in circuit:
        if not isinstance(gate, GateOp):
            raise DeviceModelError(f"Unknown gate kind: {gate!r}")
        if gate.is_two_qubit:
            for q in gate.targets:
                flush(q)
            if gate.kind == GateKind.CNOT:
                out.append(gate)
            elif gate.kind == GateKind.SWAP:
                a, b = gate.targets
                out.extend([GateOp(GateKind.CNOT, (a, b)), GateOp(GateKind.CNOT, (b, a)),
                            GateOp(GateKind.CNOT, (a, b))])
            else:
                raise DeviceModelError(f"Cannot decompose two-qubit gate {gate.kind.value}")
            continue
        q = gate.targets[0]
        pending.setdefault(q, []).append(gate)
        if not fuse:
            flush(q)

    for q in sorted(pending):
        flush(q)
    return out


def is_basis_circuit(circuit: Sequence[GateOp]) -> bool:
    return all(g.kind in BASIS_KINDS for g in circuit)
