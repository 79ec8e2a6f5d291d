"""
Gate inventory and vectorized single-qubit matrices.

Qubit ``i`` contributes ``2**i`` to a basis index (qubit 0 is the least
significant bit).
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from ..exceptions import InvalidInputError


class GateKind(str, Enum):
    """Gate kinds understood by the simulator and the transpiler"""
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    ROT = "ROT"
    CNOT = "CNOT"
    SWAP = "SWAP"
    SX = "SX"
    X = "X"


ANGLE_ARITY = {
    GateKind.RX: 1,
    GateKind.RY: 1,
    GateKind.RZ: 1,
    GateKind.ROT: 3,
    GateKind.CNOT: 0,
    GateKind.SWAP: 0,
    GateKind.SX: 0,
    GateKind.X: 0,
}

QUBIT_ARITY = {
    GateKind.RX: 1,
    GateKind.RY: 1,
    GateKind.RZ: 1,
    GateKind.ROT: 1,
    GateKind.CNOT: 2,
    GateKind.SWAP: 2,
    GateKind.SX: 1,
    GateKind.X: 1,
}


@dataclass(frozen=True)
class GateOp:
    """A single gate: kind, qubit targets (control first for CNOT) and angles in radians"""
    kind: GateKind
    targets: Tuple[int, ...]
    angles: Tuple[float, ...] = field(default=())

    def __post_init__(self):
        try:
            kind = GateKind(self.kind)
        except ValueError:
            raise InvalidInputError(f"Unknown gate kind: {self.kind!r}")
        targets = tuple(int(q) for q in self.targets)
        angles = tuple(float(a) for a in self.angles)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "angles", angles)

        if len(targets) != QUBIT_ARITY[kind]:
            raise InvalidInputError(
                f"{kind.value} acts on {QUBIT_ARITY[kind]} qubit(s), got targets {targets}"
            )
        if len(set(targets)) != len(targets):
            raise InvalidInputError(f"{kind.value} targets must be distinct, got {targets}")
        if any(q < 0 for q in targets):
            raise InvalidInputError(f"{kind.value} has a negative target in {targets}")
        if len(angles) != ANGLE_ARITY[kind]:
            raise InvalidInputError(
                f"{kind.value} takes {ANGLE_ARITY[kind]} angle(s), got {len(angles)}"
            )

    @property
    def n_angles(self) -> int:
        return ANGLE_ARITY[self.kind]

    @property
    def is_two_qubit(self) -> bool:
        return QUBIT_ARITY[self.kind] == 2

    def check_targets(self, n_qubits: int) -> None:
        """Raise if a target is outside ``[0, n_qubits)``"""
        for q in self.targets:
            if q >= n_qubits:
                raise InvalidInputError(
                    f"Invalid qubit index {q} for {n_qubits}-qubit state in {self.kind.value}"
                )

    def with_angles(self, angles: Sequence[float]) -> "GateOp":
        return GateOp(self.kind, self.targets, tuple(angles))

    def inverse(self) -> List["GateOp"]:
        """Gates that undo this one (SX needs three copies since SX^4 = I)"""
        if self.kind in (GateKind.RX, GateKind.RY, GateKind.RZ):
            return [GateOp(self.kind, self.targets, (-self.angles[0],))]
        if self.kind == GateKind.ROT:
            phi, theta, omega = self.angles
            return [GateOp(GateKind.ROT, self.targets, (-omega, -theta, -phi))]
        if self.kind == GateKind.SX:
            return [self, self, self]
        return [self]

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "targets": list(self.targets), "angles": list(self.angles)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GateOp":
        try:
            return cls(GateKind(data["kind"]), tuple(data["targets"]), tuple(data.get("angles", ())))
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInputError(f"Malformed gate entry {data!r}: {e}")


def _as_angles(theta) -> np.ndarray:
    return np.asarray(theta, dtype=float)


def rx_matrix(theta) -> np.ndarray:
    """RX(θ) = exp(-iθX/2); broadcasts over the shape of ``theta``"""
    t = _as_angles(theta) / 2
    c, s = np.cos(t), np.sin(t)
    out = np.empty(t.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = c
    out[..., 0, 1] = -1j * s
    out[..., 1, 0] = -1j * s
    out[..., 1, 1] = c
    return out


def ry_matrix(theta) -> np.ndarray:
    """RY(θ) = exp(-iθY/2)"""
    t = _as_angles(theta) / 2
    c, s = np.cos(t), np.sin(t)
    out = np.empty(t.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = c
    out[..., 0, 1] = -s
    out[..., 1, 0] = s
    out[..., 1, 1] = c
    return out


def rz_matrix(theta) -> np.ndarray:
    """RZ(θ) = exp(-iθZ/2)"""
    t = _as_angles(theta) / 2
    out = np.zeros(t.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = np.exp(-1j * t)
    out[..., 1, 1] = np.exp(1j * t)
    return out


def rot_matrix(phi, theta, omega) -> np.ndarray:
    """ROT(φ, θ, ω) = RZ(ω)·RY(θ)·RZ(φ): RZ(φ) acts first"""
    return rz_matrix(omega) @ ry_matrix(theta) @ rz_matrix(phi)


X_MATRIX = np.array([[0, 1], [1, 0]], dtype=complex)
SX_MATRIX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex)


def single_qubit_matrix(kind: GateKind, angles) -> np.ndarray:
    """
    Matrix of a single-qubit gate

    Args:
        kind: Gate kind (RX, RY, RZ, ROT, SX or X)
        angles: Array whose last axis holds the gate's angles; leading axes are batch axes

    Returns:
        Array of shape ``batch + (2, 2)``
    """
    angles = np.asarray(angles, dtype=float)
    if kind == GateKind.RX:
        return rx_matrix(angles[..., 0])
    if kind == GateKind.RY:
        return ry_matrix(angles[..., 0])
    if kind == GateKind.RZ:
        return rz_matrix(angles[..., 0])
    if kind == GateKind.ROT:
        return rot_matrix(angles[..., 0], angles[..., 1], angles[..., 2])
    if kind == GateKind.SX:
        return np.broadcast_to(SX_MATRIX, angles.shape[:-1] + (2, 2))
    if kind == GateKind.X:
        return np.broadcast_to(X_MATRIX, angles.shape[:-1] + (2, 2))
    raise InvalidInputError(f"{GateKind(kind).value} is not a single-qubit gate")


def gate_matrix(gate: GateOp) -> np.ndarray:
    """2x2 matrix of a single-qubit GateOp"""
    return single_qubit_matrix(gate.kind, np.array(gate.angles, dtype=float))


def circuit_to_json(circuit: Sequence[GateOp]) -> List[Dict[str, Any]]:
    """Gate-list JSON form: one {kind, targets, angles} object per gate"""
    return [gate.to_dict() for gate in circuit]


def circuit_from_json(data: Sequence[Dict[str, Any]]) -> List[GateOp]:
    return [GateOp.from_dict(entry) for entry in data]
