"""
Decoder circuits: angle-embedding blocks followed by strongly entangling layers.

Four variants are supported:

- PLAIN: one encoding block (x0 on qubit 0, x1 on qubit 1) then L layers
- SINGLE_DR: the same two-gate block re-uploaded before every layer
- DOUBLE_DR: x0 on qubits 0 and 2, x1 on qubits 1 and 3, before every layer
- WEIGHTED_DOUBLE_DR: DOUBLE_DR with a trainable multiplier per encoding gate
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import InvalidInputError
from .gates import GateKind, GateOp

N_QUBITS = 4
N_FEATURES = 2
ROTATION_ANGLES = 3


class AnsatzVariant(str, Enum):
    PLAIN = "plain"
    SINGLE_DR = "single_dr"
    DOUBLE_DR = "double_dr"
    WEIGHTED_DOUBLE_DR = "weighted_double_dr"

    @classmethod
    def parse(cls, value) -> "AnsatzVariant":
        """Accept an enum member, its value or its name in any case"""
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower().replace("-", "_")
        for member in cls:
            if text in (member.value, member.name.lower()):
                return member
        choices = ", ".join(m.value for m in cls)
        raise InvalidInputError(f"Unknown ansatz variant {value!r} (choose from {choices})")

    @property
    def is_weighted(self) -> bool:
        return self is AnsatzVariant.WEIGHTED_DOUBLE_DR

    @property
    def reuploads(self) -> bool:
        return self is not AnsatzVariant.PLAIN

    @property
    def encoded_qubits(self) -> Tuple[int, ...]:
        if self in (AnsatzVariant.PLAIN, AnsatzVariant.SINGLE_DR):
            return (0, 1)
        return (0, 1, 2, 3)


def feature_of_qubit(qubit: int) -> int:
    """Feature index encoded on a qubit: x0 on even qubits, x1 on odd qubits"""
    return qubit % N_FEATURES


@dataclass
class ParamSet:
    """Trainable decoder parameters"""
    rotations: np.ndarray
    encoding_weights: Optional[np.ndarray] = None

    def __post_init__(self):
        self.rotations = np.array(self.rotations, dtype=float)
        if self.rotations.ndim != 3 or self.rotations.shape[1:] != (N_QUBITS, ROTATION_ANGLES):
            raise InvalidInputError(
                f"rotations must have shape (L, {N_QUBITS}, {ROTATION_ANGLES}), got {self.rotations.shape}"
            )
        if self.encoding_weights is not None:
            self.encoding_weights = np.array(self.encoding_weights, dtype=float)
            if self.encoding_weights.shape != (self.layers, N_QUBITS):
                raise InvalidInputError(
                    f"encoding_weights must have shape ({self.layers}, {N_QUBITS}), "
                    f"got {self.encoding_weights.shape}"
                )

    @property
    def layers(self) -> int:
        return int(self.rotations.shape[0])

    def check_variant(self, variant: AnsatzVariant) -> None:
        """Raise unless weights are present exactly for the weighted variant"""
        variant = AnsatzVariant.parse(variant)
        if variant.is_weighted and self.encoding_weights is None:
            raise InvalidInputError(f"{variant.value} requires encoding_weights")
        if not variant.is_weighted and self.encoding_weights is not None:
            raise InvalidInputError(f"{variant.value} takes no encoding_weights")

    def copy(self) -> "ParamSet":
        weights = None if self.encoding_weights is None else self.encoding_weights.copy()
        return ParamSet(self.rotations.copy(), weights)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rotations": self.rotations.tolist(),
            "encoding_weights": None if self.encoding_weights is None else self.encoding_weights.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ParamSet":
        return cls(np.array(data["rotations"], dtype=float), data.get("encoding_weights"))


def _features(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (N_FEATURES,):
        raise InvalidInputError(f"Feature vector must have {N_FEATURES} entries, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError(f"Feature vector must be finite, got {x}")
    return x


def encoding_block(variant: AnsatzVariant, x, layer_weights=None) -> List[GateOp]:
    """
    Angle-embedding RX gates for one feature vector

    Args:
        variant: Ansatz variant
        x: Two received signal components
        layer_weights: Four multipliers, required iff the variant is weighted

    Returns:
        RX gates in qubit order
    """
    variant = AnsatzVariant.parse(variant)
    x = _features(x)
    if variant.is_weighted != (layer_weights is not None):
        raise InvalidInputError(
            f"layer_weights must be given exactly for {AnsatzVariant.WEIGHTED_DOUBLE_DR.value}"
        )
    if layer_weights is not None:
        layer_weights = np.asarray(layer_weights, dtype=float)
        if layer_weights.shape != (N_QUBITS,):
            raise InvalidInputError(f"layer_weights must have {N_QUBITS} entries, got {layer_weights.shape}")

    gates = []
    for q in variant.encoded_qubits:
        w = 1.0 if layer_weights is None else layer_weights[q]
        gates.append(GateOp(GateKind.RX, (q,), (w * x[feature_of_qubit(q)],)))
    return gates


RING = tuple((q, (q + 1) % N_QUBITS) for q in range(N_QUBITS))


def entangling_layer(layer_rotations) -> List[GateOp]:
    """ROT on every qubit followed by the CNOT ring 0→1, 1→2, 2→3, 3→0"""
    rot = np.asarray(layer_rotations, dtype=float)
    if rot.shape != (N_QUBITS, ROTATION_ANGLES):
        raise InvalidInputError(f"layer rotations must have shape ({N_QUBITS}, {ROTATION_ANGLES}), got {rot.shape}")
    gates = [GateOp(GateKind.ROT, (q,), tuple(rot[q])) for q in range(N_QUBITS)]
    gates.extend(GateOp(GateKind.CNOT, pair) for pair in RING)
    return gates


@dataclass(frozen=True, eq=False)
class CircuitLayout:
    """
    Where every trainable quantity lands in a circuit's flattened angle vector

    ``template`` has the gate structure with zero angles. ``rotation_slots[l, q, k]``
    is the column of angle ``k`` of the ROT on qubit ``q`` in layer ``l``. The
    ``enc_*`` arrays describe each encoding RX gate: its column, the layer whose
    weights it uses and the qubit / feature it encodes.
    """
    variant: AnsatzVariant
    layers: int
    template: Tuple[GateOp, ...]
    rotation_slots: np.ndarray
    enc_slots: np.ndarray
    enc_layer: np.ndarray
    enc_qubit: np.ndarray
    enc_feature: np.ndarray

    @property
    def n_slots(self) -> int:
        return int(sum(g.n_angles for g in self.template))


@lru_cache(maxsize=64)
def circuit_layout(variant: AnsatzVariant, layers: int) -> CircuitLayout:
    variant = AnsatzVariant.parse(variant)
    if layers < 0:
        raise InvalidInputError(f"layers must be non-negative, got {layers}")

    template: List[GateOp] = []
    rotation_slots = np.zeros((layers, N_QUBITS, ROTATION_ANGLES), dtype=int)
    enc = []
    column = 0

    def add_encoding(layer: int):
        nonlocal column
        for q in variant.encoded_qubits:
            template.append(GateOp(GateKind.RX, (q,), (0.0,)))
            enc.append((column, layer, q, feature_of_qubit(q)))
            column += 1

    def add_layer(layer: int):
        nonlocal column
        for q in range(N_QUBITS):
            template.append(GateOp(GateKind.ROT, (q,), (0.0, 0.0, 0.0)))
            rotation_slots[layer, q] = np.arange(column, column + ROTATION_ANGLES)
            column += ROTATION_ANGLES
        template.extend(GateOp(GateKind.CNOT, pair) for pair in RING)

    if not variant.reuploads:
        add_encoding(0)
    for layer in range(layers):
        if variant.reuploads:
            add_encoding(layer)
        add_layer(layer)

    enc_arr = np.array(enc, dtype=int).reshape(-1, 4)
    rotation_slots.setflags(write=False)
    return CircuitLayout(
        variant=variant,
        layers=layers,
        template=tuple(template),
        rotation_slots=rotation_slots,
        enc_slots=enc_arr[:, 0],
        enc_layer=enc_arr[:, 1],
        enc_qubit=enc_arr[:, 2],
        enc_feature=enc_arr[:, 3],
    )


def encoding_multipliers(layout: CircuitLayout, params: ParamSet) -> np.ndarray:
    """Weight applied to the feature of each encoding gate (1 when unweighted)"""
    if params.encoding_weights is None:
        return np.ones(layout.enc_slots.shape[0])
    return params.encoding_weights[layout.enc_layer, layout.enc_qubit]


def circuit_angles(variant: AnsatzVariant, params: ParamSet, xs) -> np.ndarray:
    """
    Flattened angle vectors for a batch of feature vectors

    Args:
        variant: Ansatz variant
        params: Decoder parameters
        xs: Features, shape ``(B, 2)`` (or ``(2,)`` for a single sample)

    Returns:
        Angles of shape ``(B, S)`` matching :func:`circuit_layout`'s template
    """
    variant = AnsatzVariant.parse(variant)
    params.check_variant(variant)
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    if xs.shape[1] != N_FEATURES:
        raise InvalidInputError(f"Features must have shape (B, {N_FEATURES}), got {xs.shape}")
    if not np.all(np.isfinite(xs)):
        raise InvalidInputError("Features must be finite")
    layout = circuit_layout(variant, params.layers)
    angles = np.zeros((xs.shape[0], layout.n_slots))
    angles[:, layout.rotation_slots.reshape(-1)] = params.rotations.reshape(-1)
    angles[:, layout.enc_slots] = xs[:, layout.enc_feature] * encoding_multipliers(layout, params)
    return angles


def build_circuit(variant: AnsatzVariant, params: ParamSet, x) -> List[GateOp]:
    """
    Full decoder circuit for one received signal

    PLAIN places a single encoding block before the L entangling layers; the
    re-uploading variants repeat (encoding block; entangling layer) L times, the
    weighted variant using layer ``l``'s weights in encoding block ``l``.
    """
    variant = AnsatzVariant.parse(variant)
    x = _features(x)
    row = circuit_angles(variant, params, x[np.newaxis, :])[0]
    layout = circuit_layout(variant, params.layers)
    gates, col = [], 0
    for gate in layout.template:
        k = gate.n_angles
        gates.append(gate.with_angles(row[col:col + k]) if k else gate)
        col += k
    return gates


def init_params(variant: AnsatzVariant, layers: int, rng: np.random.Generator) -> ParamSet:
    """Rotations ~ Uniform[0, 2π); encoding weights start at 1.0"""
    variant = AnsatzVariant.parse(variant)
    if layers < 1:
        raise InvalidInputError(f"layers must be >= 1, got {layers}")
    rotations = rng.uniform(0.0, 2 * np.pi, size=(layers, N_QUBITS, ROTATION_ANGLES))
    weights = np.ones((layers, N_QUBITS)) if variant.is_weighted else None
    return ParamSet(rotations, weights)


def param_count(variant: AnsatzVariant, layers: int) -> int:
    """12 angles per layer, plus 4 encoding weights per layer for the weighted variant"""
    variant = AnsatzVariant.parse(variant)
    per_layer = N_QUBITS * ROTATION_ANGLES + (N_QUBITS if variant.is_weighted else 0)
    return per_layer * int(layers)


def flatten_params(params: ParamSet) -> np.ndarray:
    """Rotations (C order) followed by encoding weights, if any"""
    parts = [params.rotations.reshape(-1)]
    if params.encoding_weights is not None:
        parts.append(params.encoding_weights.reshape(-1))
    return np.concatenate(parts)


def unflatten_params(vector: Sequence[float], like: ParamSet) -> ParamSet:
    vector = np.asarray(vector, dtype=float)
    n_rot = like.rotations.size
    rotations = vector[:n_rot].reshape(like.rotations.shape)
    weights = None
    if like.encoding_weights is not None:
        weights = vector[n_rot:n_rot + like.encoding_weights.size].reshape(like.encoding_weights.shape)
    return ParamSet(rotations, weights)
