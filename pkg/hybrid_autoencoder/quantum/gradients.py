"""
Parameter-shift gradients of decoder probabilities and of the training loss.

Every trainable angle enters the circuit through a Pauli rotation (RX encodings,
and the RZ·RY·RZ factors of ROT), so

    dp/dθ = ½ [p(θ + π/2) − p(θ − π/2)]

is exact. Derivatives are first taken with respect to every angle column of the
circuit (see :class:`~hybrid_autoencoder.quantum.ansatz.CircuitLayout`) and then
chained onto rotations, encoding weights (∂angle/∂w = x) and features
(∂angle/∂x = w).

SHOTS mode substream schedule: evaluation ``e`` of sample ``i`` draws from
``make_rng(mode.seed, *stream, i, e)`` where ``e = 2k`` is the +π/2 shift of
column ``k``, ``e = 2k + 1`` the −π/2 shift, and ``e = 2S`` the unshifted
circuit used for the loss value.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..exceptions import InvalidInputError
from ..utils.logger import get_logger
from .ansatz import (
    AnsatzVariant,
    CircuitLayout,
    ParamSet,
    N_FEATURES,
    N_QUBITS,
    circuit_angles,
    circuit_layout,
    encoding_multipliers,
    flatten_params,
    param_count,
    unflatten_params,
)
from .simulator import make_rng, probabilities, run_batch, sample_counts

logger = get_logger("gradients")

SHIFT = np.pi / 2
LOG_CLIP = 1e-12
# Keeps the (rows x columns) angle matrix of one simulated chunk near 2M floats
_CHUNK_ENTRIES = 2_000_000


@dataclass(frozen=True)
class EvalMode:
    """ANALYTIC when ``shots`` is None, otherwise SHOTS(shots, seed)"""
    shots: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.shots is not None and (int(self.shots) != self.shots or self.shots < 1):
            raise InvalidInputError(f"shots must be a positive integer, got {self.shots!r}")

    @property
    def is_analytic(self) -> bool:
        return self.shots is None

    @classmethod
    def analytic(cls) -> "EvalMode":
        return cls()

    @classmethod
    def with_shots(cls, shots: int, seed: int = 0) -> "EvalMode":
        return cls(int(shots), int(seed))

    def describe(self) -> str:
        return "analytic" if self.is_analytic else f"shots({self.shots})"


ANALYTIC = EvalMode()


@dataclass
class GradientRecord:
    """Partial derivatives of a scalar with respect to decoder parameters and features"""
    d_rotations: np.ndarray
    d_weights: Optional[np.ndarray]
    d_features: np.ndarray


@dataclass
class LossGradient:
    """Batch loss, aggregated gradients and per-sample feature gradients"""
    loss: float
    gradients: GradientRecord
    sample_feature_grads: np.ndarray
    probabilities: np.ndarray


def _simulate(layout: CircuitLayout, angles: np.ndarray) -> np.ndarray:
    rows = max(1, _CHUNK_ENTRIES // max(1, angles.shape[1]))
    out = np.empty((angles.shape[0], 2 ** N_QUBITS))
    for start in range(0, angles.shape[0], rows):
        states = run_batch(layout.template, angles[start:start + rows], N_QUBITS)
        out[start:start + rows] = probabilities(states)
    return out


def _sampled(probs: np.ndarray, mode: EvalMode, stream: Tuple[int, ...], sample: int,
             evals: Sequence[int]) -> np.ndarray:
    return np.stack([
        sample_counts(p, mode.shots, make_rng(mode.seed, *stream, sample, e))
        for p, e in zip(probs, evals)
    ])


def _forward(layout: CircuitLayout, base: np.ndarray, mode: EvalMode,
             stream: Tuple[int, ...]) -> np.ndarray:
    probs = _simulate(layout, base)
    if mode.is_analytic:
        return probs
    unshifted = 2 * layout.n_slots
    return np.stack([
        _sampled(probs[i:i + 1], mode, stream, i, [unshifted])[0] for i in range(base.shape[0])
    ])


def slot_derivatives(layout: CircuitLayout, base: np.ndarray, mode: EvalMode = ANALYTIC,
                     stream: Tuple[int, ...] = ()) -> np.ndarray:
    """
    dp_b / d(angle column k) for every sample, by the two-point shift rule

    Args:
        layout: Circuit layout shared by all samples
        base: Angle rows, shape ``(B, S)``
        mode: ANALYTIC or SHOTS
        stream: Substream prefix used in SHOTS mode

    Returns:
        Array ``(B, S, 16)``
    """
    batch, n_slots = base.shape
    out = np.zeros((batch, n_slots, 2 ** N_QUBITS))
    if n_slots == 0:
        return out
    # Row 2k is column k shifted up, row 2k+1 shifted down
    shifts = np.zeros((2 * n_slots, n_slots))
    cols = np.arange(n_slots)
    shifts[2 * cols, cols] = SHIFT
    shifts[2 * cols + 1, cols] = -SHIFT

    per_sample = 2 * n_slots * n_slots
    group = max(1, _CHUNK_ENTRIES // per_sample)
    for start in range(0, batch, group):
        chunk = base[start:start + group]
        angles = (chunk[:, np.newaxis, :] + shifts[np.newaxis, :, :]).reshape(-1, n_slots)
        probs = _simulate(layout, angles).reshape(chunk.shape[0], 2 * n_slots, -1)
        if not mode.is_analytic:
            probs = np.stack([
                _sampled(probs[j], mode, stream, start + j, range(2 * n_slots))
                for j in range(chunk.shape[0])
            ])
        out[start:start + chunk.shape[0]] = 0.5 * (probs[:, 0::2, :] - probs[:, 1::2, :])
    return out


def _chain(layout: CircuitLayout, params: ParamSet, xs: np.ndarray,
           slot_grads: np.ndarray) -> Tuple[np.ndarray, Optional[np.ndarray], np.ndarray]:
    """
    Map derivatives with respect to angle columns onto parameters

    ``slot_grads`` has shape ``(B, S, ...)``; the trailing axes are carried
    through. Returns per-sample rotation, weight and feature derivatives.
    """
    batch = slot_grads.shape[0]
    tail = slot_grads.shape[2:]
    d_rot = slot_grads[:, layout.rotation_slots.reshape(-1)]
    d_rot = d_rot.reshape((batch,) + layout.rotation_slots.shape + tail)

    enc = slot_grads[:, layout.enc_slots]
    multipliers = encoding_multipliers(layout, params)
    expand = (slice(None), slice(None)) + (np.newaxis,) * len(tail)

    d_feat = np.zeros((batch, N_FEATURES) + tail)
    for e in range(layout.enc_slots.shape[0]):
        d_feat[:, layout.enc_feature[e]] += multipliers[e] * enc[:, e]

    d_w = None
    if params.encoding_weights is not None:
        d_w = np.zeros((batch,) + params.encoding_weights.shape + tail)
        feature_values = xs[:, layout.enc_feature][expand]
        contrib = feature_values * enc
        for e in range(layout.enc_slots.shape[0]):
            d_w[:, layout.enc_layer[e], layout.enc_qubit[e]] += contrib[:, e]
    return d_rot, d_w, d_feat


def evaluate_probabilities(variant: AnsatzVariant, params: ParamSet, xs,
                           mode: EvalMode = ANALYTIC, stream: Tuple[int, ...] = ()) -> np.ndarray:
    """Decoder output distributions for a batch of features, shape ``(B, 16)``"""
    variant = AnsatzVariant.parse(variant)
    base = circuit_angles(variant, params, xs)
    return _forward(circuit_layout(variant, params.layers), base, mode, stream)


def prob_jacobian(variant: AnsatzVariant, params: ParamSet, x, mode: EvalMode = ANALYTIC,
                  stream: Tuple[int, ...] = ()) -> np.ndarray:
    """
    Jacobian of the 16 basis probabilities

    Columns are ordered as rotations (C order), encoding weights (weighted
    variant only), then the two features.

    Returns:
        Array of shape ``(16, P + 2)``
    """
    variant = AnsatzVariant.parse(variant)
    x = np.asarray(x, dtype=float).reshape(1, -1)
    layout = circuit_layout(variant, params.layers)
    base = circuit_angles(variant, params, x)
    grads = slot_derivatives(layout, base, mode, stream)
    d_rot, d_w, d_feat = _chain(layout, params, x, grads)

    dim = 2 ** N_QUBITS
    blocks = [d_rot[0].reshape(-1, dim)]
    if d_w is not None:
        blocks.append(d_w[0].reshape(-1, dim))
    blocks.append(d_feat[0].reshape(-1, dim))
    jac = np.concatenate(blocks, axis=0).T
    expected = param_count(variant, params.layers) + N_FEATURES
    if jac.shape != (dim, expected):
        raise InvalidInputError(f"Jacobian shape {jac.shape} does not match {(dim, expected)}")
    return jac


def _check_batch(messages, xs) -> Tuple[np.ndarray, np.ndarray]:
    messages = np.asarray(messages, dtype=int).reshape(-1)
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    if messages.size == 0:
        raise InvalidInputError("Batch must not be empty")
    if xs.shape != (messages.size, N_FEATURES):
        raise InvalidInputError(f"Features must have shape ({messages.size}, {N_FEATURES}), got {xs.shape}")
    if messages.min() < 0 or messages.max() >= 2 ** N_QUBITS:
        raise InvalidInputError(f"Messages must lie in [0, {2 ** N_QUBITS}), got {messages}")
    return messages, xs


def loss_gradient(messages, xs, variant: AnsatzVariant, params: ParamSet,
                  mode: EvalMode = ANALYTIC, stream: Tuple[int, ...] = ()) -> LossGradient:
    """
    Sparse categorical cross-entropy of the decoder and its gradient

    loss = −(1/B) Σ_i log max(p_{s_i}(x_i), 1e-12). Per-sample feature gradients
    are derivatives of this batch loss with respect to each sample's features
    (the 1/B factor is included), ready to be backpropagated into the encoder.

    Args:
        messages: Transmitted messages, shape ``(B,)``
        xs: Received signals, shape ``(B, 2)``
        variant: Ansatz variant
        params: Decoder parameters
        mode: ANALYTIC or SHOTS
        stream: Substream prefix for SHOTS mode (e.g. the training step)

    Returns:
        LossGradient with the aggregated GradientRecord
    """
    variant = AnsatzVariant.parse(variant)
    messages, xs = _check_batch(messages, xs)
    batch = messages.size
    layout = circuit_layout(variant, params.layers)
    base = circuit_angles(variant, params, xs)

    probs = _forward(layout, base, mode, stream)
    rows = np.arange(batch)
    picked = probs[rows, messages]
    clipped = int(np.count_nonzero(picked < LOG_CLIP))
    if clipped and not mode.is_analytic:
        logger.warning(f"{clipped} of {batch} target probabilities fell below {LOG_CLIP:g} with "
                       f"{mode.shots} shots and were clipped")
    picked = np.maximum(picked, LOG_CLIP)
    loss = float(-np.sum(np.log(picked)) / batch)

    slot_grads = slot_derivatives(layout, base, mode, stream)
    # dloss/dangle = -(1/B) (1/p_s) dp_s/dangle
    coeff = -1.0 / (batch * picked)
    loss_slots = coeff[:, np.newaxis] * slot_grads[rows, :, messages]
    d_rot, d_w, d_feat = _chain(layout, params, xs, loss_slots)

    record = GradientRecord(
        d_rotations=np.sum(d_rot, axis=0),
        d_weights=None if d_w is None else np.sum(d_w, axis=0),
        d_features=np.sum(d_feat, axis=0),
    )
    return LossGradient(loss=loss, gradients=record, sample_feature_grads=d_feat, probabilities=probs)


def finite_difference_check(variant: AnsatzVariant, params: ParamSet, x,
                            epsilon: float = 1e-6) -> float:
    """
    Largest absolute gap between parameter-shift and central-difference derivatives

    Covers every rotation angle, encoding weight and both features. ANALYTIC mode only.
    """
    variant = AnsatzVariant.parse(variant)
    x = np.asarray(x, dtype=float)
    analytic = prob_jacobian(variant, params, x, ANALYTIC)

    flat = flatten_params(params)
    point = np.concatenate([flat, x])
    n_params = flat.size

    def probs_at(vector: np.ndarray) -> np.ndarray:
        p = unflatten_params(vector[:n_params], params)
        return evaluate_probabilities(variant, p, vector[n_params:][np.newaxis, :])[0]

    numeric = np.zeros_like(analytic)
    for k in range(point.size):
        step = np.zeros_like(point)
        step[k] = epsilon
        numeric[:, k] = (probs_at(point + step) - probs_at(point - step)) / (2 * epsilon)
    if analytic.size == 0:
        return 0.0
    return float(np.max(np.abs(analytic - numeric)))
