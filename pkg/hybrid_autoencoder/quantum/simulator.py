"""
Dense statevector simulation of parameterized circuits.

States are complex128 arrays of length ``2**n``; every function also accepts a
batch of states with shape ``(N, 2**n)``. Qubit ``i`` is bit ``i`` of the basis
index. A gate on qubit ``q`` is applied by viewing the state as
``(N, 2**(n-q-1), 2, 2**q)`` and contracting the middle axis, which avoids
building any ``2**n x 2**n`` matrix.
"""

from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np

from ..exceptions import InvalidInputError
from .gates import GateKind, GateOp, single_qubit_matrix, ANGLE_ARITY

MAX_QUBITS = 12


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """
    Counter-based generator for one named substream of a master seed

    The substream is identified by ``stream`` (a tuple of non-negative ints), so the
    same (seed, stream) pair yields the same draws on every platform.
    """
    seq = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in stream))
    return np.random.Generator(np.random.Philox(seq))


def init_state(n_qubits: int) -> np.ndarray:
    """Return |0…0> on ``n_qubits`` qubits"""
    if not isinstance(n_qubits, (int, np.integer)) or not 1 <= n_qubits <= MAX_QUBITS:
        raise InvalidInputError(f"n_qubits must be an integer in [1, {MAX_QUBITS}], got {n_qubits!r}")
    state = np.zeros(2 ** int(n_qubits), dtype=complex)
    state[0] = 1.0
    return state


def num_qubits(state: np.ndarray) -> int:
    """Number of qubits of a (batched) state, validating the dimension"""
    dim = np.shape(state)[-1]
    n = int(dim).bit_length() - 1
    if dim < 2 or 2 ** n != dim or n > MAX_QUBITS:
        raise InvalidInputError(f"State length {dim} is not 2**n for 1 <= n <= {MAX_QUBITS}")
    return n


def _apply_single(psi: np.ndarray, mats: np.ndarray, qubit: int, n: int) -> np.ndarray:
    batch = psi.shape[0]
    view = psi.reshape(batch, 2 ** (n - qubit - 1), 2, 2 ** qubit)
    if mats.ndim == 2:
        out = np.einsum('ij,najb->naib', mats, view)
    else:
        out = np.einsum('nij,najb->naib', mats, view)
    return out.reshape(batch, -1)


@lru_cache(maxsize=None)
def _permutation(kind: GateKind, targets: Tuple[int, ...], n: int) -> np.ndarray:
    idx = np.arange(2 ** n)
    if kind == GateKind.CNOT:
        control, target = targets
        return np.where((idx >> control) & 1, idx ^ (1 << target), idx)
    a, b = targets
    differ = ((idx >> a) & 1) != ((idx >> b) & 1)
    return np.where(differ, idx ^ ((1 << a) | (1 << b)), idx)


def _as_batch(state: np.ndarray) -> Tuple[np.ndarray, bool]:
    psi = np.asarray(state, dtype=complex)
    if psi.ndim == 1:
        return psi[np.newaxis, :], True
    if psi.ndim == 2:
        return psi, False
    raise InvalidInputError(f"State must be 1-D or a 2-D batch, got shape {psi.shape}")


def _apply(psi: np.ndarray, gate: GateOp, angles: np.ndarray, n: int) -> np.ndarray:
    if gate.is_two_qubit:
        return psi[:, _permutation(gate.kind, gate.targets, n)]
    mats = single_qubit_matrix(gate.kind, angles)
    return _apply_single(psi, mats, gate.targets[0], n)


def apply_gate(state: np.ndarray, gate: GateOp) -> np.ndarray:
    """
    Apply one gate to a state (or batch of states)

    Args:
        state: Amplitudes, shape ``(2**n,)`` or ``(N, 2**n)``
        gate: Gate whose targets lie in ``[0, n)``

    Returns:
        New array with the gate's unitary applied
    """
    psi, single = _as_batch(state)
    n = num_qubits(psi)
    gate.check_targets(n)
    out = _apply(psi, gate, np.array(gate.angles, dtype=float), n)
    return out[0] if single else out


def apply_circuit(state: np.ndarray, circuit: Sequence[GateOp]) -> np.ndarray:
    """Apply gates left to right; equivalent to folding :func:`apply_gate`"""
    psi, single = _as_batch(state)
    n = num_qubits(psi)
    for gate in circuit:
        gate.check_targets(n)
    for gate in circuit:
        psi = _apply(psi, gate, np.array(gate.angles, dtype=float), n)
    return psi[0] if single else psi


def angle_offsets(circuit: Sequence[GateOp]) -> np.ndarray:
    """Start column of each gate's angles in a flattened angle vector"""
    sizes = np.array([ANGLE_ARITY[g.kind] for g in circuit], dtype=int)
    return np.concatenate([[0], np.cumsum(sizes)])[:-1] if len(circuit) else np.zeros(0, dtype=int)


def angle_vector(circuit: Sequence[GateOp]) -> np.ndarray:
    """All gate angles of a circuit concatenated in gate order"""
    return np.array([a for g in circuit for a in g.angles], dtype=float)


def run_batch(circuit: Sequence[GateOp], angles: np.ndarray, n_qubits: int) -> np.ndarray:
    """
    Simulate one circuit structure for many angle assignments at once

    Args:
        circuit: Gate list; only kinds and targets are used
        angles: Array ``(N, S)`` where row ``r`` holds the concatenated angles of
            every gate for evaluation ``r`` (see :func:`angle_vector`)
        n_qubits: Register size

    Returns:
        Final states, shape ``(N, 2**n_qubits)``, each started from |0…0>
    """
    angles = np.atleast_2d(np.asarray(angles, dtype=float))
    offsets = angle_offsets(circuit)
    width = int(sum(ANGLE_ARITY[g.kind] for g in circuit))
    if angles.shape[1] != width:
        raise InvalidInputError(f"Expected {width} angle columns, got {angles.shape[1]}")
    psi = np.repeat(init_state(n_qubits)[np.newaxis, :], angles.shape[0], axis=0)
    for gate, off in zip(circuit, offsets):
        gate.check_targets(n_qubits)
        cols = angles[:, off:off + ANGLE_ARITY[gate.kind]]
        psi = _apply(psi, gate, cols, n_qubits)
    return psi


def probabilities(state: np.ndarray) -> np.ndarray:
    """Computational-basis probabilities p_b = |a_b|^2"""
    return np.abs(np.asarray(state)) ** 2


def sample_counts(p: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    """
    Empirical distribution of ``shots`` i.i.d. basis outcomes drawn from ``p``

    Sampling inverts the cumulative distribution, so results depend only on the
    generator's uniform stream.
    """
    if not isinstance(shots, (int, np.integer)) or shots < 1:
        raise InvalidInputError(f"shots must be a positive integer, got {shots!r}")
    p = np.asarray(p, dtype=float)
    cdf = np.cumsum(p)
    cdf /= cdf[-1]
    draws = np.searchsorted(cdf, rng.random(int(shots)), side='right')
    draws = np.minimum(draws, p.size - 1)
    return np.bincount(draws, minlength=p.size) / float(shots)


def equivalent_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    """True if two normalized states differ only by a global phase"""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    return bool(abs(abs(np.vdot(a, b)) - 1.0) < tol)
