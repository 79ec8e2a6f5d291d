"""
Quantum decoder: statevector simulator, ansatz builder and parameter-shift gradients.
"""

from .gates import GateKind, GateOp, circuit_from_json, circuit_to_json, gate_matrix
from .simulator import (
    apply_circuit,
    apply_gate,
    equivalent_up_to_phase,
    init_state,
    make_rng,
    probabilities,
    run_batch,
    sample_counts,
)
from .ansatz import (
    AnsatzVariant,
    ParamSet,
    N_FEATURES,
    N_QUBITS,
    build_circuit,
    circuit_angles,
    circuit_layout,
    encoding_block,
    entangling_layer,
    init_params,
    param_count,
)
from .gradients import (
    ANALYTIC,
    EvalMode,
    GradientRecord,
    LossGradient,
    evaluate_probabilities,
    finite_difference_check,
    loss_gradient,
    prob_jacobian,
)

__all__ = [
    'GateKind',
    'GateOp',
    'circuit_from_json',
    'circuit_to_json',
    'gate_matrix',
    'apply_circuit',
    'apply_gate',
    'equivalent_up_to_phase',
    'init_state',
    'make_rng',
    'probabilities',
    'run_batch',
    'sample_counts',
    'AnsatzVariant',
    'ParamSet',
    'N_FEATURES',
    'N_QUBITS',
    'build_circuit',
    'circuit_angles',
    'circuit_layout',
    'encoding_block',
    'entangling_layer',
    'init_params',
    'param_count',
    'ANALYTIC',
    'EvalMode',
    'GradientRecord',
    'LossGradient',
    'evaluate_probabilities',
    'finite_difference_check',
    'loss_gradient',
    'prob_jacobian',
]
