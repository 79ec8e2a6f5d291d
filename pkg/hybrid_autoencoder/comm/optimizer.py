"""
Adam over a dictionary of named parameter arrays.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

import numpy as np

from ..exceptions import InvalidInputError

Params = Dict[str, np.ndarray]


@dataclass
class AdamState:
    """First/second moments per parameter, step counter and hyper-parameters"""
    learning_rate: float = 0.1
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: Params = field(default_factory=dict)
    v: Params = field(default_factory=dict)

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise InvalidInputError(f"learning_rate must be positive, got {self.learning_rate}")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise InvalidInputError(f"betas must lie in [0, 1), got ({self.beta1}, {self.beta2})")
        if set(self.m) != set(self.v):
            raise InvalidInputError("First and second moments must cover the same parameters")

    @classmethod
    def zeros(cls, params: Params, learning_rate: float = 0.1, **kwargs) -> "AdamState":
        """Fresh state whose moments mirror ``params``"""
        return cls(
            learning_rate=learning_rate,
            m={k: np.zeros_like(np.asarray(p, dtype=float)) for k, p in params.items()},
            v={k: np.zeros_like(np.asarray(p, dtype=float)) for k, p in params.items()},
            **kwargs,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "learning_rate": self.learning_rate,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "eps": self.eps,
            "step": self.step,
            "m": {k: v.tolist() for k, v in self.m.items()},
            "v": {k: v.tolist() for k, v in self.v.items()},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AdamState":
        return cls(
            learning_rate=float(data["learning_rate"]),
            beta1=float(data["beta1"]),
            beta2=float(data["beta2"]),
            eps=float(data["eps"]),
            step=int(data["step"]),
            m={k: np.array(v, dtype=float) for k, v in data["m"].items()},
            v={k: np.array(v, dtype=float) for k, v in data["v"].items()},
        )


def _check_shapes(state: AdamState, grads: Params, params: Params) -> None:
    if set(grads) != set(params) or set(params) != set(state.m):
        raise InvalidInputError(
            f"Parameter names differ: params {sorted(params)}, grads {sorted(grads)}, "
            f"state {sorted(state.m)}"
        )
    for name, p in params.items():
        shape = np.shape(p)
        if np.shape(grads[name]) != shape or state.m[name].shape != shape or state.v[name].shape != shape:
            raise InvalidInputError(
                f"Shape mismatch for {name}: param {shape}, grad {np.shape(grads[name])}, "
                f"moment {state.m[name].shape}"
            )


def adam_step(state: AdamState, grads: Params, params: Params) -> Tuple[Params, AdamState]:
    """
    One bias-corrected Adam update

    Parameters are processed in sorted name order, so repeated runs are bitwise
    identical.

    Returns:
        (updated parameters, updated state); inputs are not modified
    """
    _check_shapes(state, grads, params)
    t = state.step + 1
    b1, b2 = state.beta1, state.beta2
    new_params, new_m, new_v = {}, {}, {}
    for name in sorted(params):
        g = np.asarray(grads[name], dtype=float)
        m = b1 * state.m[name] + (1.0 - b1) * g
        v = b2 * state.v[name] + (1.0 - b2) * g * g
        m_hat = m / (1.0 - b1 ** t)
        v_hat = v / (1.0 - b2 ** t)
        new_params[name] = np.asarray(params[name], dtype=float) - state.learning_rate * m_hat / (np.sqrt(v_hat) + state.eps)
        new_m[name], new_v[name] = m, v
    new_state = AdamState(state.learning_rate, b1, b2, state.eps, t, new_m, new_v)
    return new_params, new_state
