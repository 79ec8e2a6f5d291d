"""
Classical reference decoder: dense 2 -> 32 (ReLU) -> 16 (softmax).
"""

from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from ..exceptions import InvalidInputError

INPUT_DIM = 2
HIDDEN_DIM = 32
OUTPUT_DIM = 16
LOG_CLIP = 1e-12
PARAM_NAMES = ("W1", "b1", "W2", "b2")


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / np.sum(e, axis=-1, keepdims=True)


@dataclass
class ClassicalDecoder:
    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray

    def __post_init__(self):
        expected = {
            "W1": (INPUT_DIM, HIDDEN_DIM),
            "b1": (HIDDEN_DIM,),
            "W2": (HIDDEN_DIM, OUTPUT_DIM),
            "b2": (OUTPUT_DIM,),
        }
        for name, shape in expected.items():
            value = np.array(getattr(self, name), dtype=float)
            if value.shape != shape:
                raise InvalidInputError(f"{name} must have shape {shape}, got {value.shape}")
            setattr(self, name, value)

    @classmethod
    def initialize(cls, rng: np.random.Generator) -> "ClassicalDecoder":
        """He-normal weights, zero biases"""
        return cls(
            W1=rng.normal(0.0, np.sqrt(2.0 / INPUT_DIM), (INPUT_DIM, HIDDEN_DIM)),
            b1=np.zeros(HIDDEN_DIM),
            W2=rng.normal(0.0, np.sqrt(2.0 / HIDDEN_DIM), (HIDDEN_DIM, OUTPUT_DIM)),
            b2=np.zeros(OUTPUT_DIM),
        )

    def parameters(self) -> Dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAM_NAMES}

    @classmethod
    def from_parameters(cls, params: Dict[str, np.ndarray]) -> "ClassicalDecoder":
        return cls(**{name: params[name] for name in PARAM_NAMES})

    def forward(self, ys: np.ndarray) -> np.ndarray:
        """Output distributions, shape ``(B, 16)``"""
        ys = np.atleast_2d(np.asarray(ys, dtype=float))
        if ys.shape[1] != INPUT_DIM:
            raise InvalidInputError(f"Inputs must have shape (B, {INPUT_DIM}), got {ys.shape}")
        hidden = np.maximum(ys @ self.W1 + self.b1, 0.0)
        return softmax(hidden @ self.W2 + self.b2)

    def loss_gradient(self, messages, ys) -> Tuple[float, Dict[str, np.ndarray], np.ndarray, np.ndarray]:
        """
        Mean cross-entropy and its gradients

        Returns:
            (loss, parameter gradients, per-sample input gradients ``(B, 2)``, probabilities)
        """
        messages = np.asarray(messages, dtype=int).reshape(-1)
        ys = np.atleast_2d(np.asarray(ys, dtype=float))
        if messages.size == 0:
            raise InvalidInputError("Batch must not be empty")
        if ys.shape != (messages.size, INPUT_DIM):
            raise InvalidInputError(f"Inputs must have shape ({messages.size}, {INPUT_DIM}), got {ys.shape}")
        batch = messages.size
        rows = np.arange(batch)

        pre = ys @ self.W1 + self.b1
        hidden = np.maximum(pre, 0.0)
        probs = softmax(hidden @ self.W2 + self.b2)
        picked = probs[rows, messages]
        loss = float(-np.sum(np.log(np.maximum(picked, LOG_CLIP))) / batch)

        d_logits = probs.copy()
        d_logits[rows, messages] -= 1.0
        # Clipped samples contribute no gradient through the log
        d_logits[picked < LOG_CLIP] = 0.0
        d_logits /= batch

        d_hidden = d_logits @ self.W2.T
        d_pre = d_hidden * (pre > 0.0)
        grads = {
            "W2": hidden.T @ d_logits,
            "b2": np.sum(d_logits, axis=0),
            "W1": ys.T @ d_pre,
            "b1": np.sum(d_pre, axis=0),
        }
        d_inputs = d_pre @ self.W1.T
        return loss, grads, d_inputs, probs

    def gradient_check(self, messages, ys, epsilon: float = 1e-6) -> float:
        """Largest gap between backprop and central-difference gradients of the batch loss"""
        _, grads, d_inputs, _ = self.loss_gradient(messages, ys)
        params = self.parameters()
        worst = 0.0
        for name in PARAM_NAMES:
            flat = params[name].reshape(-1)
            for k in range(flat.size):
                plus = {n: p.copy() for n, p in params.items()}
                minus = {n: p.copy() for n, p in params.items()}
                plus[name].reshape(-1)[k] += epsilon
                minus[name].reshape(-1)[k] -= epsilon
                numeric = (ClassicalDecoder.from_parameters(plus).loss_gradient(messages, ys)[0]
                           - ClassicalDecoder.from_parameters(minus).loss_gradient(messages, ys)[0]) / (2 * epsilon)
                worst = max(worst, abs(numeric - grads[name].reshape(-1)[k]))
        ys = np.atleast_2d(np.asarray(ys, dtype=float))
        for idx in np.ndindex(ys.shape):
            step = np.zeros_like(ys)
            step[idx] = epsilon
            numeric = (self.loss_gradient(messages, ys + step)[0]
                       - self.loss_gradient(messages, ys - step)[0]) / (2 * epsilon)
            worst = max(worst, abs(numeric - d_inputs[idx]))
        return float(worst)

    def to_dict(self) -> Dict[str, Any]:
        return {name: value.tolist() for name, value in self.parameters().items()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ClassicalDecoder":
        return cls(**{name: np.array(data[name], dtype=float) for name in PARAM_NAMES})
