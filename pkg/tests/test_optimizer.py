"""
Tests for the Adam optimizer.
"""

import unittest

import numpy as np

from hybrid_autoencoder.comm.optimizer import AdamState, adam_step
from hybrid_autoencoder.exceptions import InvalidInputError


class TestAdam(unittest.TestCase):
    """Test cases for Adam updates"""

    def setUp(self):
        """Set up test fixtures"""
        self.params = {"a": np.array([1.0, -2.0]), "b": np.ones((2, 2))}
        self.state = AdamState.zeros(self.params, learning_rate=0.1)

    def test_zero_gradient(self):
        """Test that a zero gradient leaves parameters unchanged"""
        grads = {k: np.zeros_like(v) for k, v in self.params.items()}
        new_params, new_state = adam_step(self.state, grads, self.params)
        for name in self.params:
            np.testing.assert_array_equal(new_params[name], self.params[name])
        self.assertEqual(new_state.step, 1)

    def test_first_step_size(self):
        """Test that the first bias-corrected step has size close to the learning rate"""
        grads = {"a": np.array([0.5, -3.0]), "b": np.full((2, 2), 1e-3)}
        new_params, _ = adam_step(self.state, grads, self.params)
        np.testing.assert_allclose(new_params["a"] - self.params["a"], [-0.1, 0.1], rtol=1e-6)
        np.testing.assert_allclose(new_params["b"] - self.params["b"], -0.1, rtol=1e-4)

    def test_inputs_untouched(self):
        """Test that the update returns new arrays and state"""
        grads = {k: np.ones_like(v) for k, v in self.params.items()}
        before = {k: v.copy() for k, v in self.params.items()}
        adam_step(self.state, grads, self.params)
        for name in self.params:
            np.testing.assert_array_equal(self.params[name], before[name])
            np.testing.assert_array_equal(self.state.m[name], 0.0)
        self.assertEqual(self.state.step, 0)

    def test_deterministic(self):
        """Test that repeated runs give identical parameters"""
        def run():
            params, state = self.params, self.state
            for t in range(20):
                grads = {k: np.sin(v + t) for k, v in params.items()}
                params, state = adam_step(state, grads, params)
            return params

        a, b = run(), run()
        for name in a:
            np.testing.assert_array_equal(a[name], b[name])

    def test_mismatch(self):
        """Test that mismatched names and shapes are rejected"""
        with self.assertRaises(InvalidInputError):
            adam_step(self.state, {"a": np.zeros(2)}, self.params)
        with self.assertRaises(InvalidInputError):
            adam_step(self.state, {"a": np.zeros(3), "b": np.zeros((2, 2))}, self.params)
        with self.assertRaises(InvalidInputError):
            AdamState(learning_rate=0.0)

    def test_state_dictionary(self):
        """Test saving and restoring optimizer state"""
        grads = {k: np.ones_like(v) for k, v in self.params.items()}
        _, state = adam_step(self.state, grads, self.params)
        restored = AdamState.from_dict(state.to_dict())
        self.assertEqual(restored.step, 1)
        np.testing.assert_array_equal(restored.v["b"], state.v["b"])


if __name__ == "__main__":
    unittest.main()
