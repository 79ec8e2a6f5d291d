"""
Tests for the decoder circuit builder.
"""

import unittest

import numpy as np

from hybrid_autoencoder.exceptions import InvalidInputError
from hybrid_autoencoder.quantum.ansatz import (
    AnsatzVariant,
    ParamSet,
    build_circuit,
    circuit_angles,
    circuit_layout,
    encoding_block,
    entangling_layer,
    flatten_params,
    init_params,
    param_count,
    unflatten_params,
)
from hybrid_autoencoder.quantum.gates import GateKind
from hybrid_autoencoder.quantum.simulator import angle_vector, apply_circuit, init_state, make_rng, probabilities


def count(circuit, kind):
    return sum(1 for g in circuit if g.kind == kind)


class TestAnsatzVariant(unittest.TestCase):
    """Test cases for variant parsing"""

    def test_parse(self):
        """Test parsing variant names"""
        self.assertIs(AnsatzVariant.parse("plain"), AnsatzVariant.PLAIN)
        self.assertIs(AnsatzVariant.parse("WEIGHTED_DOUBLE_DR"), AnsatzVariant.WEIGHTED_DOUBLE_DR)
        self.assertIs(AnsatzVariant.parse("double-dr"), AnsatzVariant.DOUBLE_DR)
        with self.assertRaises(InvalidInputError):
            AnsatzVariant.parse("triple_dr")


class TestAnsatz(unittest.TestCase):
    """Test cases for circuit construction"""

    def setUp(self):
        """Set up test fixtures"""
        self.rng = make_rng(2024, 0)
        self.x = np.array([0.3, -1.2])

    def test_param_count(self):
        """Test trainable parameter counts"""
        for variant in (AnsatzVariant.PLAIN, AnsatzVariant.SINGLE_DR, AnsatzVariant.DOUBLE_DR):
            self.assertEqual(param_count(variant, 5), 60)
        self.assertEqual(param_count(AnsatzVariant.WEIGHTED_DOUBLE_DR, 5), 80)

    def test_gate_counts(self):
        """Test the gate structure of every variant"""
        layers = 2
        expected_rx = {
            AnsatzVariant.PLAIN: 2,
            AnsatzVariant.SINGLE_DR: 4,
            AnsatzVariant.DOUBLE_DR: 8,
            AnsatzVariant.WEIGHTED_DOUBLE_DR: 8,
        }
        for variant, rx in expected_rx.items():
            circuit = build_circuit(variant, init_params(variant, layers, self.rng), self.x)
            self.assertEqual(count(circuit, GateKind.RX), rx, variant)
            self.assertEqual(count(circuit, GateKind.ROT), 4 * layers)
            self.assertEqual(count(circuit, GateKind.CNOT), 4 * layers)

    def test_layer_order(self):
        """Test that re-uploading variants interleave encoding blocks and layers"""
        params = init_params(AnsatzVariant.SINGLE_DR, 2, self.rng)
        kinds = [g.kind for g in build_circuit(AnsatzVariant.SINGLE_DR, params, self.x)]
        block = [GateKind.RX] * 2 + [GateKind.ROT] * 4 + [GateKind.CNOT] * 4
        self.assertEqual(kinds, block * 2)

        cnots = [g.targets for g in entangling_layer(np.zeros((4, 3))) if g.kind == GateKind.CNOT]
        self.assertEqual(cnots, [(0, 1), (1, 2), (2, 3), (3, 0)])

    def test_encoding_block(self):
        """Test encoding gate placement and weights"""
        plain = encoding_block(AnsatzVariant.PLAIN, self.x)
        self.assertEqual([(g.targets, g.angles) for g in plain], [((0,), (0.3,)), ((1,), (-1.2,))])

        double = encoding_block(AnsatzVariant.DOUBLE_DR, self.x)
        self.assertEqual([g.angles[0] for g in double], [0.3, -1.2, 0.3, -1.2])

        weighted = encoding_block(AnsatzVariant.WEIGHTED_DOUBLE_DR, self.x, [1.0, 2.0, 0.5, -1.0])
        np.testing.assert_allclose([g.angles[0] for g in weighted], [0.3, -2.4, 0.15, 1.2])

        with self.assertRaises(InvalidInputError):
            encoding_block(AnsatzVariant.WEIGHTED_DOUBLE_DR, self.x)
        with self.assertRaises(InvalidInputError):
            encoding_block(AnsatzVariant.DOUBLE_DR, self.x, np.ones(4))
        with self.assertRaises(InvalidInputError):
            encoding_block(AnsatzVariant.PLAIN, [1.0, 2.0, 3.0])
        with self.assertRaises(InvalidInputError):
            encoding_block(AnsatzVariant.PLAIN, [np.nan, 0.0])

    def test_identity_decoder(self):
        """Test that zero rotations and a zero signal leave |0000>"""
        for variant in AnsatzVariant:
            params = init_params(variant, 3, self.rng)
            params.rotations[:] = 0.0
            circuit = build_circuit(variant, params, np.zeros(2))
            p = probabilities(apply_circuit(init_state(4), circuit))
            self.assertAlmostEqual(p[0], 1.0, places=12)

    def test_unit_weights_match_double_dr(self):
        """Test that the weighted variant with weights 1 equals DOUBLE_DR"""
        params = init_params(AnsatzVariant.WEIGHTED_DOUBLE_DR, 3, self.rng)
        unweighted = ParamSet(params.rotations)
        a = build_circuit(AnsatzVariant.WEIGHTED_DOUBLE_DR, params, self.x)
        b = build_circuit(AnsatzVariant.DOUBLE_DR, unweighted, self.x)
        self.assertEqual(a, b)

    def test_circuit_angles(self):
        """Test that batched angle rows match the built circuits"""
        variant = AnsatzVariant.WEIGHTED_DOUBLE_DR
        params = init_params(variant, 2, self.rng)
        params.encoding_weights = self.rng.normal(size=(2, 4))
        xs = self.rng.normal(size=(3, 2))
        angles = circuit_angles(variant, params, xs)
        self.assertEqual(angles.shape, (3, circuit_layout(variant, 2).n_slots))
        for row, x in enumerate(xs):
            np.testing.assert_allclose(angles[row], angle_vector(build_circuit(variant, params, x)))

    def test_init_params(self):
        """Test parameter initialization"""
        params = init_params(AnsatzVariant.WEIGHTED_DOUBLE_DR, 4, self.rng)
        self.assertEqual(params.rotations.shape, (4, 4, 3))
        self.assertTrue(np.all((params.rotations >= 0) & (params.rotations < 2 * np.pi)))
        np.testing.assert_array_equal(params.encoding_weights, np.ones((4, 4)))
        self.assertIsNone(init_params(AnsatzVariant.PLAIN, 1, self.rng).encoding_weights)

        with self.assertRaises(InvalidInputError):
            init_params(AnsatzVariant.PLAIN, 0, self.rng)

    def test_param_set_checks(self):
        """Test shape and variant checks on parameters"""
        with self.assertRaises(InvalidInputError):
            ParamSet(np.zeros((2, 4, 2)))
        with self.assertRaises(InvalidInputError):
            ParamSet(np.zeros((2, 4, 3)), np.ones((3, 4)))
        with self.assertRaises(InvalidInputError):
            build_circuit(AnsatzVariant.PLAIN, ParamSet(np.zeros((1, 4, 3)), np.ones((1, 4))), self.x)

    def test_flat_vector(self):
        """Test the flattened parameter order"""
        params = init_params(AnsatzVariant.WEIGHTED_DOUBLE_DR, 2, self.rng)
        flat = flatten_params(params)
        self.assertEqual(flat.size, param_count(AnsatzVariant.WEIGHTED_DOUBLE_DR, 2))
        np.testing.assert_array_equal(flat[:24], params.rotations.reshape(-1))
        restored = unflatten_params(flat, params)
        np.testing.assert_array_equal(restored.encoding_weights, params.encoding_weights)


if __name__ == "__main__":
    unittest.main()
