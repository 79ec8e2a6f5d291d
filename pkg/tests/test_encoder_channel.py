"""
Tests for the constellation encoder and the AWGN channel.
"""

import math
import unittest

import numpy as np

from hybrid_autoencoder.comm.channel import AWGNChannel, ChannelConfig, add_noise, channel_apply, snr_to_sigma
from hybrid_autoencoder.comm.encoder import (
    ConstellationTable,
    encode,
    encode_batch,
    qam16_table,
    random_table,
)
from hybrid_autoencoder.exceptions import InvalidInputError
from hybrid_autoencoder.quantum.simulator import make_rng


class TestConstellation(unittest.TestCase):
    """Test cases for the embedding table"""

    def setUp(self):
        """Set up test fixtures"""
        self.rng = make_rng(31, 0)
        self.table = random_table(self.rng)

    def test_unit_power(self):
        """Test that the normalized table has unit average power"""
        self.assertAlmostEqual(self.table.average_power, 1.0, places=12)
        self.assertAlmostEqual(qam16_table().average_power, 1.0, places=12)

    def test_qam_geometry(self):
        """Test 16-QAM minimum distance and labeling"""
        table = qam16_table()
        self.assertAlmostEqual(table.min_distance(), 2 / math.sqrt(10), places=12)
        np.testing.assert_allclose(encode(table, 0), np.array([-3.0, -3.0]) / math.sqrt(10))
        np.testing.assert_allclose(encode(table, 6), np.array([1.0, -1.0]) / math.sqrt(10))

    def test_scale_invariance(self):
        """Test that scaling the raw table leaves the constellation unchanged"""
        scaled = ConstellationTable(self.table.raw * 37.5)
        np.testing.assert_allclose(scaled.normalized, self.table.normalized, atol=1e-12)

    def test_encode(self):
        """Test single and batched encoding"""
        messages = np.array([0, 15, 3, 3])
        batch = encode_batch(self.table, messages)
        self.assertEqual(batch.shape, (4, 2))
        np.testing.assert_array_equal(batch[2], encode(self.table, 3))

        for bad in (16, -1, 2.0, True):
            with self.assertRaises(InvalidInputError):
                encode(self.table, bad)
        with self.assertRaises(InvalidInputError):
            encode_batch(self.table, [0, 16])

    def test_degenerate_tables(self):
        """Test that collapsed tables are rejected"""
        zeros = ConstellationTable(np.zeros((16, 2)))
        with self.assertRaises(InvalidInputError):
            zeros.normalized
        with self.assertRaises(InvalidInputError):
            zeros.validate()

        constant = ConstellationTable(np.ones((16, 2)))
        self.assertTrue(constant.is_degenerate())
        with self.assertRaises(InvalidInputError):
            constant.validate()

        with self.assertRaises(InvalidInputError):
            ConstellationTable(np.zeros((15, 2)))
        with self.assertRaises(InvalidInputError):
            ConstellationTable(np.full((16, 2), np.inf))

    def test_backprop(self):
        """Test the normalization gradient against central differences"""
        upstream = self.rng.normal(size=(16, 2))
        analytic = self.table.backprop(upstream)
        eps = 1e-6
        for idx in np.ndindex(16, 2):
            step = np.zeros((16, 2))
            step[idx] = eps
            plus = np.sum(upstream * ConstellationTable(self.table.raw + step).normalized)
            minus = np.sum(upstream * ConstellationTable(self.table.raw - step).normalized)
            self.assertAlmostEqual(analytic[idx], (plus - minus) / (2 * eps), delta=1e-7)

    def test_serialization(self):
        """Test the raw embedding dictionary form"""
        restored = ConstellationTable.from_dict(self.table.to_dict())
        np.testing.assert_array_equal(restored.raw, self.table.raw)


class TestChannel(unittest.TestCase):
    """Test cases for the AWGN channel"""

    def test_sigma(self):
        """Test the SNR to noise standard deviation conversion"""
        self.assertAlmostEqual(snr_to_sigma(15.0), 0.12574, places=5)
        self.assertAlmostEqual(snr_to_sigma(0.0), math.sqrt(0.5), places=12)
        self.assertEqual(snr_to_sigma(math.inf), 0.0)
        for bad in (math.nan, -math.inf):
            with self.assertRaises(InvalidInputError):
                snr_to_sigma(bad)

    def test_noise_variance(self):
        """Test the empirical noise variance per dimension"""
        sigma = snr_to_sigma(10.0)
        noise = add_noise(np.zeros((10 ** 6, 2)), sigma, make_rng(1, 2))
        variance = noise.var(axis=0)
        np.testing.assert_allclose(variance, sigma ** 2, rtol=0.01)
        self.assertLess(abs(noise.mean()), 5 * sigma / 1000)

    def test_noiseless(self):
        """Test that infinite SNR passes the signal through"""
        xs = np.array([[0.1, 0.2], [0.3, -0.4]])
        np.testing.assert_array_equal(add_noise(xs, snr_to_sigma(math.inf), make_rng(0)), xs)
        with self.assertRaises(InvalidInputError):
            add_noise(np.array([[np.nan, 0.0]]), 0.1, make_rng(0))

    def test_reproducible(self):
        """Test that noise depends only on the seed and draw key"""
        cfg = ChannelConfig(snr_db=5.0, seed=9)
        x = np.array([0.5, -0.5])
        np.testing.assert_array_equal(channel_apply(x, cfg, 3), channel_apply(x, cfg, 3))
        self.assertFalse(np.array_equal(channel_apply(x, cfg, 3), channel_apply(x, cfg, 4)))

        channel = AWGNChannel(5.0, seed=9)
        xs = np.zeros((4, 2))
        np.testing.assert_array_equal(channel.apply(xs, 10), channel.apply(xs, 10))
        self.assertFalse(np.array_equal(channel.apply(xs, 10), channel.apply(xs, 11)))

    def test_config_checks(self):
        """Test channel configuration validation"""
        with self.assertRaises(InvalidInputError):
            ChannelConfig(snr_db=math.inf)
        with self.assertRaises(InvalidInputError):
            channel_apply(np.zeros(3), ChannelConfig())


if __name__ == "__main__":
    unittest.main()
