"""
Long-running end-to-end checks. Enable with HYBRID_AE_RUN_SLOW=1.
"""

import os
import unittest

import numpy as np

from hybrid_autoencoder.comm.evaluation import is_non_increasing, model_ser, sweep_snr
from hybrid_autoencoder.comm.trainer import QuantumModel, baseline_train, embedding_gradient_check, train
from hybrid_autoencoder.config import TrainConfig
from hybrid_autoencoder.quantum.ansatz import AnsatzVariant
from hybrid_autoencoder.quantum.gradients import finite_difference_check
from hybrid_autoencoder.quantum.simulator import make_rng

RUN_SLOW = os.getenv("HYBRID_AE_RUN_SLOW") == "1"
SEEDS = (0, 1, 2)
TEST_SYMBOLS = 10000


def training_config(**changes):
    values = dict(steps=1000, batch_size=64, learning_rate=0.1, snr_db=15.0, ser_every=100,
                  eval_symbols=2000, progress=False)
    values.update(changes)
    return TrainConfig(**values)


def median_ser(results):
    return float(np.median([model_ser(r.model, 15.0, TEST_SYMBOLS, seed=10_000 + r.seed) for r in results]))


@unittest.skipUnless(RUN_SLOW, "set HYBRID_AE_RUN_SLOW=1 to run")
class TestGradientGrid(unittest.TestCase):
    """Parameter-shift and embedding gradients over variants, depths and seeds"""

    def test_grid(self):
        """Test every variant at L in {1, 2, 8} over 20 seeds"""
        for variant in AnsatzVariant:
            for layers in (1, 2, 8):
                for seed in range(20):
                    rng = make_rng(seed, 0)
                    model = QuantumModel.initialize(variant, layers, rng)
                    x = rng.normal(0.0, 1.0, 2)
                    self.assertLess(finite_difference_check(variant, model.params, x), 1e-5)
                    if layers == 1:
                        messages = rng.integers(0, 16, 8)
                        noise = rng.normal(0.0, 0.1, (8, 2))
                        self.assertLess(embedding_gradient_check(model, messages, noise), 1e-4)


@unittest.skipUnless(RUN_SLOW, "set HYBRID_AE_RUN_SLOW=1 to run")
class TestTrainingOutcomes(unittest.TestCase):
    """Desk-scale training runs"""

    @classmethod
    def setUpClass(cls):
        cls.baseline = [baseline_train(training_config(), seed) for seed in SEEDS]
        cls.weighted = {
            layers: [train(training_config(variant=AnsatzVariant.WEIGHTED_DOUBLE_DR, layers=layers), seed)
                     for seed in SEEDS]
            for layers in (8, 16, 24)
        }

    def test_baseline_quality(self):
        """Test that the classical autoencoder reaches a low error rate"""
        self.assertLess(median_ser(self.baseline), 0.05)

    def test_comparable_to_baseline(self):
        """Test that sixteen weighted layers come within a factor 2 of the baseline"""
        self.assertLessEqual(median_ser(self.weighted[16]), 2 * median_ser(self.baseline))

    def test_layer_trend(self):
        """Test that more layers do not hurt"""
        rates = [median_ser(self.weighted[layers]) for layers in (8, 16, 24)]
        self.assertLessEqual(rates[2], rates[1])
        self.assertLessEqual(rates[1], rates[0])

    def test_loss_decreases(self):
        """Test that the last hundred steps have lower loss than the first hundred"""
        early, late = [], []
        for result in self.weighted[16]:
            frame = result.history.to_frame()
            early.append(frame.loc[frame["step"] < 100, "loss"].median())
            late.append(frame.loc[frame["step"] >= 900, "loss"].median())
        self.assertLess(np.median(late), np.median(early))

    def test_high_snr(self):
        """Test that a converged model is nearly error free at 40 dB"""
        models = [r.model for layers in (16, 24) for r in self.weighted[layers]]
        best = min(models, key=lambda m: model_ser(m, 15.0, TEST_SYMBOLS, seed=20_000))
        self.assertLessEqual(model_ser(best, 40.0, TEST_SYMBOLS, seed=30_000), 1e-3)

    def test_constellation_spread(self):
        """Test that deeper decoders leave the points at least as far apart"""
        def distance(layers):
            return float(np.median([r.model.table.min_distance() for r in self.weighted[layers]]))

        self.assertGreaterEqual(distance(24), distance(8))

    def test_snr_generalization(self):
        """Test that SER falls with SNR for a model trained at 15 dB"""
        frame = sweep_snr(self.weighted[16][0].model, [0.0, 5.0, 10.0, 15.0, 20.0], TEST_SYMBOLS)
        self.assertTrue(is_non_increasing(frame["ser"], frame["ser_std"]))

    def test_ansatz_ordering(self):
        """Test the ordering of the four variants at eight layers"""
        rates, initial = {}, {}
        for variant in AnsatzVariant:
            if variant is AnsatzVariant.WEIGHTED_DOUBLE_DR:
                results = self.weighted[8]
            else:
                results = [train(training_config(variant=variant, layers=8), seed) for seed in SEEDS]
            rates[variant] = median_ser(results)
            initial[variant] = float(np.median([r.history.initial_ser for r in results]))

        self.assertGreater(rates[AnsatzVariant.PLAIN], rates[AnsatzVariant.SINGLE_DR])
        self.assertGreater(rates[AnsatzVariant.SINGLE_DR], rates[AnsatzVariant.DOUBLE_DR])
        self.assertGreaterEqual(rates[AnsatzVariant.DOUBLE_DR], rates[AnsatzVariant.WEIGHTED_DOUBLE_DR])
        plain_initial = initial[AnsatzVariant.PLAIN]
        self.assertLess(abs(rates[AnsatzVariant.PLAIN] - plain_initial), 0.2 * plain_initial)


if __name__ == "__main__":
    unittest.main()
