"""
Tests for configuration module.
"""

import json
import os
import tempfile
import unittest

from hybrid_autoencoder.config import RunConfig, TrainConfig
from hybrid_autoencoder.exceptions import InvalidInputError
from hybrid_autoencoder.quantum.ansatz import AnsatzVariant


class TestConfig(unittest.TestCase):
    """Test cases for the RunConfig class"""

    def setUp(self):
        """Set up test fixtures"""
        # Create a temporary directory for config file
        self.temp_dir = tempfile.TemporaryDirectory()
        self.config_path = os.path.join(self.temp_dir.name, "config.json")

        # Set test environment variables
        os.environ["HYBRID_AE_OUTPUT_ROOT"] = os.path.join(self.temp_dir.name, "runs")

    def tearDown(self):
        """Tear down test fixtures"""
        # Remove environment variables
        for var in ["HYBRID_AE_OUTPUT_ROOT", "HYBRID_AE_DEVICE_FILE"]:
            if var in os.environ:
                del os.environ[var]

        # Clean up temporary directory
        self.temp_dir.cleanup()

    def write_config(self, data):
        with open(self.config_path, "w", encoding="utf-8") as f:
            json.dump(data, f)

    def test_defaults(self):
        """Test default values"""
        config = RunConfig.load()
        self.assertEqual(config.variant, "weighted_double_dr")
        self.assertEqual(config.layers, 8)
        self.assertEqual(config.batch_size, 64)
        self.assertEqual(config.learning_rate, 0.1)
        self.assertIsNone(config.shots)
        self.assertTrue(config.eval_mode().is_analytic)

    def test_init_from_env(self):
        """Test initialization from environment variables"""
        config = RunConfig.load()
        self.assertEqual(config.output_root, os.path.join(self.temp_dir.name, "runs"))

        os.environ["HYBRID_AE_DEVICE_FILE"] = "custom_device.json"
        self.assertEqual(RunConfig.load().devices, ["custom_device.json"])

    def test_precedence(self):
        """Test that flags override the file, which overrides defaults"""
        self.write_config({"layers": 12, "steps": 300, "output_root": "from_file"})
        config = RunConfig.load(self.config_path, {"layers": 16, "steps": None})
        self.assertEqual(config.layers, 16)
        self.assertEqual(config.steps, 300)
        self.assertEqual(config.output_root, "from_file")

    def test_save_and_load(self):
        """Test saving and loading configuration"""
        config = RunConfig.load(overrides={"variant": "plain", "seeds": [3, 4], "shots": 200})
        config.save(self.config_path)

        new_config = RunConfig.load(self.config_path)
        self.assertEqual(new_config.variant, "plain")
        self.assertEqual(new_config.seeds, [3, 4])
        self.assertEqual(new_config.eval_mode(9).shots, 200)
        self.assertEqual(new_config.config_hash(), config.config_hash())

    def test_validate(self):
        """Test configuration validation"""
        with self.assertRaises(InvalidInputError) as ctx:
            RunConfig.load(overrides={"variant": "triple_dr", "jobs": 0})
        self.assertIn("triple_dr", str(ctx.exception))
        self.assertIn("jobs", str(ctx.exception))

        with self.assertRaises(InvalidInputError):
            RunConfig.load(overrides={"steps": 0})
        with self.assertRaises(InvalidInputError):
            RunConfig.load(overrides={"snr_db": float("inf")})

    def test_unknown_keys(self):
        """Test that unknown keys are rejected"""
        self.write_config({"layers": 4, "github_token": "x"})
        with self.assertRaises(InvalidInputError) as ctx:
            RunConfig.load(self.config_path)
        self.assertIn("github_token", str(ctx.exception))

    def test_value_types(self):
        """Test that file values are converted to field types or rejected"""
        self.write_config({"layers": "8", "learning_rate": 1, "snr_grid": [0, 10], "shots": None})
        config = RunConfig.load(self.config_path)
        self.assertEqual(config.layers, 8)
        self.assertIsInstance(config.learning_rate, float)
        self.assertEqual(config.snr_grid, [0.0, 10.0])
        self.assertIsNone(config.shots)

        for bad in ({"layers": "eight"}, {"layers": 2.5}, {"seeds": 3}, {"record_timing": "yes"},
                    {"variant": 4}, {"steps": True}):
            self.write_config(bad)
            with self.assertRaises(InvalidInputError) as ctx:
                RunConfig.load(self.config_path)
            self.assertIn(next(iter(bad)), str(ctx.exception))

    def test_bad_file(self):
        """Test missing and malformed config files"""
        with self.assertRaises(InvalidInputError):
            RunConfig.load(os.path.join(self.temp_dir.name, "missing.json"))
        with open(self.config_path, "w", encoding="utf-8") as f:
            f.write("not json")
        with self.assertRaises(InvalidInputError):
            RunConfig.load(self.config_path)

    def test_provenance_excludes_runtime(self):
        """Test that execution settings do not change the config hash"""
        a = RunConfig.load(overrides={"jobs": 1, "output_dir": "a"})
        b = RunConfig.load(overrides={"jobs": 4, "output_dir": "b", "progress": False})
        self.assertEqual(a.config_hash(), b.config_hash())
        self.assertNotIn("output_dir", a.to_dict())
        self.assertIn("output_dir", a.to_dict(include_runtime=True))

        c = RunConfig.load(overrides={"layers": 9})
        self.assertNotEqual(a.config_hash(), c.config_hash())

    def test_views(self):
        """Test the per-command configuration views"""
        config = RunConfig.load(overrides={"variant": "single_dr", "layer_set": [4, 8], "record_timing": True})
        train = config.train_config(layers=3)
        self.assertIsInstance(train, TrainConfig)
        self.assertIs(train.variant, AnsatzVariant.SINGLE_DR)
        self.assertEqual(train.layers, 3)
        self.assertTrue(train.record_wall_time)
        self.assertEqual(config.transpile_config().layer_set, [4, 8])
        self.assertEqual(config.sweep_config().n_symbols, 10000)


if __name__ == "__main__":
    unittest.main()
