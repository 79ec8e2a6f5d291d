"""
Tests for the command-line interface.
"""

import io
import json
import os
import tempfile
import unittest
from unittest.mock import patch

import pandas as pd

from hybrid_autoencoder.cli import build_parser, main
from hybrid_autoencoder.config import RunConfig
from hybrid_autoencoder.main import create_app
from hybrid_autoencoder.utils.helpers import read_csv

TINY_TRAIN = ["--variant", "plain", "--layers", "1", "--steps", "2", "--batch-size", "4",
              "--ser-every", "1", "--eval-symbols", "16"]


class TestCli(unittest.TestCase):
    """Test cases for the hybrid-ae entry point"""

    def setUp(self):
        """Set up test fixtures"""
        self.temp_dir = tempfile.TemporaryDirectory()
        self.root = self.temp_dir.name

    def tearDown(self):
        """Tear down test fixtures"""
        self.temp_dir.cleanup()

    def run_cli(self, *args):
        stderr = io.StringIO()
        with patch("sys.stderr", stderr), patch("sys.stdout", io.StringIO()):
            code = main(["--quiet", *args])
        return code, stderr.getvalue()

    def out(self, name):
        return os.path.join(self.root, name)

    def test_no_command(self):
        """Test that running without a command fails"""
        code, _ = self.run_cli()
        self.assertEqual(code, 1)

    def test_seed_lists(self):
        """Test that seed lists directly before other flags or at the end parse"""
        args = build_parser().parse_args(["train", "--seeds", "0", "1", "--layers", "2"])
        self.assertEqual(args.command, "train")
        self.assertEqual(args.seeds, [0, 1])
        self.assertEqual(args.layers, 2)

        args = build_parser().parse_args(["--quiet", "layer-sweep", "--layer-set", "1", "2", "--seeds", "4"])
        self.assertEqual(args.seeds, [4])
        self.assertEqual(args.layer_set, [1, 2])

    def test_train_several_seeds(self):
        """Test the documented multi-seed training form"""
        code, _ = self.run_cli("--output-dir", self.out("multi"), "train", "--seeds", "0", "1", *TINY_TRAIN)
        self.assertEqual(code, 0)
        for seed in (0, 1):
            self.assertTrue(os.path.exists(os.path.join(self.out("multi"), f"plain_L1_seed{seed}.json")))

        saved = os.path.join(self.out("multi"), "config.json")
        self.assertTrue(os.path.exists(saved))
        config = RunConfig.load(saved)
        self.assertEqual(config.seeds, [0, 1])
        self.assertEqual(config.steps, 2)

    def test_transpile_report(self):
        """Test the transpile report command"""
        code, _ = self.run_cli("--output-dir", self.out("report"), "transpile-report",
                               "--layer-set", "2", "4", "--devices", "linear", "t_shaped")
        self.assertEqual(code, 0)
        path = os.path.join(self.out("report"), "transpile_report.csv")
        with open(path, "r", encoding="utf-8") as f:
            self.assertTrue(f.readline().startswith("# hybrid-autoencoder"))
        frame = read_csv(path)
        self.assertEqual(len(frame), 4)
        self.assertEqual(set(frame["device"]), {"linear", "t_shaped"})

    def test_train_is_reproducible(self):
        """Test that two identical runs write identical metrics files"""
        for name in ("a", "b"):
            code, _ = self.run_cli("--output-dir", self.out(name), "train", "--seeds", "3", *TINY_TRAIN)
            self.assertEqual(code, 0)
        files = []
        for name in ("a", "b"):
            with open(os.path.join(self.out(name), "plain_L1_seed3_metrics.csv"), "rb") as f:
                files.append(f.read())
        self.assertEqual(files[0], files[1])

    def test_trained_model_commands(self):
        """Test sweep, constellation and resume on a trained checkpoint"""
        self.run_cli("--output-dir", self.out("train"), "train", "--seeds", "1", *TINY_TRAIN)
        checkpoint = os.path.join(self.out("train"), "plain_L1_seed1.json")
        self.assertTrue(os.path.exists(checkpoint))

        code, _ = self.run_cli("--output-dir", self.out("sweep"), "sweep-snr", "--checkpoint", checkpoint,
                               "--snr-grid", "0", "10", "--n-symbols", "50", "--reference-qam")
        self.assertEqual(code, 0)
        sweep = read_csv(os.path.join(self.out("sweep"), "sweep_snr.csv"))
        self.assertEqual(list(sweep["snr_db"]), [0.0, 10.0])
        self.assertIn("qam_ser", sweep.columns)

        code, _ = self.run_cli("--output-dir", self.out("const"), "constellation", "--checkpoint", checkpoint)
        self.assertEqual(code, 0)
        points = read_csv(os.path.join(self.out("const"), "constellation.csv"))
        self.assertEqual(len(points), 16)
        self.assertAlmostEqual(((points["i"] ** 2 + points["q"] ** 2).mean()), 1.0, places=9)

        resume_args = [a if a != "2" else "4" for a in TINY_TRAIN]
        code, _ = self.run_cli("--output-dir", self.out("resumed"), "train", "--seeds", "1",
                               *resume_args, "--resume", checkpoint)
        self.assertEqual(code, 0)
        self.run_cli("--output-dir", self.out("straight"), "train", "--seeds", "1", *resume_args)
        resumed = read_csv(os.path.join(self.out("resumed"), "plain_L1_seed1_metrics.csv"))
        straight = read_csv(os.path.join(self.out("straight"), "plain_L1_seed1_metrics.csv"))
        pd.testing.assert_frame_equal(resumed, straight)

    def test_baseline_and_comparison_column(self):
        """Test baseline training and its column in the SNR sweep"""
        tiny = TINY_TRAIN[4:]
        code, _ = self.run_cli("--output-dir", self.out("base"), "train-baseline", "--seeds", "0", *tiny)
        self.assertEqual(code, 0)
        baseline = os.path.join(self.out("base"), "baseline_seed0.json")
        self.run_cli("--output-dir", self.out("q"), "train", "--seeds", "0", *TINY_TRAIN)

        code, _ = self.run_cli("--output-dir", self.out("sweep"), "sweep-snr",
                               "--checkpoint", os.path.join(self.out("q"), "plain_L1_seed0.json"),
                               "--baseline-checkpoint", baseline, "--snr-grid", "5", "--n-symbols", "20")
        self.assertEqual(code, 0)
        sweep = read_csv(os.path.join(self.out("sweep"), "sweep_snr.csv"))
        self.assertIn("baseline_ser", sweep.columns)

        code, stderr = self.run_cli("--output-dir", self.out("wrong"), "train", "--seeds", "0",
                                    *TINY_TRAIN, "--resume", baseline)
        self.assertEqual(code, 1)
        self.assertIn("Error:", stderr)

    def test_compare_ansatz(self):
        """Test one curve file per variant and a summary"""
        code, _ = self.run_cli("--output-dir", self.out("cmp"), "compare-ansatz", "--seeds", "0", "1",
                               *TINY_TRAIN, "--variants", "plain", "single_dr")
        self.assertEqual(code, 0)
        for name in ("plain.csv", "single_dr.csv"):
            curve = read_csv(os.path.join(self.out("cmp"), name))
            self.assertEqual(sorted(set(curve["seed"])), [0, 1])
        summary = read_csv(os.path.join(self.out("cmp"), "summary.csv"))
        self.assertEqual(len(summary), 4)
        self.assertEqual(list(summary.columns), ["variant", "seed", "initial_ser", "final_ser"])

        curve = read_csv(os.path.join(self.out("cmp"), "plain.csv"))
        evaluated = curve[curve["seed"] == 1].dropna(subset=["ser"])
        row = summary[(summary["variant"] == "plain") & (summary["seed"] == 1)].iloc[0]
        self.assertAlmostEqual(row["initial_ser"], evaluated["ser"].iloc[0])
        self.assertAlmostEqual(row["final_ser"], evaluated["ser"].iloc[-1])

    def test_lr_sweep(self):
        """Test the learning-rate sweep summary"""
        code, _ = self.run_cli("--output-dir", self.out("lr"), "lr-sweep", "--seeds", "0",
                               *TINY_TRAIN, "--learning-rates", "0.1", "0.01")
        self.assertEqual(code, 0)
        self.assertTrue(os.path.exists(os.path.join(self.out("lr"), "lr_0.1.csv")))
        summary = read_csv(os.path.join(self.out("lr"), "summary.csv"))
        self.assertEqual(list(summary["learning_rate"]), [0.1, 0.01])

    def test_layer_sweep_in_parallel(self):
        """Test that worker processes give the same summary as a single process"""
        summaries = []
        for jobs in ("1", "2"):
            out = self.out(f"layers{jobs}")
            code, _ = self.run_cli("--output-dir", out, "layer-sweep", "--seeds", "0", "--jobs", jobs,
                                   *TINY_TRAIN, "--layer-set", "1", "2")
            self.assertEqual(code, 0)
            self.assertTrue(os.path.exists(os.path.join(out, "baseline.csv")))
            summaries.append(read_csv(os.path.join(out, "summary.csv")))
        self.assertEqual(list(summaries[0]["layers"]), [1, 2])
        self.assertFalse(summaries[0]["baseline_final_ser"].isna().any())
        pd.testing.assert_frame_equal(summaries[0], summaries[1])

    def test_create_app(self):
        """Test the library entry point"""
        app = create_app(overrides={"layer_set": [2], "devices": ["linear"], "output_dir": self.out("app")})
        result = app.transpile_report()
        self.assertEqual(result["rows"], 1)
        self.assertTrue(os.path.exists(result["path"]))

    def test_grad_check(self):
        """Test the gradient check command"""
        code, _ = self.run_cli("--output-dir", self.out("grad"), "grad-check", "--seeds", "0", "1",
                               "--variant", "weighted_double_dr", "--layers", "1")
        self.assertEqual(code, 0)
        frame = read_csv(os.path.join(self.out("grad"), "grad_check.csv"))
        self.assertEqual(len(frame), 2)
        self.assertTrue((frame["max_dev_quantum"] < 1e-5).all())
        self.assertTrue((frame["max_dev_embedding"] < 1e-4).all())

    def test_errors(self):
        """Test that failures return 1 with a message"""
        code, stderr = self.run_cli("--output-dir", self.out("x"), "sweep-snr",
                                    "--checkpoint", self.out("missing.json"))
        self.assertEqual(code, 1)
        self.assertIn("Error:", stderr)

        code, stderr = self.run_cli("--output-dir", self.out("x"), "train", "--seeds", "-1", *TINY_TRAIN)
        self.assertEqual(code, 1)
        self.assertIn("seeds", stderr)

    def test_badly_typed_config_file(self):
        """Test that a wrongly typed config value is reported, not raised"""
        path = self.out("config.json")
        with open(path, "w", encoding="utf-8") as f:
            json.dump({"layers": "eight"}, f)
        code, stderr = self.run_cli("--config", path, "--output-dir", self.out("typed"), "train")
        self.assertEqual(code, 1)
        self.assertIn("Error:", stderr)
        self.assertIn("layers", stderr)


if __name__ == "__main__":
    unittest.main()
