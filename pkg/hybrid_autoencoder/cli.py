#!/usr/bin/env python3
import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from . import __version__
from .exceptions import HybridAutoencoderError
from .main import ExperimentApp
from .quantum.ansatz import AnsatzVariant
from .utils.logger import logger, setup_logger

VARIANTS = [v.value for v in AnsatzVariant]


def print_banner():
    """Print the application banner"""
    banner = f"""
    ╭───────────────────────────────────────╮
    │                                       │
    │       HYBRID QUANTUM AUTOENCODER      │
    │                 v{__version__:<21}│
    │                                       │
    ╰───────────────────────────────────────╯
    """
    print(banner)


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Flag values that replace config-file entries"""
    keys = [
        "variant", "layers", "steps", "batch_size", "learning_rate", "snr_db", "shots",
        "seeds", "ser_every", "eval_symbols", "snr_grid", "n_symbols", "layer_set",
        "devices", "inference_shots", "variants", "learning_rates", "epsilon",
        "checkpoint", "baseline_checkpoint", "resume", "output_dir", "jobs",
    ]
    values = {k: getattr(args, k, None) for k in keys}
    if getattr(args, "record_timing", False):
        values["record_timing"] = True
    if getattr(args, "reference_qam", False):
        values["reference_qam"] = True
    if getattr(args, "exclude_measure", False):
        values["include_measure"] = False
    if getattr(args, "exclude_reset", False):
        values["include_reset"] = False
    if args.quiet:
        values["progress"] = False
    return values


def _add_training_flags(parser: argparse.ArgumentParser, variant: bool = True):
    if variant:
        parser.add_argument("--variant", choices=VARIANTS, help="Ansatz variant")
        parser.add_argument("--layers", type=int, help="Number of entangling layers L")
    parser.add_argument("--steps", type=int, help="Training steps")
    parser.add_argument("--batch-size", type=int, help="Messages per batch")
    parser.add_argument("--learning-rate", type=float, help="Adam learning rate")
    parser.add_argument("--snr-db", type=float, help="Training SNR in dB")
    parser.add_argument("--ser-every", type=int, help="Steps between SER evaluations")
    parser.add_argument("--eval-symbols", type=int, help="Symbols per training-time SER evaluation")
    parser.add_argument("--record-timing", action="store_true", help="Fill the wall_ms metrics column")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybrid-ae",
        description="Hybrid quantum-classical autoencoder experiments",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="Path to a JSON config file")
    parser.add_argument("--output-dir", help="Write artifacts here instead of <output root>/<command>")
    parser.add_argument("--log-file", help="Also log to this file")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    parser.add_argument("--quiet", action="store_true", help="Hide progress bars")

    # Flags of the subcommands that train or sample
    seed_flags = argparse.ArgumentParser(add_help=False)
    seed_flags.add_argument("--seeds", type=int, nargs="+", help="Master seeds")
    run_flags = argparse.ArgumentParser(add_help=False, parents=[seed_flags])
    run_flags.add_argument("--shots", type=int, help="Measure with this many shots instead of exact probabilities")
    run_flags.add_argument("--jobs", type=int, help="Parallel training processes")

    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    train_parser = subparsers.add_parser("train", parents=[run_flags], help="Train the quantum autoencoder")
    _add_training_flags(train_parser)
    train_parser.add_argument("--resume", help="Checkpoint to continue from")

    baseline_parser = subparsers.add_parser("train-baseline", parents=[run_flags],
                                            help="Train the classical autoencoder")
    _add_training_flags(baseline_parser, variant=False)
    baseline_parser.add_argument("--resume", help="Checkpoint to continue from")

    sweep_parser = subparsers.add_parser("sweep-snr", parents=[seed_flags],
                                         help="SER of a trained model over an SNR grid")
    sweep_parser.add_argument("--checkpoint", help="Trained quantum (or classical) checkpoint")
    sweep_parser.add_argument("--baseline-checkpoint", help="Classical checkpoint for a comparison column")
    sweep_parser.add_argument("--snr-grid", type=float, nargs="+", help="SNR values in dB")
    sweep_parser.add_argument("--n-symbols", type=int, help="Symbols per grid point")
    sweep_parser.add_argument("--reference-qam", action="store_true", help="Add a 16-QAM reference column")

    constellation_parser = subparsers.add_parser("constellation", help="Export a learned constellation")
    constellation_parser.add_argument("--checkpoint", help="Trained checkpoint")

    report_parser = subparsers.add_parser("transpile-report", help="Depth and execution time per device")
    report_parser.add_argument("--variant", choices=VARIANTS, help="Ansatz variant")
    report_parser.add_argument("--layer-set", type=int, nargs="+", help="Layer counts")
    report_parser.add_argument("--devices", nargs="+", help="Built-in device names or device JSON files")
    report_parser.add_argument("--inference-shots", type=int, help="Shots per inference for latency_ms")
    report_parser.add_argument("--exclude-measure", action="store_true", help="Leave out measurement time")
    report_parser.add_argument("--exclude-reset", action="store_true", help="Leave out reset time")

    compare_parser = subparsers.add_parser("compare-ansatz", parents=[run_flags],
                                           help="Learning curves of every ansatz variant")
    _add_training_flags(compare_parser)
    compare_parser.add_argument("--variants", choices=VARIANTS, nargs="+", help="Variants to compare")

    lr_parser = subparsers.add_parser("lr-sweep", parents=[run_flags], help="Learning curves over learning rates")
    _add_training_flags(lr_parser)
    lr_parser.add_argument("--learning-rates", type=float, nargs="+", help="Learning rates to try")

    layer_parser = subparsers.add_parser("layer-sweep", parents=[run_flags],
                                         help="Learning curves over layer counts with the baseline")
    _add_training_flags(layer_parser)
    layer_parser.add_argument("--layer-set", type=int, nargs="+", help="Layer counts")

    grad_parser = subparsers.add_parser("grad-check", parents=[seed_flags],
                                        help="Compare gradients with finite differences")
    grad_parser.add_argument("--variant", choices=VARIANTS, help="Ansatz variant")
    grad_parser.add_argument("--layers", type=int, help="Number of entangling layers L")
    grad_parser.add_argument("--epsilon", type=float, help="Finite-difference step")

    return parser


COMMANDS = {
    "train": ExperimentApp.train,
    "train-baseline": ExperimentApp.train_baseline,
    "sweep-snr": ExperimentApp.sweep_snr,
    "constellation": ExperimentApp.constellation,
    "transpile-report": ExperimentApp.transpile_report,
    "compare-ansatz": ExperimentApp.compare_ansatz,
    "lr-sweep": ExperimentApp.lr_sweep,
    "layer-sweep": ExperimentApp.layer_sweep,
    "grad-check": ExperimentApp.grad_check,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI"""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return 1

    setup_logger(args.log_file, logging.DEBUG if args.verbose else logging.INFO)
    if not args.quiet:
        print_banner()

    try:
        app = ExperimentApp(config_path=args.config, overrides=_overrides(args))
        result = COMMANDS[args.command](app)
    except (HybridAutoencoderError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return 1

    logger.info(f"{args.command} completed: {result}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
