from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from .comm.channel import Stream
from .comm.checkpoint import load_checkpoint, load_model, save_checkpoint
from .comm.evaluation import curve_summary, export_constellation, sweep_snr
from .comm.trainer import (
    BaselineModel,
    QuantumModel,
    TrainResult,
    baseline_train,
    embedding_gradient_check,
    train,
)
from .config import RunConfig, TrainConfig
from .exceptions import CheckpointError, InvalidInputError
from .quantum.ansatz import AnsatzVariant
from .quantum.gradients import finite_difference_check
from .quantum.simulator import make_rng
from .transpile.device import resolve_device
from .transpile.estimator import fit_r2, report
from .utils.helpers import sanitize_filename, write_csv, write_json
from .utils.logger import logger

QUANTUM = "quantum"
BASELINE = "baseline"


def _run_job(kind: str, cfg: TrainConfig, seed: int, resume: Optional[TrainResult] = None) -> TrainResult:
    """Top-level so it can be shipped to worker processes"""
    if kind == BASELINE:
        return baseline_train(cfg, seed, resume)
    return train(cfg, seed, resume)


class ExperimentApp:
    """Runs experiments and writes their artifacts"""

    def __init__(self, config: Optional[RunConfig] = None, config_path: Optional[str] = None,
                 overrides: Optional[Dict[str, Any]] = None):
        """
        Initialize the application

        Args:
            config: Resolved configuration (takes precedence)
            config_path: JSON config file, used when ``config`` is None
            overrides: Command-line values applied on top of the file
        """
        self.config = config if config is not None else RunConfig.load(config_path, overrides)
        self.config.validate()

    def _output_dir(self, command: str) -> Path:
        if self.config.output_dir:
            path = Path(self.config.output_dir)
        else:
            path = Path(self.config.output_root) / command
        path.mkdir(parents=True, exist_ok=True)
        self.config.save(path / "config.json")
        return path

    def _provenance(self) -> Dict[str, Any]:
        return self.config.to_dict()

    def _train_many(self, jobs: Sequence[Tuple[str, TrainConfig, int]]) -> List[TrainResult]:
        """Run independent training jobs, in worker processes when ``jobs > 1``"""
        if self.config.jobs > 1 and len(jobs) > 1:
            logger.info(f"Dispatching {len(jobs)} training runs to {self.config.jobs} workers")
            quiet = [(kind, _quiet(cfg), seed) for kind, cfg, seed in jobs]
            with ProcessPoolExecutor(max_workers=self.config.jobs) as pool:
                futures = [pool.submit(_run_job, kind, cfg, seed) for kind, cfg, seed in quiet]
                return [f.result() for f in futures]
        return [_run_job(kind, cfg, seed) for kind, cfg, seed in jobs]

    def _write_metrics(self, result: TrainResult, path: Path) -> Path:
        write_csv(result.history.to_frame(), path, self._provenance(), result.seed)
        logger.info(f"Metrics written to {path}")
        return path

    def _resume(self, kind: str, seed: int) -> Optional[TrainResult]:
        if not self.config.resume:
            return None
        result, _ = load_checkpoint(self.config.resume)
        if result.seed != seed:
            raise InvalidInputError(f"Checkpoint {self.config.resume} was trained with seed {result.seed}, not {seed}")
        expected = BaselineModel if kind == BASELINE else QuantumModel
        if not isinstance(result.model, expected):
            raise CheckpointError(f"Checkpoint {self.config.resume} does not hold a {kind} model")
        return result

    def _train_and_save(self, kind: str, stem: str) -> Dict[str, Any]:
        cfg = self.config.train_config()
        out = self._output_dir("train" if kind == QUANTUM else "train-baseline")
        seeds = [int(s) for s in cfg.seeds]
        if self.config.resume:
            if len(seeds) != 1:
                raise InvalidInputError("Resuming requires exactly one seed")
            results = [_run_job(kind, cfg, seeds[0], self._resume(kind, seeds[0]))]
        else:
            results = self._train_many([(kind, cfg, seed) for seed in seeds])

        runs = []
        for result in results:
            name = sanitize_filename(f"{stem}_seed{result.seed}")
            checkpoint = save_checkpoint(result, out / f"{name}.json", self._provenance())
            metrics = self._write_metrics(result, out / f"{name}_metrics.csv")
            runs.append({
                "seed": result.seed,
                "checkpoint": str(checkpoint),
                "metrics": str(metrics),
                "final_ser": result.history.final_ser,
            })
        return {"output_dir": str(out), "runs": runs}

    def train(self) -> Dict[str, Any]:
        """Train the quantum autoencoder for every configured seed"""
        cfg = self.config.train_config()
        return self._train_and_save(QUANTUM, f"{cfg.variant.value}_L{cfg.layers}")

    def train_baseline(self) -> Dict[str, Any]:
        """Train the classical autoencoder for every configured seed"""
        return self._train_and_save(BASELINE, "baseline")

    def _require_checkpoint(self) -> str:
        if not self.config.checkpoint:
            raise CheckpointError("A checkpoint is required (--checkpoint)")
        return self.config.checkpoint

    def sweep_snr(self) -> Dict[str, Any]:
        """SER over the SNR grid for a trained model"""
        model = load_model(self._require_checkpoint())
        baseline = load_model(self.config.baseline_checkpoint) if self.config.baseline_checkpoint else None
        sweep = self.config.sweep_config()
        frame = sweep_snr(model, sweep.snr_grid, sweep.n_symbols, sweep.seed, baseline,
                          sweep.reference_qam, progress=self.config.progress)
        path = write_csv(frame, self._output_dir("sweep-snr") / "sweep_snr.csv", self._provenance(), sweep.seed)
        logger.info(f"SNR sweep written to {path}")
        return {"path": str(path), "rows": len(frame)}

    def constellation(self) -> Dict[str, Any]:
        """Normalized constellation of a trained model"""
        model = load_model(self._require_checkpoint())
        export = export_constellation(model.table)
        out = self._output_dir("constellation")
        path = write_csv(export.points, out / "constellation.csv", self._provenance())
        summary = {"min_distance": export.min_distance, "average_power": export.average_power}
        write_json(summary, out / "constellation_summary.json")
        logger.info(f"Constellation written to {path} (min distance {export.min_distance:.4f})")
        return {"path": str(path), **summary}

    def transpile_report(self) -> Dict[str, Any]:
        """Depth and per-shot time over the layer set for every device"""
        tcfg = self.config.transpile_config()
        devices = [resolve_device(name) for name in tcfg.devices]
        frame = report(tcfg.variant, tcfg.layer_set, devices, tcfg.shots,
                       tcfg.include_measure, tcfg.include_reset)
        path = write_csv(frame, self._output_dir("transpile-report") / "transpile_report.csv", self._provenance())
        fits = {}
        for name, rows in frame.groupby("device", sort=False):
            if len(rows) > 1:
                fits[name] = fit_r2(rows["layers"], rows["depth"])
                logger.info(f"{name}: depth-vs-L R^2 = {fits[name]:.4f}")
        return {"path": str(path), "rows": len(frame), "depth_r2": fits}

    def _curves(self, label_key: str, jobs: Sequence[Tuple[Any, str, TrainConfig, int]],
                out: Path) -> Tuple[Dict[Any, Path], pd.DataFrame]:
        """
        Train every (label, kind, cfg, seed) job, write one curve file per label
        and return the per-run summary
        """
        results = self._train_many([(kind, cfg, seed) for _, kind, cfg, seed in jobs])
        curves: Dict[Any, List[pd.DataFrame]] = {}
        summary = []
        for (label, _, _, seed), result in zip(jobs, results):
            frame = result.history.to_frame()
            initial, final = curve_summary(frame)
            frame.insert(0, "seed", seed)
            curves.setdefault(label, []).append(frame)
            summary.append({label_key: label, "seed": seed, "initial_ser": initial, "final_ser": final})
        paths = {}
        for label, frames in curves.items():
            path = out / f"{sanitize_filename(str(label))}.csv"
            write_csv(pd.concat(frames, ignore_index=True), path, self._provenance())
            paths[label] = path
        return paths, pd.DataFrame(summary)

    def compare_ansatz(self) -> Dict[str, Any]:
        """Learning curves of every ansatz variant with shared seeds"""
        out = self._output_dir("compare-ansatz")
        variants = [AnsatzVariant.parse(v) for v in self.config.variants]
        jobs = [
            (variant.value, QUANTUM, self.config.train_config(variant=variant), int(seed))
            for variant in variants for seed in self.config.seeds
        ]
        paths, summary = self._curves("variant", jobs, out)
        summary_path = write_csv(summary, out / "summary.csv", self._provenance())
        return {"curves": {k: str(v) for k, v in paths.items()}, "summary": str(summary_path)}

    def lr_sweep(self) -> Dict[str, Any]:
        """Learning curves for every configured learning rate"""
        out = self._output_dir("lr-sweep")
        jobs = [
            (f"lr_{lr:g}", QUANTUM, self.config.train_config(learning_rate=float(lr)), int(seed))
            for lr in self.config.learning_rates for seed in self.config.seeds
        ]
        paths, summary = self._curves("run", jobs, out)
        summary.insert(0, "learning_rate", [float(r.split("_", 1)[1]) for r in summary["run"]])
        summary = summary.drop(columns=["run"])
        summary_path = write_csv(summary, out / "summary.csv", self._provenance())
        return {"curves": {k: str(v) for k, v in paths.items()}, "summary": str(summary_path)}

    def layer_sweep(self) -> Dict[str, Any]:
        """Learning curves over the layer set plus the classical baseline"""
        out = self._output_dir("layer-sweep")
        seeds = [int(s) for s in self.config.seeds]
        jobs = [
            (f"L{layers}", QUANTUM, self.config.train_config(layers=int(layers)), seed)
            for layers in self.config.layer_set for seed in seeds
        ]
        jobs += [("baseline", BASELINE, self.config.train_config(), seed) for seed in seeds]
        paths, runs = self._curves("run", jobs, out)

        baseline_final = runs[runs["run"] == "baseline"].set_index("seed")["final_ser"]
        quantum = runs[runs["run"] != "baseline"].copy()
        quantum.insert(0, "layers", [int(r[1:]) for r in quantum["run"]])
        summary = pd.DataFrame({
            "layers": quantum["layers"].to_numpy(),
            "seed": quantum["seed"].to_numpy(),
            "final_ser": quantum["final_ser"].to_numpy(),
            "baseline_final_ser": baseline_final.reindex(quantum["seed"]).to_numpy(),
        })
        summary_path = write_csv(summary, out / "summary.csv", self._provenance())
        return {"curves": {k: str(v) for k, v in paths.items()}, "summary": str(summary_path)}

    def grad_check(self) -> Dict[str, Any]:
        """Parameter-shift and embedding gradients against finite differences"""
        cfg = self.config.train_config()
        rows = []
        for seed in self.config.seeds:
            rng = make_rng(int(seed), Stream.INIT)
            model = QuantumModel.initialize(cfg.variant, cfg.layers, rng)
            x = rng.normal(0.0, 1.0, 2)
            messages = rng.integers(0, 16, 8)
            noise = rng.normal(0.0, 0.1, (8, 2))
            rows.append({
                "variant": cfg.variant.value,
                "layers": cfg.layers,
                "seed": int(seed),
                "max_dev_quantum": finite_difference_check(cfg.variant, model.params, x, self.config.epsilon),
                "max_dev_embedding": embedding_gradient_check(model, messages, noise, self.config.epsilon),
            })
            logger.info(f"Gradient check seed {seed}: {rows[-1]['max_dev_quantum']:.2e} / "
                        f"{rows[-1]['max_dev_embedding']:.2e}")
        frame = pd.DataFrame(rows)
        path = write_csv(frame, self._output_dir("grad-check") / "grad_check.csv", self._provenance())
        return {"path": str(path), "max_deviation": float(frame[["max_dev_quantum", "max_dev_embedding"]].values.max())}


def _quiet(cfg: TrainConfig) -> TrainConfig:
    return replace(cfg, progress=False)


# Function to simplify imports for users
def create_app(config_path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> ExperimentApp:
    """
    Create and return an ExperimentApp instance

    Args:
        config_path: Path to configuration file (optional)
        overrides: Values replacing file entries (optional)

    Returns:
        ExperimentApp instance
    """
    return ExperimentApp(config_path=config_path, overrides=overrides)
