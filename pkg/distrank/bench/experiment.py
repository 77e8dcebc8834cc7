"""Repeated-trial sweeps over filter kind, p and T.

Each (sweep point, trial) runs once with T_max repetitions; the estimate for a
smaller T is the mean of the first T squared norms, which is what a run with
that T would output since probes come off the public coin in order.
"""

import asyncio
import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import aiofiles
import numpy as np
import structlog

from ..blackboard import Machine, build_machines
from ..config import DistRankSettings, ExperimentConfig, get_settings
from ..config.descriptors import ShardFiles
from ..datagen import read_shard_files, spiked_covariance_shards
from ..exceptions import InvalidParameterError
from ..polyfilter import CompositeFilter, FilterDocument, Thresholds
from ..protocols import FilterKind, RandomizedRankProtocol
from ..protocols.randomized import ProbeFilter
from ..spectra import eigvalsh, generalized_rank_from_spectrum
from .seeds import trial_seed

logger = structlog.get_logger()

TRIAL_COLUMNS = ["filter", "p", "T", "trial", "seed", "rhat", "sq_error", "mse_running", "bits"]
SUMMARY_COLUMNS = ["filter", "p", "T", "trials", "mse", "mean_rhat", "mean_bits"]


@dataclass(frozen=True)
class SweepPoint:
    index: int
    kind: str
    p: int
    degree: Optional[int] = None

    @property
    def label(self) -> str:
        return f"composite-p{self.p}" if self.kind == "composite" else f"baseline-d{self.degree}"


class ExperimentRunner:
    """Runs an ExperimentConfig and writes trials.csv, summary.csv, eigenvalues.csv and summary.json"""

    def __init__(self, cfg: ExperimentConfig, settings: Optional[DistRankSettings] = None):
        self.cfg = cfg
        self.settings = settings or get_settings()
        self.semaphore = asyncio.Semaphore(self.settings.max_concurrency)
        self.th = Thresholds(cfg.c1, cfg.c2)
        self.log = logger.bind(trials=cfg.trials, T_max=cfg.T_max)

    def sweep_points(self) -> List[SweepPoint]:
        points = [SweepPoint(i, "composite", p) for i, p in enumerate(self.cfg.p_values)]
        if self.cfg.include_baseline:
            points.append(SweepPoint(len(points), "baseline", 0, self.cfg.resolved_baseline_degree()))
        return points

    def build_instance(self) -> Tuple[List[Machine], int, np.ndarray]:
        """Machines, target rank and the spectrum of the shard sum"""
        instance = self.cfg.instance
        if isinstance(instance, ShardFiles):
            shards = read_shard_files(instance.paths)
            planted = None
        else:
            shards, planted = spiked_covariance_shards(instance)
        machines = build_machines(shards, validate=True, tol=self.settings.shard_psd_tolerance)
        total = sum(s.matrix.entries for s in shards)
        spectrum = eigvalsh(total)
        target = planted if planted is not None else generalized_rank_from_spectrum(spectrum, self.cfg.c1)
        return machines, target, spectrum

    def load_filter(self) -> Optional[CompositeFilter]:
        """The saved composite filter named by filter_path, checked against the sweep"""
        if self.cfg.filter_path is None:
            return None
        filt = FilterDocument.load(self.cfg.filter_path).to_filter()
        if (filt.thresholds.c1, filt.thresholds.c2) != (self.cfg.c1, self.cfg.c2):
            raise InvalidParameterError(
                f"filter thresholds ({filt.thresholds.c1}, {filt.thresholds.c2}) differ from the sweep's ({self.cfg.c1}, {self.cfg.c2})"
            )
        if any(p != filt.p for p in self.cfg.p_values):
            raise InvalidParameterError(f"filter has p={filt.p}, sweep asks for p in {self.cfg.p_values}")
        self.log.info("filter_loaded", path=str(self.cfg.filter_path), p=filt.p, q1_degree=filt.q1_degree)
        return filt

    async def _run_with_semaphore(self, coro):
        async with self.semaphore:
            return await coro

    async def run_trial(self, machines: Sequence[Machine], point: SweepPoint, filt: ProbeFilter, trial: int) -> Dict[str, Any]:
        seed = trial_seed(self.cfg.master_seed, point.index, trial)
        q = self.cfg.quantization
        protocol = RandomizedRankProtocol(machines, self.settings)
        kind = FilterKind.composite() if point.kind == "composite" else FilterKind.baseline(point.degree)
        report = await protocol.execute(
            self.th,
            point.p,
            self.cfg.T_max,
            seed,
            filter_kind=kind,
            quantize=q.mode,
            tau=q.tau,
            range_bound=q.range_bound,
            dynamic_range=q.dynamic_range,
            scheme=self.cfg.scheme,
            validate=False,
            filt=filt,
        )
        return {"point": point, "trial": trial, "seed": seed, "report": report}

    def trial_rows(self, results: List[Dict[str, Any]], target: int) -> List[Dict[str, Any]]:
        results = sorted(results, key=lambda r: (r["point"].index, r["trial"]))
        rows = []
        running: Dict[Tuple[int, int], List[float]] = {}
        for result in results:
            point, report = result["point"], result["report"]
            for T in sorted(self.cfg.T_values):
                rhat = report.rhat_for(T)
                sq_error = (rhat - target) ** 2
                errors = running.setdefault((point.index, T), [])
                errors.append(sq_error)
                rows.append({
                    "filter": point.kind,
                    "p": point.p if point.kind == "composite" else "",
                    "T": T,
                    "trial": result["trial"],
                    "seed": result["seed"],
                    "rhat": rhat,
                    "sq_error": sq_error,
                    "mse_running": float(np.mean(errors)),
                    "bits": report.bits_for(T),
                })
        return rows

    def summary_rows(self, rows: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
        groups: Dict[Tuple[str, Any, int], List[Dict[str, Any]]] = {}
        for row in rows:
            groups.setdefault((row["filter"], row["p"], row["T"]), []).append(row)
        summary = []
        for (kind, p, T), group in groups.items():
            summary.append({
                "filter": kind,
                "p": p,
                "T": T,
                "trials": len(group),
                "mse": float(np.mean([g["sq_error"] for g in group])),
                "mean_rhat": float(np.mean([g["rhat"] for g in group])),
                "mean_bits": float(np.mean([g["bits"] for g in group])),
            })
        return summary

    async def run(self) -> Dict[str, Any]:
        self.log.info("experiment_started", output_dir=str(self.cfg.output_dir))
        machines, target, spectrum = self.build_instance()
        certifier = RandomizedRankProtocol(machines, self.settings)
        certifier.certify()
        loaded = self.load_filter()

        tasks = []
        filters: Dict[str, Dict[str, Any]] = {}
        for point in self.sweep_points():
            kind = FilterKind.composite() if point.kind == "composite" else FilterKind.baseline(point.degree)
            if loaded is not None and point.kind == "composite":
                filt = loaded
            else:
                filt = certifier.build_filter(self.th, point.p, kind, q1_degree=self.cfg.q1_degree)
            filters[point.label] = _filter_summary(filt)
            for trial in range(self.cfg.trials):
                tasks.append(self._run_with_semaphore(self.run_trial(machines, point, filt, trial)))

        results = await asyncio.gather(*tasks)
        rows = self.trial_rows(list(results), target)
        summary = self.summary_rows(rows)

        out = Path(self.cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        await _write_text(out / "trials.csv", _to_csv(TRIAL_COLUMNS, rows))
        await _write_text(out / "summary.csv", _to_csv(SUMMARY_COLUMNS, summary))
        await _write_text(out / "eigenvalues.csv", _to_csv(
            ["index", "eigenvalue"], [{"index": i + 1, "eigenvalue": s} for i, s in enumerate(spectrum)]
        ))
        document = {
            "config": json.loads(self.cfg.model_dump_json()),
            "target_rank": int(target),
            "n": machines[0].n,
            "m": len(machines),
            "filters": filters,
            "summary": summary,
        }
        await _write_text(out / "summary.json", json.dumps(document, indent=2) + "\n")
        self.log.info("experiment_finished", rows=len(rows), target_rank=int(target))
        return document


async def run_experiment(cfg: ExperimentConfig, settings: Optional[DistRankSettings] = None) -> Dict[str, Any]:
    return await ExperimentRunner(cfg, settings).run()


def _filter_summary(filt: ProbeFilter) -> Dict[str, Any]:
    if hasattr(filt, "summary"):
        return filt.summary()
    return {"kind": "baseline", "degree": filt.degree, "achieved_sup_error": filt.achieved_sup_error}


def _to_csv(columns: List[str], rows: List[Dict[str, Any]]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: repr(float(v)) if isinstance(v, (float, np.floating)) else v for k, v in row.items()})
    return buf.getvalue()


async def _write_text(path: Path, text: str) -> None:
    async with aiofiles.open(path, "w") as f:
        await f.write(text)
