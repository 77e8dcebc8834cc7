#!/usr/bin/env python3
import asyncio
import functools
import json
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import click
import structlog
from pydantic import ValidationError

from ..blackboard import Blackboard, Machine, PsdShard, build_machines
from ..config import ExperimentConfig, RunDescriptor, get_settings, load_environment
from ..datagen import (
    SpikedCovConfig,
    planted_spectrum_shards,
    read_shard_files,
    read_shard_set,
    spiked_covariance_shards,
    step_spectrum,
    write_shard_set,
)
from ..exceptions import InvalidParameterError
from ..polyfilter import CompositeFilter, FilterDocument, Thresholds, build_composite_filter
from ..protocols import FilterKind, RandomizedRankProtocol, deterministic_rank_protocol, degree_for_p
from ..spectra import generalized_rank
from ..bench import ensemble_rank_check, poly_rows_to_csv, run_experiment, verify_poly
from ..bench.verify_poly import VERIFY_MAX_Q1_DEGREE
from ..utils.logging import setup_logging

logger = structlog.get_logger()


def _fail(payload: Dict[str, Any]) -> None:
    payload["status"] = "failed"
    click.echo(json.dumps(payload, indent=2, default=str))
    sys.exit(1)


def guarded(fn: Callable) -> Callable:
    """Turn validation and protocol failures into a JSON error record and exit code 1"""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValidationError as e:
            logger.error("input_validation_failed", errors=e.errors())
            _fail({"error": "Input validation failed", "details": e.errors(include_url=False)})
        except Exception as e:
            logger.exception("command_failed", command=fn.__name__, error=str(e))
            _fail({"error": str(e), "kind": type(e).__name__})

    return wrapper


def _merge(config_path: Optional[str], flags: Dict[str, Any]) -> Dict[str, Any]:
    """Config file values overridden by every flag that was actually given"""
    data: Dict[str, Any] = {}
    if config_path:
        data = json.loads(Path(config_path).read_text())
    quantization = dict(data.get("quantization", {}))
    for key in ("quantize", "tau", "range_bound"):
        value = flags.pop(key, None)
        if value is not None:
            quantization["mode" if key == "quantize" else key] = value
    if flags.pop("dynamic_range", False):
        quantization["dynamic_range"] = True
    if quantization:
        data["quantization"] = quantization
    shards = flags.pop("shards", ())
    if shards:
        data["shards"] = list(shards)
    data.update({k: v for k, v in flags.items() if v is not None})
    return data


def load_shards(desc: RunDescriptor) -> Tuple[List[PsdShard], Optional[int]]:
    """Shards from disk when given, otherwise a generated instance; also its planted rank"""
    if len(desc.shards) == 1 and desc.shards[0].is_dir():
        shards, manifest = read_shard_set(desc.shards[0])
        return shards, manifest.planted_rank if manifest.planted_rank >= 0 else None
    if desc.shards:
        return read_shard_files(desc.shards), None
    if desc.instance == "spiked":
        cfg = SpikedCovConfig(
            n=desc.n, m=desc.m, samples_per_machine=desc.samples_per_machine,
            r=desc.r, lam=desc.lam, sigma2=desc.sigma2, seed=desc.seed,
        )
        return spiked_covariance_shards(cfg)
    spectrum = step_spectrum(desc.n, desc.r, desc.signal, desc.floor)
    return planted_spectrum_shards(desc.n, desc.m, spectrum, desc.seed, desc.split), desc.r


def _machines(shards: List[PsdShard]) -> List[Machine]:
    return build_machines(shards, validate=True, tol=get_settings().shard_psd_tolerance)


def _emit(document: Dict[str, Any], out: Optional[str]) -> None:
    text = json.dumps(document, indent=2, default=str)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text + "\n")
    click.echo(text)


def _oracle(shards: List[PsdShard], th: Thresholds) -> Dict[str, int]:
    total = sum(s.matrix.entries for s in shards)
    return {"rank_c1": generalized_rank(total, th.c1), "rank_c2": generalized_rank(total, th.c2)}


def run_options(fn):
    """Flags shared by estimate, det and baseline; each mirrors a RunDescriptor field"""
    options = [
        click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="JSON run descriptor"),
        click.option("--shards", multiple=True, type=click.Path(exists=True), help="Shard files or one shard-set directory"),
        click.option("--instance", type=click.Choice(["spiked", "planted"]), help="Generated instance when no shards"),
        click.option("--n", type=int),
        click.option("--m", type=int),
        click.option("--r", type=int),
        click.option("--c1", type=float),
        click.option("--c2", type=float),
        click.option("--seed", type=int),
        click.option("--quantize", type=click.Choice(["exact", "fixed"])),
        click.option("--tau", type=float),
        click.option("--range-bound", type=float, help="Declared fixed-point range R"),
        click.option("--dynamic-range", is_flag=True, help="Per-message range instead of a declared one"),
        click.option("--out", type=click.Path(dir_okay=False), help="Also write the report here"),
        click.option("--oracle", is_flag=True, help="Add exact generalized ranks to the report"),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


@click.group()
@click.option("--log-level", default=None, help="structlog level (default from DISTRANK_LOG_LEVEL)")
@click.option("--json-logs", is_flag=True, help="One JSON object per log line on stderr")
def cli(log_level, json_logs):
    """distrank - generalized rank of a matrix sharded across simulated machines"""
    load_environment()
    setup_logging(log_level or get_settings().log_level, json_logs=json_logs)


@cli.command()
@click.option("--kind", type=click.Choice(["spiked", "planted"]), default="planted", show_default=True)
@click.option("--n", type=int, default=200, show_default=True)
@click.option("--m", type=int, default=2, show_default=True)
@click.option("--r", type=int, default=20, show_default=True)
@click.option("--samples", type=int, default=1000, show_default=True, help="Samples per machine (spiked)")
@click.option("--lam", type=float, default=0.4, show_default=True)
@click.option("--sigma2", type=float, default=0.1, show_default=True)
@click.option("--signal", type=float, default=0.6, show_default=True, help="Planted top eigenvalue")
@click.option("--floor", type=float, default=0.0, show_default=True, help="Planted remaining eigenvalue")
@click.option("--split", type=click.Choice(["even", "random"]), default="even", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), required=True)
@guarded
def gen(kind, n, m, r, samples, lam, sigma2, signal, floor, split, seed, out):
    """Write a shard set: one GRNK file per machine plus manifest.json"""
    if kind == "spiked":
        cfg = SpikedCovConfig(n=n, m=m, samples_per_machine=samples, r=r, lam=lam, sigma2=sigma2, seed=seed)
        shards, planted = spiked_covariance_shards(cfg)
        config = cfg.model_dump()
    else:
        shards = planted_spectrum_shards(n, m, step_spectrum(n, r, signal, floor), seed, split)
        planted = r
        config = {"n": n, "m": m, "r": r, "signal": signal, "floor": floor, "split": split}
    manifest = write_shard_set(out, shards, kind, seed, config, planted)
    logger.info("shard_set_written", out=out, n=n, m=m)
    click.echo(manifest.model_dump_json(indent=2))


def _descriptor(config_path: Optional[str], flags: Dict[str, Any], protocol: str) -> RunDescriptor:
    """Validated descriptor for one subcommand; a config naming another protocol is rejected"""
    data = _merge(config_path, flags)
    data.setdefault("protocol", protocol)
    desc = RunDescriptor.model_validate(data)
    if desc.protocol != protocol:
        raise InvalidParameterError(f"descriptor is for protocol '{desc.protocol}', this command runs '{protocol}'")
    return desc


def _randomized(
    desc: RunDescriptor,
    filter_kind: FilterKind,
    trace: bool,
    ledger_csv: Optional[str],
    oracle: bool,
    out: Optional[str],
    filter_in: Optional[str] = None,
    filter_out: Optional[str] = None,
):
    shards, planted = load_shards(desc)
    machines = _machines(shards)
    n = machines[0].n
    protocol = RandomizedRankProtocol(machines)

    if filter_in:
        filt = FilterDocument.load(filter_in).to_filter()
        th, p = filt.thresholds, filt.p
        logger.info("filter_loaded", path=filter_in, p=p, q1_degree=filt.q1_degree)
    else:
        th = Thresholds(desc.c1, desc.c2)
        p = desc.p if desc.p is not None else degree_for_p(n)
        if filter_kind.kind == "baseline" and not filter_kind.degree:
            filter_kind = FilterKind.baseline(4 * (2 * degree_for_p(n) + 1))
        filt = protocol.build_filter(th, p, filter_kind, desc.q1_degree)
    if filter_out:
        if not isinstance(filt, CompositeFilter):
            raise InvalidParameterError("only composite filters can be written as filter documents")
        filt.to_document().save(filter_out)

    oracle_ranks = _oracle(shards, th) if oracle else None
    q = desc.quantization
    report = asyncio.run(protocol.execute(
        th, p, desc.T, desc.seed,
        filter_kind=filter_kind,
        quantize=q.mode,
        tau=q.tau,
        range_bound=q.range_bound,
        dynamic_range=q.dynamic_range,
        scheme=desc.scheme,
        oracle_rank=oracle_ranks["rank_c1"] if oracle_ranks else planted,
        trace=trace,
        filt=filt,
    ))
    document = json.loads(report.model_dump_json())
    if oracle_ranks:
        document["oracle"] = oracle_ranks
    if trace:
        document["trace"] = protocol.board.trace().splitlines()
    if ledger_csv:
        protocol.board.ledger.export_csv(ledger_csv)
    _emit(document, out)


@cli.command()
@run_options
@click.option("--p", type=int, help="Booster parameter (default ceil(log2(2n)))")
@click.option("--T", "T", type=int, help="Repetitions")
@click.option("--q1-degree", type=int)
@click.option("--scheme", type=click.Choice(["horner", "powers"]))
@click.option("--filter", "filter_in", type=click.Path(exists=True, dir_okay=False), help="Reuse a saved filter document")
@click.option("--filter-out", type=click.Path(dir_okay=False), help="Save the filter used as JSON")
@click.option("--trace", is_flag=True, help="Include one line per posted message")
@click.option("--ledger-csv", type=click.Path(dir_okay=False))
@guarded
def estimate(config_path, filter_in, filter_out, trace, ledger_csv, oracle, out, **flags):
    """One run of the randomized estimator with the composite filter"""
    desc = _descriptor(config_path, flags, "randomized")
    _randomized(desc, FilterKind.composite(), trace, ledger_csv, oracle, out, filter_in, filter_out)


@cli.command()
@run_options
@click.option("--degree", type=int, help="Degree of the high-pass Chebyshev filter (default 4 (2 ceil(log2(2n)) + 1))")
@click.option("--T", "T", type=int, help="Repetitions")
@click.option("--trace", is_flag=True)
@click.option("--ledger-csv", type=click.Path(dir_okay=False))
@guarded
def baseline(config_path, trace, ledger_csv, oracle, out, **flags):
    """One run of the randomized estimator with the plain high-pass Chebyshev filter"""
    desc = _descriptor(config_path, flags, "baseline")
    _randomized(desc, FilterKind.baseline(desc.degree), trace, ledger_csv, oracle, out)


@cli.command()
@run_options
@guarded
def det(config_path, oracle, out, **flags):
    """Deterministic protocol: quantized low-rank factors posted by machines 2..m"""
    desc = _descriptor(config_path, flags, "deterministic")
    shards, _ = load_shards(desc)
    machines = _machines(shards)
    th = Thresholds(desc.c1, desc.c2)
    report = asyncio.run(deterministic_rank_protocol(machines, Blackboard(len(machines)), th, desc.r))
    document = json.loads(report.model_dump_json())
    if oracle:
        document["oracle"] = _oracle(shards, th)
    _emit(document, out)


@cli.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="JSON experiment config")
@click.option("--n", type=int)
@click.option("--m", type=int)
@click.option("--r", type=int)
@click.option("--samples", type=int, help="Samples per machine")
@click.option("--c1", type=float)
@click.option("--c2", type=float)
@click.option("--p", "p_values", type=int, multiple=True, help="Booster parameters to sweep")
@click.option("--T", "T_max", type=int, help="Sweep T = 1..T")
@click.option("--trials", type=int)
@click.option("--seed", type=int, help="Master seed")
@click.option("--quantize", type=click.Choice(["exact", "fixed"]))
@click.option("--tau", type=float)
@click.option("--filter", "filter_in", type=click.Path(exists=True, dir_okay=False), help="Composite filter document to sweep")
@click.option("--no-baseline", is_flag=True)
@click.option("--out", type=click.Path(file_okay=False))
@guarded
def experiment(config_path, n, m, r, samples, c1, c2, p_values, T_max, trials, seed, quantize, tau, filter_in, no_baseline, out):
    """Repeated-trial MSE sweep over p, T and the baseline filter"""
    data: Dict[str, Any] = json.loads(Path(config_path).read_text()) if config_path else {}
    instance = dict(data.get("instance", {}))
    if "paths" not in instance:
        instance.setdefault("n", 1000)
        instance.setdefault("m", 2)
        instance.setdefault("samples_per_machine", 1000)
        instance.setdefault("r", 100)
        for key, value in (("n", n), ("m", m), ("r", r), ("samples_per_machine", samples), ("seed", seed)):
            if value is not None:
                instance[key] = value
    data["instance"] = instance
    if filter_in:
        document = FilterDocument.load(filter_in)
        data.update({"filter_path": filter_in, "c1": document.c1, "c2": document.c2,
                     "q1_degree": document.q1_degree, "p_values": [document.p]})
    overrides = {"c1": c1, "c2": c2, "trials": trials, "master_seed": seed, "output_dir": out}
    data.update({k: v for k, v in overrides.items() if v is not None})
    if p_values:
        data["p_values"] = list(p_values)
    if T_max is not None:
        data["T_values"] = list(range(1, T_max + 1))
    if no_baseline:
        data["include_baseline"] = False
    if quantize or tau:
        quantization = dict(data.get("quantization", {}))
        if quantize:
            quantization["mode"] = quantize
        if tau:
            quantization["tau"] = tau
        data["quantization"] = quantization

    cfg = ExperimentConfig.model_validate(data)
    document = asyncio.run(run_experiment(cfg))
    click.echo(json.dumps({"status": "ok", "output_dir": str(cfg.output_dir), "target_rank": document["target_rank"]}))


@cli.command("verify-poly")
@click.option("--c1", type=float, default=0.2, show_default=True)
@click.option("--c2", type=float, default=0.1, show_default=True)
@click.option("--p", "p_max", type=int, default=10, show_default=True, help="Largest booster parameter")
@click.option("--q1-degree", type=int, help="Fixed q1 degree (default: smallest reaching 0.1)")
@click.option("--out", type=click.Path(dir_okay=False), help="CSV path (default stdout)")
@click.option("--filter-out", type=click.Path(dir_okay=False), help="Save the composite filter at the largest p as JSON")
@guarded
def verify_poly_cmd(c1, c2, p_max, q1_degree, out, filter_out):
    """Sup-error curves of the composite filter and a Chebyshev fit of equal degree"""
    th = Thresholds(c1, c2)
    rows = verify_poly(th, p_max, q1_degree=q1_degree)
    text = poly_rows_to_csv(rows)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    if filter_out:
        filt = build_composite_filter(th, p_max, q1_degree=q1_degree, max_degree=VERIFY_MAX_Q1_DEGREE)
        filt.to_document().save(filter_out)
    click.echo(text, nl=False)


@cli.command("lemma3-check")
@click.option("--n", type=int, default=100, show_default=True)
@click.option("--r", type=int, default=25, show_default=True)
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@guarded
def ensemble_check_cmd(n, r, trials, seed):
    """Count orthogonal-ensemble pairs whose projector sum keeps ceil(6r/5) eigenvalues above 1/10"""
    report = ensemble_rank_check(n, r, trials, seed)
    click.echo(report.model_dump_json(indent=2, exclude={"eigenvalues"}))


cli.add_command(ensemble_check_cmd, "ensemble-check")


if __name__ == "__main__":
    cli()
