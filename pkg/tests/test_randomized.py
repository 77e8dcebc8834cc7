import asyncio
import math

import numpy as np
import pytest

from distrank.blackboard import Blackboard, PublicCoin, QuantizationSpec, build_machines, default_tau
from distrank.datagen import planted_spectrum_shards, step_spectrum
from distrank.exceptions import InvalidParameterError
from distrank.polyfilter import Thresholds, build_composite_filter
from distrank.protocols import (
    FilterKind,
    RandomizedRankProtocol,
    containment_bounds,
    containment_failure_probability,
    declared_range,
    degree_for_p,
    predict_randomized_bits,
    randomized_rank_estimate,
)
from distrank.protocols.coordinator import Coordinator
from distrank.protocols.randomized import apply_probe_filter
from distrank.spectra import eigh, generalized_rank
from distrank.utils.bit_counter import bits_for_count

from .helpers import random_psd, split_even, split_random

TH = Thresholds(0.5, 0.1)


def planted(n: int, k: int, m: int, seed: int, rest: float = 0.02, split: str = "even"):
    rng = np.random.default_rng(seed)
    spectrum = step_spectrum(n, k, 0.6, 0.0)
    spectrum[k:] = rest * rng.uniform(0.0, 1.0, n - k)
    return planted_spectrum_shards(n, m, spectrum, seed, split)


def run(machines, settings, **kwargs):
    return asyncio.run(RandomizedRankProtocol(machines, settings).execute(TH, **kwargs))


def test_zero_matrix_estimate_is_small(settings):
    n = 16
    shards = split_even(np.zeros((n, n)), 2)
    machines = build_machines(shards)
    p = degree_for_p(n)
    for seed in range(20):
        report = run(machines, settings, p=p, T=4, seed=seed)
        assert report.rhat <= 1.0


def test_report_invariants(settings):
    machines = build_machines(planted(24, 4, 2, seed=1))
    report = run(machines, settings, p=2, T=5, seed=9)
    assert report.rhat == pytest.approx(float(np.mean(report.y_sq_norms)), abs=1e-12)
    assert report.rhat_rounded == min(max(math.floor(report.rhat + 0.5), 0), 24)
    assert report.rhat_for(5) == pytest.approx(report.rhat, abs=1e-12)
    assert report.bits_for(5) == report.bits_used
    assert report.answer_bits == bits_for_count(24)
    d = report.filter_summary["q1_degree"]
    assert report.rounds == 5 * 5 * (d + 1)


def test_distributed_equals_centralized(settings):
    A = random_psd(20, seed=5, top=0.95)
    estimates = []
    for m in (1, 2, 4):
        machines = build_machines(split_random(A, m, seed=m), validate=False)
        estimates.append(run(machines, settings, p=3, T=6, seed=123).rhat)
    assert max(estimates) - min(estimates) <= 1e-9


def test_horner_and_powers_agree(settings):
    machines = build_machines(planted(20, 5, 2, seed=3))
    horner = run(machines, settings, p=3, T=3, seed=4, scheme="horner")
    powers = run(machines, settings, p=3, T=3, seed=4, scheme="powers")
    np.testing.assert_allclose(horner.y_sq_norms, powers.y_sq_norms, rtol=1e-8)


def test_containment_small_planted_instance(settings):
    n, k = 40, 8
    delta = 1.0 / math.sqrt(k)
    lo, hi = containment_bounds(k, k, delta)
    for seed in range(10):
        machines = build_machines(planted(n, k, 2, seed=seed))
        assert generalized_rank(sum(m.local_shard(m.index).entries for m in machines), TH.c1) == k
        report = run(machines, settings, p=degree_for_p(n), T=32, seed=seed, oracle_rank=k)
        assert lo <= report.rhat <= hi
        assert report.delta == pytest.approx(delta)


def test_sketch_expectation_identity():
    rng = np.random.default_rng(0)
    Q, _ = np.linalg.qr(rng.standard_normal((12, 12)))
    sigma = np.array([0.9, 0.8, 0.7, 0.6, 0.55, 0.3, 0.2, 0.1, 0.05, 0.0, 0.0, 0.0])
    A = (Q * sigma) @ Q.T
    f = build_composite_filter(TH, 2)
    dec = eigh(A)
    F = (dec.eigenvectors * f(dec.eigenvalues)) @ dec.eigenvectors.T
    G = PublicCoin(7).gaussian(100_000 * 12).reshape(100_000, 12)
    mc = float(np.mean(np.sum((G @ F) ** 2, axis=1)))
    exact = float(np.sum(f(dec.eigenvalues) ** 2))
    assert abs(mc - exact) <= 0.01 * exact


def test_probe_filter_matches_dense_filter(settings):
    A = random_psd(10, seed=8, top=0.9)
    machines = build_machines(split_even(A, 2))
    f = build_composite_filter(TH, 2)
    dec = eigh(A)
    F = (dec.eigenvectors * f(dec.eigenvalues)) @ dec.eigenvectors.T
    g = np.random.default_rng(1).standard_normal(10)
    coordinator = Coordinator(machines, Blackboard(2))
    y = asyncio.run(apply_probe_filter(coordinator, f, g))
    np.testing.assert_allclose(y, F @ g, atol=1e-9)


def test_exact_channel_ledger_closed_form(settings):
    machines = build_machines(planted(16, 3, 3, seed=2))
    report = run(machines, settings, p=1, T=4, seed=0)
    d = report.filter_summary["q1_degree"]
    expected = predict_randomized_bits(16, 3, d, 3, 4, QuantizationSpec.exact())
    assert report.bits_used == expected == 4 * 3 * (d + 1) * 4 * 16 * 64 + bits_for_count(16)


def test_fixed_point_ledger_closed_form(settings):
    machines = build_machines(planted(32, 4, 2, seed=6))
    report = run(machines, settings, p=2, T=3, seed=11, quantize="fixed")
    spec = QuantizationSpec.fixed(report.quantization["tau"], report.quantization["range_bound"])
    d = report.filter_summary["q1_degree"]
    assert report.bits_used == predict_randomized_bits(32, 2, d, 5, 3, spec)
    assert len(set(report.bits_per_repetition)) == 1
    again = run(machines, settings, p=2, T=3, seed=12, quantize="fixed")
    assert again.bits_used == report.bits_used


def test_quantized_close_to_exact(settings):
    machines = build_machines(planted(64, 6, 2, seed=4))
    for seed in range(5):
        exact = run(machines, settings, p=degree_for_p(64), T=8, seed=seed)
        fixed = run(machines, settings, p=degree_for_p(64), T=8, seed=seed, quantize="fixed")
        assert abs(exact.rhat - fixed.rhat) <= 0.1


def test_dynamic_range_mode_runs(settings):
    machines = build_machines(planted(16, 2, 2, seed=0))
    report = run(machines, settings, p=1, T=2, seed=0, quantize="fixed", dynamic_range=True)
    assert report.quantization["range_bound"] is None
    assert report.bits_used > 0


def test_baseline_filter(settings):
    machines = build_machines(planted(24, 4, 2, seed=5))
    report = run(machines, settings, p=0, T=3, seed=1, filter_kind=FilterKind.baseline(20))
    assert report.filter_summary["kind"] == "baseline"
    assert report.rounds == 3 * 21


def test_wrapper_uses_given_board(settings):
    machines = build_machines(planted(12, 2, 2, seed=0))
    board = Blackboard(2)
    report = asyncio.run(randomized_rank_estimate(machines, board, TH, 1, 2, 5, settings=settings))
    assert board.total_bits == report.bits_used


def test_invalid_repetitions(settings):
    machines = build_machines(planted(8, 1, 1, seed=0))
    with pytest.raises(InvalidParameterError):
        run(machines, settings, p=1, T=0, seed=0)


def _predicted_bits(n: int, p: int) -> int:
    f = build_composite_filter(TH, p)
    tau = default_tau(2, f.q1_degree, n, p)
    spec = QuantizationSpec.fixed(tau, declared_range(f, "horner", n))
    return predict_randomized_bits(n, 2, f.q1_degree, f.q1_applications, 4, spec)


NEAR_LINEAR_BOUND = 4 * (math.log2(512) / math.log2(128)) * 1.1


def test_bits_scale_nearly_linearly_in_n_at_fixed_p():
    assert _predicted_bits(256, 5) / _predicted_bits(64, 5) <= NEAR_LINEAR_BOUND
    assert _predicted_bits(128, 5) > _predicted_bits(64, 5)


def test_bits_growth_with_default_p_and_tau():
    # default tau shrinks like 2^(-4p), so bits per entry also grow with p = ceil(log2 2n)
    ratio = _predicted_bits(256, degree_for_p(256)) / _predicted_bits(64, degree_for_p(64))
    assert ratio <= 4 * (math.log2(512) / math.log2(128)) ** 2 * 1.1


@pytest.mark.xfail(strict=True, reason="default tau adds a second log factor; measured ratio is about 6.41")
def test_bits_near_linear_with_default_p_and_tau():
    ratio = _predicted_bits(256, degree_for_p(256)) / _predicted_bits(64, degree_for_p(64))
    assert ratio <= NEAR_LINEAR_BOUND


@pytest.mark.slow
def test_containment_reference_instance():
    n, k = 200, 20
    delta = 1.0 / math.sqrt(k)
    lo, hi = containment_bounds(k, k, delta)
    rng = np.random.default_rng(0)
    spectrum = np.concatenate([np.full(k, 0.6), 0.05 * rng.uniform(size=n - k)])
    machines = build_machines(planted_spectrum_shards(n, 2, spectrum, seed=0))
    passed = 0
    for seed in range(100):
        report = asyncio.run(RandomizedRankProtocol(machines).execute(TH, 9, 64, seed))
        passed += lo <= report.rhat <= hi
    assert passed >= 95
    assert 1.0 - passed / 100 <= containment_failure_probability(64, delta, k) + 0.03


@pytest.mark.slow
def test_quantized_close_to_exact_reference_instance():
    machines = build_machines(planted(200, 20, 2, seed=0))
    for seed in range(20):
        exact = asyncio.run(RandomizedRankProtocol(machines).execute(TH, 9, 16, seed))
        fixed = asyncio.run(RandomizedRankProtocol(machines).execute(TH, 9, 16, seed, quantize="fixed"))
        assert abs(exact.rhat - fixed.rhat) <= 0.1


def test_containment_failure_probability():
    assert containment_failure_probability(64, 1 / math.sqrt(20), 20) == pytest.approx(2 * math.exp(-2))
    assert containment_failure_probability(1, 0.1, 1) == 1.0
    assert containment_failure_probability(4096, 0.5, 20) < 1e-100
