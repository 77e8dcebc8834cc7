import math

import numpy as np
import pytest

from distrank.exceptions import DegreeExhaustedError, InvalidParameterError
from distrank.polyfilter import (
    ChebyshevExpansion,
    FilterDocument,
    Thresholds,
    build_composite_filter,
    chebyshev_gauss_coefficients,
    coefficient_mass,
    eval_q2,
    eval_q2_monomial,
    fit_chebyshev,
    fit_highpass_baseline,
    fit_q1,
    hspec,
    passband_grid,
    q2_coefficients,
    sup_error_on_passbands,
    unit_grid,
)
from distrank.spectra import eigvalsh

from .helpers import random_psd

TH = Thresholds(0.5, 0.1)


def test_thresholds_validation():
    with pytest.raises(InvalidParameterError):
        Thresholds(0.1, 0.5)
    with pytest.raises(InvalidParameterError):
        Thresholds(0.5, 0.1, delta=1.0)
    assert TH.midpoint == pytest.approx(0.3)


def test_hspec_ramp():
    assert hspec(0.05, TH) == 0.0
    assert hspec(0.7, TH) == 1.0
    assert hspec(0.3, TH) == pytest.approx(0.5)


def test_identity_and_constant_expansions():
    x = np.linspace(0.0, 1.0, 11)
    np.testing.assert_allclose(ChebyshevExpansion.identity()(x), x, atol=1e-15)
    np.testing.assert_allclose(ChebyshevExpansion.constant(1.0)(x), np.ones(11))


def test_fit_q1_returns_minimal_degree():
    q1 = fit_q1(TH, target_err=0.1)
    assert q1.achieved_sup_error <= 0.1
    grid = unit_grid(10_001, TH)
    lower = fit_chebyshev(lambda x: hspec(x, TH), q1.degree - 1, grid)
    assert lower.achieved_sup_error > 0.1


def test_fit_q1_contracted_into_unit_range():
    q1 = fit_q1(TH, degree=4)
    values = q1(unit_grid(10_001, TH))
    assert values.min() >= -1e-12
    assert values.max() <= 1.0 + 1e-12


@pytest.mark.parametrize("p", range(1, 13))
def test_composite_error_halves_with_p(p):
    f = build_composite_filter(TH, p)
    assert sup_error_on_passbands(f, TH) <= 2.0 ** -p
    values = f(unit_grid(10_001, TH))
    assert values.min() >= -1e-12
    assert values.max() <= 1.0 + 1e-12


@pytest.mark.parametrize("p", range(0, 13))
def test_booster_properties(p):
    assert eval_q2(p, 0.0) == pytest.approx(0.0, abs=1e-12)
    assert eval_q2(p, 1.0) == pytest.approx(1.0, abs=1e-12)
    z = np.linspace(0.0, 1.0, 1000)
    np.testing.assert_allclose(eval_q2(p, z) + eval_q2(p, 1.0 - z), 1.0, atol=1e-9)
    low = np.linspace(-0.1, 0.1, 201)
    high = np.linspace(0.9, 1.1, 201)
    assert np.all(eval_q2(p, low) <= 2.0 ** -p)
    assert np.all(eval_q2(p, high) >= 1.0 - 2.0 ** -p)
    assert coefficient_mass(p) <= 2 ** (3 * p)


def test_booster_p0_is_identity():
    np.testing.assert_array_equal(q2_coefficients(0), [0.0, 1.0])


def test_booster_monomial_agrees_with_split_evaluation():
    z = np.linspace(0.0, 1.0, 101)
    np.testing.assert_allclose(eval_q2_monomial(q2_coefficients(3), z), eval_q2(3, z), atol=1e-12)


def test_sandwich_relation():
    for seed in range(100):
        sigma = eigvalsh(random_psd(12, seed))
        mass = float(np.sum(hspec(sigma, TH) ** 2))
        assert np.count_nonzero(sigma > TH.c1) <= mass <= np.count_nonzero(sigma > TH.c2)


def test_baseline_coefficients_match_quadrature():
    degree = 30
    baseline = fit_highpass_baseline(TH, degree)
    numeric = chebyshev_gauss_coefficients(lambda x: (x >= TH.midpoint).astype(float), degree, nodes=200_000)
    np.testing.assert_allclose(baseline.coeffs, numeric, atol=1e-4)
    assert baseline.coeffs[0] == pytest.approx(2.0 * math.acos(2.0 * TH.midpoint - 1.0) / math.pi)


def test_baseline_error_shrinks_with_degree():
    assert fit_highpass_baseline(TH, 200).achieved_sup_error < 0.05


def test_passband_grid_excludes_ramp():
    grid = passband_grid(1001, TH)
    assert not np.any((grid > TH.c2) & (grid < TH.c1))
    assert TH.c1 in grid and TH.c2 in grid


def test_filter_document_round_trip(tmp_path):
    f = build_composite_filter(TH, 3, q1_degree=4)
    path = f.to_document().save(tmp_path / "filter.json")
    g = FilterDocument.load(path).to_filter()
    assert g.total_degree == 4 * 7
    x = np.linspace(0.0, 1.0, 51)
    np.testing.assert_array_equal(f(x), g(x))


@pytest.mark.parametrize("p", range(0, 13))
def test_booster_monotone_on_unit_interval(p):
    z = np.linspace(0.0, 1.0, 1000)
    assert np.all(np.diff(eval_q2(p, z)) >= -1e-12)


def test_composite_beats_baseline_at_matched_degree():
    composite = build_composite_filter(TH, 5, q1_degree=4)
    assert composite.total_degree == 44
    baseline = fit_highpass_baseline(TH, 44)
    assert sup_error_on_passbands(baseline, TH) > sup_error_on_passbands(composite, TH)


def test_fit_q1_degree_exhausted():
    with pytest.raises(DegreeExhaustedError) as exc:
        fit_q1(Thresholds(0.02, 0.01), max_degree=5)
    assert exc.value.max_degree == 5
    assert exc.value.best_error > 0.1


def test_loaded_filter_uses_stored_booster_coefficients():
    doc = build_composite_filter(TH, 1, q1_degree=4).to_document()
    doc.q2_coeffs = [0.5 * a for a in doc.q2_coeffs]
    f = doc.to_filter()
    assert f.q2(0.25) == pytest.approx(0.5 * eval_q2(1, 0.25))
    assert f.q2(0.75) == pytest.approx(1.0 - 0.5 * eval_q2(1, 0.25))
    assert f.q2(0.25) != pytest.approx(eval_q2(1, 0.25))
