import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

import oracles
from conftest import gpd_sample, pareto_sample
from spineq import distributions as d
from spineq.distributions import Family, GpdParams, ParetoParams, PpdParams
from spineq.errors import DomainError, InconsistentFitError, InfiniteMeanError
from spineq.spcdf import SemiParamCdf, build_sp_cdf, tail_log_mean, tail_upper_mean
from spineq.tailfit import Sample, TailFit, fit_tail


def manual_fit(s, family, params, k):
    return TailFit(family=Family(family), params=params, u=s.order_stat(s.n - k), k=k, n=s.n, loglik=0.0)


@pytest.fixture(scope="module")
def fitted():
    s = gpd_sample(1.0, 0.4, 2000, seed=11)
    return {fam: build_sp_cdf(s, fit_tail(s, fam, alpha=0.1)) for fam in Family}


def test_no_tail_is_empirical_cdf():
    s = Sample.from_values([3.0, 1.0, 2.0, 2.0, 5.0])
    F = build_sp_cdf(s)
    assert F.k == 0 and F.alpha == 0 and F.u == 5.0
    np.testing.assert_array_equal(F([0.5, 1, 1.5, 2, 4.9, 5, 100]), [0, 0.2, 0.2, 0.6, 0.8, 1, 1])
    assert F.mean() == pytest.approx(2.6, abs=1e-15)


@pytest.mark.parametrize("fam", list(Family))
def test_value_at_threshold(fitted, fam):
    F = fitted[fam]
    assert F(F.u) == 1 - F.k / F.n
    assert F.quantile(1 - F.alpha) == F.u


def test_gpd_median_of_tail():
    s = pareto_sample(0.5, 500, seed=2)
    p = GpdParams(1.5, 0.3)
    F = build_sp_cdf(s, manual_fit(s, "GPD", p, 50))
    x = F.u + float(d.gpd_quantile(0.5, p))
    assert F(x) == pytest.approx(1 - F.alpha / 2, abs=1e-15)


def test_inconsistent_fit_rejected():
    s = pareto_sample(0.5, 500, seed=2)
    fit = fit_tail(s, "Pa", alpha=0.1)
    other = pareto_sample(0.5, 500, seed=3)
    with pytest.raises(InconsistentFitError):
        build_sp_cdf(other, fit)


@pytest.mark.parametrize("fam", list(Family))
def test_body_matches_empirical_cdf(fitted, fam):
    F = fitted[fam]
    body = F.body
    np.testing.assert_array_equal(F(body), np.searchsorted(F.sample.values, body, side="right") / F.n)


@pytest.mark.parametrize("fam", list(Family))
def test_monotone_on_fine_grid(fitted, fam):
    F = fitted[fam]
    grid = np.linspace(0, float(F.quantile(1 - 1e-6)), 10_000)
    v = F(grid)
    assert np.all(np.diff(v) >= 0)
    assert v[0] == 0.0 and F(1e300) == pytest.approx(1.0, abs=1e-12)


def test_quantile_examples():
    s = Sample.from_values(np.arange(1, 101, dtype=float))
    F = build_sp_cdf(s, fit_tail(s, "Pa", alpha=0.1))
    assert F.quantile(0.9) == 90.0
    assert F.quantile(0.5) == 50.0  # X_{ceil(n/2)}
    assert F.quantile(0.01) == 1.0
    with pytest.raises(DomainError):
        F.quantile(1.0)
    with pytest.raises(DomainError):
        F.quantile(0.0)


@pytest.mark.parametrize("fam", list(Family))
@given(p=st.floats(0.001, 0.999999))
def test_quantile_round_trip(fitted, fam, p):
    F = fitted[fam]
    x = F.quantile(p)
    assert F(x) >= p - 1e-12
    if p > 1 - F.alpha:
        assert F(x) == pytest.approx(p, abs=1e-9)


def test_mean_closed_forms():
    s = pareto_sample(0.5, 1000, seed=4)
    k = 100
    F = build_sp_cdf(s, manual_fit(s, "GPD", GpdParams(1.0, 0.5), k))
    body = s.values[: s.n - k].sum() / s.n
    assert F.mean() == pytest.approx(body + k / s.n * (F.u + 2.0), rel=1e-14)
    F = build_sp_cdf(s, manual_fit(s, "Pa", ParetoParams(0.25), k))
    assert F.mean() == pytest.approx(body + k / s.n * F.u / 0.75, rel=1e-14)
    assert build_sp_cdf(s).mean() == pytest.approx(s.values.mean(), rel=1e-14)


def test_ppd_tail_mean_derivation():
    # E[Y] = 1 + int_1^inf S(y) dy, checked by quadrature
    for p in [PpdParams(0.5, 0.5, 1.0), PpdParams(0.3, -0.8, 1.2), PpdParams(0.8, 0.9, 4.0)]:
        num = 1 + quad(lambda t: float(d.ppd_sf(math.exp(t), p)) * math.exp(t), 0, 700, epsrel=1e-12, limit=400)[0]
        g, c, tau = p.gamma, p.c, p.tau
        derived = 1 + (1 - c) * g / (1 - g) + c * g / (1 - g + g * tau)
        assert derived == pytest.approx(num, rel=1e-9)
        s = Sample.from_values(np.linspace(1, 20, 40))
        F = build_sp_cdf(s, manual_fit(s, "PPD", p, 10))
        assert F.mean() == pytest.approx(s.values[:30].sum() / 40 + 0.25 * F.u * derived, rel=1e-13)


@pytest.mark.parametrize("fam", list(Family))
def test_mean_matches_quadrature(fitted, fam):
    F = fitted[fam]
    assert F.mean() == pytest.approx(oracles.mean_quad(F), rel=1e-6)


@pytest.mark.parametrize(
    "fam, p",
    [
        ("GPD", GpdParams(3.0, 0.2)),
        ("GPD", GpdParams(0.05, 0.9)),
        ("GPD", GpdParams(50.0, 0.5)),
        ("Pa", ParetoParams(0.6)),
        ("PPD", PpdParams(0.6, -0.5, 1.3)),
    ],
)
def test_tail_log_mean_matches_quadrature(fam, p):
    s = pareto_sample(0.4, 200, seed=1)
    fit = manual_fit(s, fam, p, 20)
    u = fit.u
    if fam == "GPD":
        ref = math.log(u) + quad(lambda z: float(d.gpd_sf(z, p)) / (u + z), 0, math.inf, epsrel=1e-12, limit=400)[0]
    else:
        ref = math.log(u) + quad(lambda y: float(d.sf(fam, p, y)) / y, 1, math.inf, epsrel=1e-12, limit=400)[0]
    assert tail_log_mean(fit) == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("fam, p", [("GPD", GpdParams(2.0, 0.4)), ("Pa", ParetoParams(0.4)), ("PPD", PpdParams(0.4, 0.5, 1.0))])
@pytest.mark.parametrize("r", [0.0, 0.3, 0.9])
def test_tail_upper_mean_matches_quadrature(fam, p, r):
    s = pareto_sample(0.4, 200, seed=1)
    fit = manual_fit(s, fam, p, 20)
    lo = float(d.quantile(fam, p, r))
    scale = (lambda y: fit.u + y) if fam == "GPD" else (lambda y: fit.u * y)
    ref = quad(lambda y: scale(y) * float(d.pdf(fam, p, y)), lo, math.inf, epsrel=1e-12, limit=400)[0]
    assert tail_upper_mean(fit, r) == pytest.approx(ref, rel=1e-8)


def test_infinite_mean():
    s = pareto_sample(0.5, 200, seed=1)
    for fam, p in [("GPD", GpdParams(1.0, 1.2)), ("Pa", ParetoParams(1.0)), ("PPD", PpdParams(1.5, 0.1, 1.0))]:
        F = build_sp_cdf(s, manual_fit(s, fam, p, 20))
        with pytest.raises(InfiniteMeanError):
            F.mean()
