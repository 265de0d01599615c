import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import pareto_sample
from spineq import distributions as d
from spineq.distributions import Family, ParetoParams
from spineq.errors import DomainError, SpineqError
from spineq.selection import TIE_PRIORITY, bertino_index, choose, select_tail_model
from spineq.tailfit import Sample


def test_bertino_examples():
    assert bertino_index([0.25, 0.75]) == pytest.approx(1.0, abs=1e-15)
    assert bertino_index([0.0, 0.0]) == pytest.approx(0.0, abs=1e-15)
    assert bertino_index([0.5, 0.5]) == pytest.approx(0.8, abs=1e-15)
    with pytest.raises(DomainError):
        bertino_index([])


def test_bertino_perfect_spacing_any_n():
    for n in (1, 7, 100):
        assert bertino_index((2 * np.arange(1, n + 1) - 1) / (2 * n)) == pytest.approx(1.0, abs=1e-14)


@given(st.lists(st.floats(0, 1), min_size=1, max_size=200))
def test_bertino_range(fv):
    r = bertino_index(np.sort(fv))
    assert -1e-12 <= r <= 1.0


def test_bertino_worst_case_is_zero():
    # every F-value at 0 is the largest possible discrepancy for a monotone F
    for n in (1, 3, 50):
        assert bertino_index(np.zeros(n)) == pytest.approx(0.0, abs=1e-12)


def test_bertino_depends_only_on_f_values():
    x = pareto_sample(0.5, 500, seed=12).values
    p = ParetoParams(0.5)
    direct = bertino_index(x, lambda v: d.pareto_cdf(v, p))
    # same law seen through y = log x
    logged = bertino_index(np.log(x), lambda y: d.pareto_cdf(np.exp(y), p))
    assert logged == pytest.approx(direct, abs=1e-13)
    assert bertino_index(d.pareto_cdf(x, p)) == direct


def test_bertino_against_true_law_is_near_one():
    x = pareto_sample(0.5, 10_000, seed=13).values
    assert bertino_index(x, lambda v: d.pareto_cdf(v, ParetoParams(0.5))) > 0.99


def test_bertino_detects_wrong_law():
    x = pareto_sample(0.5, 10_000, seed=13).values
    right = bertino_index(x, lambda v: d.pareto_cdf(v, ParetoParams(0.5)))
    wrong = bertino_index(x, lambda v: d.pareto_cdf(v, ParetoParams(1.5)))
    assert wrong < right


def test_choose_ties_prefer_parsimony():
    assert TIE_PRIORITY[0] is Family.PA
    assert choose({Family.GPD: 0.9, Family.PA: 0.95, Family.PPD: 0.95 + 1e-10}) is Family.PA
    assert choose({Family.GPD: 0.9, Family.PA: 0.95, Family.PPD: 0.96}) is Family.PPD
    assert choose({Family.GPD: 0.99, Family.PPD: 0.99}) is Family.PPD


def test_select_on_pareto_data():
    s = pareto_sample(0.5, 10_000, seed=14)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = select_tail_model(s, 0.1)
    assert rep.k == 1000
    assert rep.chosen in (Family.PA, Family.PPD)
    assert set(rep.scores) == set(Family)
    assert rep.scores[Family.PA] > 0.99 and rep.scores[Family.PPD] > 0.99
    assert all(0 <= v <= 1 for v in rep.scores.values())


def test_select_records_partial_failure():
    # k = 10 but four of the top ten tie with u = 90, leaving 6 exceedances:
    # enough for GPD and Pa, too few for PPD
    s = Sample.from_values(np.concatenate([np.arange(1.0, 87.0), [90.0] * 8, 200.0 + np.arange(6.0)]))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = select_tail_model(s, 0.1)
    assert Family.PPD in rep.failures and "InsufficientDataError" in rep.failures[Family.PPD]
    assert rep.chosen in rep.scores


def test_select_all_fail_on_constant_tail():
    s = Sample.from_values(np.concatenate([np.arange(1.0, 71.0), [100.0] * 30]))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(SpineqError, match="every tail fit failed") as info:
            select_tail_model(s, 0.1)
    for fam in ("GPD", "Pa", "PPD"):
        assert f"{fam}:" in str(info.value)
