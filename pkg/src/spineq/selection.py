"""Bertino representativeness index and tail-family selection."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from . import distributions as dist
from .distributions import Family
from .errors import DomainError, SpineqError
from .tailfit import Sample, TailFit, exceedances_for, fit_tail

# preferred family when scores tie; Pa is nested in PPD
TIE_PRIORITY = (Family.PA, Family.PPD, Family.GPD)
TIE_TOL = 1e-9


def bertino_index(sorted_values, cdf: Union[Callable, None] = None) -> float:
    """``R = 1 - 12n/(4n^2-1) * sum_i (F(X_(i)) - (2i-1)/(2n))^2``.

    With ``cdf=None`` the input is taken to be the already-evaluated F-values.
    """
    x = np.asarray(sorted_values, dtype=float)
    if x.size == 0:
        raise DomainError("representativeness index of an empty sample")
    n = x.size
    f = x if cdf is None else np.asarray(cdf(x), dtype=float)
    pos = (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)
    return float(1.0 - 12.0 * n / (4.0 * n * n - 1.0) * np.sum((f - pos) ** 2))


@dataclass(frozen=True)
class SelectionReport:
    scores: dict
    chosen: Family
    k: int
    fits: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)


def score_fit(s: Sample, fit: TailFit) -> float:
    """Index of the exceedances, in the family's own coordinate, against the fitted law."""
    exc = exceedances_for(fit.family, s, fit.u, fit.k)
    return bertino_index(exc, lambda x: dist.cdf(fit.family, fit.params, x))


def choose(scores: dict) -> Family:
    best = max(scores.values())
    for fam in TIE_PRIORITY:
        if fam in scores and scores[fam] >= best - TIE_TOL:
            return fam
    raise AssertionError("unreachable")


def select_tail_model(s: Sample, alpha: float, families=tuple(Family)) -> SelectionReport:
    """Fit each family to the top ``floor(alpha n)`` observations and keep the most representative."""
    scores, fits, failures = {}, {}, {}
    k = None
    for fam in families:
        fam = Family(fam)
        try:
            fit = fit_tail(s, fam, alpha=alpha)
            scores[fam] = score_fit(s, fit)
            fits[fam] = fit
            k = fit.k
        except SpineqError as err:
            failures[fam] = f"{type(err).__name__}: {err}"
    if not scores:
        detail = "; ".join(f"{f.value}: {m}" for f, m in failures.items())
        raise SpineqError(f"every tail fit failed ({detail})")
    return SelectionReport(scores=scores, chosen=choose(scores), k=k, fits=fits, failures=failures)
