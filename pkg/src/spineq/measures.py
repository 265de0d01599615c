"""Non-parametric and semi-parametric inequality measures.

Every semi-parametric estimator is the plug-in functional of a
:class:`~spineq.spcdf.SemiParamCdf`. Body terms are shared with the
non-parametric estimators, so a tail-free estimator (k = 0) reproduces the
NP value bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .distributions import Family
from .errors import DegenerateDataError, InsufficientDataError
from .spcdf import SemiParamCdf, tail_log_mean, tail_sf_integrals, tail_upper_mean
from .tailfit import Sample

GAMMA_WARN = 0.95


class Measure(str, Enum):
    GINI = "gini"
    GE0 = "ge0"
    A1 = "a1"
    QSR = "qsr"


@dataclass(frozen=True)
class MeasureValue:
    measure: Measure
    method: str
    value: float
    diagnostics: tuple = field(default_factory=tuple)


def _diagnostics(F: SemiParamCdf) -> tuple:
    if F.fit is None:
        return ()
    notes = list(F.fit.diagnostics)
    if F.fit.params.gamma > GAMMA_WARN:
        notes.append(f"extreme value index {F.fit.params.gamma:.4g} is close to 1; estimates are unstable")
    return tuple(notes)


def _np_cdf(s: Sample, min_n: int) -> SemiParamCdf:
    if s.n < min_n:
        raise InsufficientDataError(f"need at least {min_n} observations, got {s.n}")
    return SemiParamCdf(s)


def _gini_body(values: np.ndarray, n: int, upto: int) -> float:
    """sum_{i=1}^{upto} (i/n)(1 - i/n)(X_{i+1,n} - X_{i,n})."""
    i = np.arange(1, upto + 1)
    w = i / n
    return float(np.sum(w * (1.0 - w) * np.diff(values[: upto + 1])))


def gini(F: SemiParamCdf) -> MeasureValue:
    """Plug-in Gini ``(1/mu) int F(1-F) dx``.

    For a GPD tail this is the closed form with body sum up to ``n-k-1``
    and tail term ``k sigma [2n - k - gamma(n-k)] / (n^2 mu (1-gamma)(2-gamma))``.
    """
    n, k = F.n, F.k
    mu = F.mean()
    total = _gini_body(F.sample.values, n, n - k - 1)
    if F.fit is not None:
        p = F.fit.params
        if F.fit.family is Family.GPD:
            g = p.gamma
            total += k * p.sigma * (2 * n - k - g * (n - k)) / (n * n * (1.0 - g) * (2.0 - g))
        else:
            i1, i2 = tail_sf_integrals(F.fit)
            a = F.alpha
            total += a * i1 - a * a * i2
    return MeasureValue(Measure.GINI, F.method, total / mu, _diagnostics(F))


def _mean_log(F: SemiParamCdf) -> float:
    body = float(np.sum(np.log(F.body))) / F.n
    if F.fit is None:
        return body
    return body + F.alpha * tail_log_mean(F.fit)


def ge0(F: SemiParamCdf) -> MeasureValue:
    """Mean log deviation ``log mu - E[log X]``."""
    if F.n < 2:
        raise InsufficientDataError("GE(0) needs at least 2 observations")
    mu = F.mean()
    return MeasureValue(Measure.GE0, F.method, math.log(mu) - _mean_log(F), _diagnostics(F))


def a1(F: SemiParamCdf) -> MeasureValue:
    """Atkinson index with aversion 1: one minus geometric over arithmetic mean."""
    if F.n < 2:
        raise InsufficientDataError("A(1) needs at least 2 observations")
    mu = F.mean()
    return MeasureValue(Measure.A1, F.method, 1.0 - math.exp(_mean_log(F)) / mu, _diagnostics(F))


def qsr(F: SemiParamCdf) -> MeasureValue:
    """Quintile share ratio: mass of the top fifth over mass of the bottom fifth.

    Fifths are ``m = ceil(n/5)`` observations' worth of probability. Body
    observations are assigned whole by rank; when the top fifth reaches into
    the tail, the tail contributes the mean mass above its level ``(k-m)/k``.
    """
    n, k = F.n, F.k
    if n < 5:
        raise InsufficientDataError("QSR needs at least 5 observations")
    m = -(-n // 5)
    if m > n - k:
        raise InsufficientDataError("bottom fifth reaches into the tail; lower alpha")
    v = F.sample.values
    bottom = float(np.sum(v[:m]))
    top = float(np.sum(v[n - m : n - k])) if n - m < n - k else 0.0
    if F.fit is not None:
        top += k * tail_upper_mean(F.fit, max(0.0, (k - m) / k))
    if bottom <= 0:
        raise DegenerateDataError("bottom quintile share is zero")
    return MeasureValue(Measure.QSR, F.method, top / bottom, _diagnostics(F))


def gini_np(s: Sample) -> MeasureValue:
    if s.n < 2:
        raise InsufficientDataError("Gini needs at least 2 observations")
    return gini(_np_cdf(s, 2))


def ge0_np(s: Sample) -> MeasureValue:
    return ge0(_np_cdf(s, 2))


def a1_np(s: Sample) -> MeasureValue:
    return a1(_np_cdf(s, 2))


def qsr_np(s: Sample) -> MeasureValue:
    return qsr(_np_cdf(s, 5))


gini_sp = gini
ge0_sp = ge0
a1_sp = a1
qsr_sp = qsr

ESTIMATORS = {Measure.GINI: gini, Measure.GE0: ge0, Measure.A1: a1, Measure.QSR: qsr}


def descriptive_stats(s: Sample, mad_scale: bool = False) -> dict:
    """Sample size, median, median absolute deviation and maximum.

    ``mad_scale`` multiplies the MAD by 1.4826 (normal consistency factor).
    """
    med = float(np.median(s.values))
    mad = float(np.median(np.abs(s.values - med)))
    if mad_scale:
        mad *= 1.4826
    return {"n": s.n, "median": med, "mad": mad, "max": float(s.values[-1])}
