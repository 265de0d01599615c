"""Tail families used above the threshold.

Three laws are supported, each with positive extreme value index ``gamma``:

* ``GPD``  generalized Pareto, for absolute exceedances ``X - u`` (support x >= 0)
* ``Pa``   strict Pareto, for relative exceedances ``X / u`` (support x >= 1)
* ``PPD``  perturbed Pareto, second-order refinement of ``Pa`` (support x >= 1)

All functions accept scalars or numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, ParameterError


class Family(str, Enum):
    GPD = "GPD"
    PA = "Pa"
    PPD = "PPD"

    @classmethod
    def parse(cls, name: str) -> "Family":
        key = name.strip().lower()
        for fam in cls:
            if fam.value.lower() == key:
                return fam
        raise ValueError(f"unknown tail family {name!r}")

    @property
    def relative(self) -> bool:
        """True if the family is fitted to ratios X/u rather than differences X-u."""
        return self is not Family.GPD


@dataclass(frozen=True)
class GpdParams:
    sigma: float
    gamma: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ParameterError(f"GPD scale must be > 0, got {self.sigma}")
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise ParameterError(f"GPD extreme value index must be > 0, got {self.gamma}")


@dataclass(frozen=True)
class ParetoParams:
    gamma: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise ParameterError(f"Pareto extreme value index must be > 0, got {self.gamma}")


@dataclass(frozen=True)
class PpdParams:
    gamma: float
    c: float
    tau: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise ParameterError(f"PPD extreme value index must be > 0, got {self.gamma}")
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ParameterError(f"PPD rate tau must be > 0, got {self.tau}")
        if not (-1.0 / self.tau < self.c < 1.0):
            raise ParameterError(f"PPD weight c must lie in (-1/tau, 1), got c={self.c}, tau={self.tau}")

    @property
    def density_positive(self) -> bool:
        # pdf(1) = 1/gamma + c*tau is the minimum of the bracketed factor when c < 0
        return 1.0 + self.c * self.gamma * self.tau > 0.0


def ppd_c_lower(gamma: float, tau: float) -> float:
    """Smallest admissible ``c`` keeping both the stated constraint and a positive density."""
    return -1.0 / (tau * max(1.0, gamma))


def _check_prob(p, upper_open=True):
    p = np.asarray(p, dtype=float)
    bad = (p < 0) | (p >= 1) if upper_open else (p < 0) | (p > 1)
    if np.any(bad) or np.any(np.isnan(p)):
        raise DomainError("probability outside [0, 1)")
    return p


def _check_min(x, lo, name):
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)) or np.any(x < lo):
        raise DomainError(f"{name} requires x >= {lo}")
    return x


# --- generalized Pareto -------------------------------------------------------

def _gpd_log_sf(x, p: GpdParams):
    return -np.log1p(p.gamma * x / p.sigma) / p.gamma


def gpd_cdf(x, p: GpdParams):
    x = _check_min(x, 0.0, "gpd_cdf")
    return -np.expm1(_gpd_log_sf(x, p))


def gpd_sf(x, p: GpdParams):
    x = _check_min(x, 0.0, "gpd_sf")
    return np.exp(_gpd_log_sf(x, p))


def gpd_logpdf(x, p: GpdParams):
    x = np.asarray(x, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = -math.log(p.sigma) - (1.0 / p.gamma + 1.0) * np.log1p(p.gamma * np.maximum(x, 0.0) / p.sigma)
    return np.where(x >= 0, out, -np.inf)


def gpd_pdf(x, p: GpdParams):
    return np.exp(gpd_logpdf(x, p))


def gpd_quantile(q, p: GpdParams):
    q = _check_prob(q)
    return p.sigma / p.gamma * np.expm1(-p.gamma * np.log1p(-q))


# --- strict Pareto ------------------------------------------------------------

def pareto_cdf(x, p: ParetoParams):
    x = _check_min(x, 1.0, "pareto_cdf")
    return -np.expm1(-np.log(x) / p.gamma)


def pareto_sf(x, p: ParetoParams):
    x = _check_min(x, 1.0, "pareto_sf")
    return np.exp(-np.log(x) / p.gamma)


def pareto_logpdf(x, p: ParetoParams):
    x = np.asarray(x, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = -math.log(p.gamma) - (1.0 / p.gamma + 1.0) * np.log(np.maximum(x, 1.0))
    return np.where(x >= 1, out, -np.inf)


def pareto_pdf(x, p: ParetoParams):
    return np.exp(pareto_logpdf(x, p))


def pareto_quantile(q, p: ParetoParams):
    q = _check_prob(q)
    return np.exp(-p.gamma * np.log1p(-q))


# --- perturbed Pareto ---------------------------------------------------------

def ppd_sf(x, p: PpdParams):
    x = _check_min(x, 1.0, "ppd_sf")
    lx = np.log(x)
    return (1.0 - p.c) * np.exp(-lx / p.gamma) + p.c * np.exp(-lx * (1.0 / p.gamma + p.tau))


def ppd_cdf(x, p: PpdParams):
    x = _check_min(x, 1.0, "ppd_cdf")
    lx = np.log(x)
    # 1 - sf rearranged so both pieces vanish smoothly at x = 1
    return -np.expm1(-lx / p.gamma) - p.c * np.exp(-lx / p.gamma) * np.expm1(-p.tau * lx)


def ppd_logpdf(x, p: PpdParams):
    x = np.asarray(x, dtype=float)
    lx = np.log(np.maximum(x, 1.0))
    bracket = (1.0 - p.c) + p.c * (1.0 + p.gamma * p.tau) * np.exp(-p.tau * lx)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = -math.log(p.gamma) - (1.0 / p.gamma + 1.0) * lx + np.log(bracket)
    out = np.where(bracket > 0, out, -np.inf)
    return np.where(x >= 1, out, -np.inf)


def ppd_pdf(x, p: PpdParams):
    return np.exp(ppd_logpdf(x, p))


def ppd_quantile(q, p: PpdParams, tol: float = 1e-10, max_iter: int = 200):
    """Invert the PPD survival function by safeguarded root-finding.

    Works on ``t = log x`` where the survival function is strictly decreasing.
    Odd steps are Illinois regula-falsi, even steps bisection, so the bracket
    at least halves every two iterations. Stops once ``|cdf(x) - q| <= tol``
    for every element or the bracket collapses to floating-point resolution.
    """
    q = _check_prob(q)
    scalar = q.ndim == 0
    q = np.atleast_1d(q)
    target = -np.log1p(-q)  # -log survival, increasing in t

    # sf(x) lies between min(1, 1-c) x^(-1/g) and max(1, 1-c) x^(-1/g)
    lo_f, hi_f = min(1.0, 1.0 - p.c), max(1.0, 1.0 - p.c)
    a = np.maximum(p.gamma * (target + math.log(lo_f)), 0.0)
    b = np.maximum(p.gamma * (target + math.log(hi_f)), 0.0) + 1e-12

    def g(t):
        # log sf(e^t) + target; positive left of the root, negative right of it
        with np.errstate(divide="ignore"):
            s = (1.0 - p.c) * np.exp(-t / p.gamma) + p.c * np.exp(-t * (1.0 / p.gamma + p.tau))
            return np.log(s) + target

    ga, gb = g(a), g(b)
    done = (q == 0) | (ga <= 0)
    a = np.where(q == 0, 0.0, a)
    x = np.where(done, a, b)
    side = np.zeros_like(a)
    for it in range(max_iter):
        if it % 2 == 0:
            denom = ga - gb
            m = np.where(denom != 0, a + ga * (b - a) / np.where(denom != 0, denom, 1.0), 0.5 * (a + b))
            m = np.clip(m, np.minimum(a, b), np.maximum(a, b))
        else:
            m = 0.5 * (a + b)
        gm = g(m)
        left = gm > 0
        a_new = np.where(left, m, a)
        b_new = np.where(left, b, m)
        ga_new = np.where(left, gm, ga)
        gb_new = np.where(left, gb, gm)
        # Illinois modification: halve the stale endpoint value on repeats
        gb_new = np.where(left & (side > 0), 0.5 * gb_new, gb_new)
        ga_new = np.where(~left & (side < 0), 0.5 * ga_new, ga_new)
        side = np.where(left, 1.0, -1.0)
        a = np.where(done, a, a_new)
        b = np.where(done, b, b_new)
        ga = np.where(done, ga, ga_new)
        gb = np.where(done, gb, gb_new)
        x = np.where(done, x, m)
        xm = np.exp(m)
        err = np.abs(ppd_cdf(np.maximum(xm, 1.0), p) - q)
        done = done | (err <= tol) | (b - a <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(b)))
        if np.all(done):
            break
    out = np.exp(x)
    return out[0] if scalar else out


# --- family dispatch ----------------------------------------------------------

_CDF = {Family.GPD: gpd_cdf, Family.PA: pareto_cdf, Family.PPD: ppd_cdf}
_SF = {Family.GPD: gpd_sf, Family.PA: pareto_sf, Family.PPD: ppd_sf}
_LOGPDF = {Family.GPD: gpd_logpdf, Family.PA: pareto_logpdf, Family.PPD: ppd_logpdf}
_QUANTILE = {Family.GPD: gpd_quantile, Family.PA: pareto_quantile, Family.PPD: ppd_quantile}
PARAM_TYPES = {Family.GPD: GpdParams, Family.PA: ParetoParams, Family.PPD: PpdParams}


def support_min(family: Family) -> float:
    return 0.0 if family is Family.GPD else 1.0


def cdf(family, params, x):
    return _CDF[Family(family)](x, params)


def sf(family, params, x):
    return _SF[Family(family)](x, params)


def logpdf(family, params, x):
    return _LOGPDF[Family(family)](x, params)


def pdf(family, params, x):
    return np.exp(logpdf(family, params, x))


def quantile(family, params, q):
    return _QUANTILE[Family(family)](q, params)


def log_likelihood(family, params, data) -> float:
    """Sum of log-densities; ``-inf`` when any point is outside the support."""
    data = np.asarray(data, dtype=float)
    if data.size == 0:
        raise DomainError("log-likelihood of an empty sample")
    family = Family(family)
    if np.any(data < support_min(family)):
        return -math.inf
    return float(np.sum(_LOGPDF[family](data, params)))
