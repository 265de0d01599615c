"""Threshold choice, exceedance extraction and tail parameter estimation."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit, logit

from . import distributions as dist
from .distributions import Family, GpdParams, ParetoParams, PpdParams
from .errors import (
    DegenerateDataError,
    DomainError,
    FitConvergenceError,
    InsufficientDataError,
)

MIN_K = {Family.GPD: 5, Family.PA: 5, Family.PPD: 10}

# Nelder-Mead settings: parameter moves < 1e-8, likelihood moves < 1e-10
NM_OPTIONS = {"xatol": 1e-8, "fatol": 1e-10, "maxiter": 10000, "maxfev": 40000}
TIE_TOL = 1e-12

Params = Union[GpdParams, ParetoParams, PpdParams]


class TailFitWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Sample:
    """Sorted, strictly positive observations."""

    values: np.ndarray
    source: str = ""

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 1:
            raise InsufficientDataError("a sample needs at least one observation")
        if not np.all(np.isfinite(v)) or np.any(v <= 0):
            raise DomainError("sample values must be finite and strictly positive")
        if np.any(np.diff(v) < 0):
            raise DomainError("sample values must be sorted; use Sample.from_values")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def from_values(cls, values, source: str = "") -> "Sample":
        return cls(np.sort(np.asarray(values, dtype=float)), source)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def order_stat(self, i: int) -> float:
        """``X_{i,n}`` with 1-based ``i``."""
        return float(self.values[i - 1])

    def scaled(self, factor: float) -> "Sample":
        return Sample(self.values * factor, self.source)


@dataclass(frozen=True)
class TailFit:
    family: Family
    params: Params
    u: float
    k: int
    n: int
    loglik: float
    n_ties: int = 0
    diagnostics: tuple = field(default_factory=tuple)

    @property
    def alpha(self) -> float:
        return self.k / self.n


def tail_count(n: int, alpha: float) -> int:
    if not 0 < alpha < 1:
        raise DomainError(f"tail fraction must lie in (0, 1), got {alpha}")
    # guard against 0.29 * 100 = 28.999999999999996
    return int(math.floor(alpha * n + 1e-9))


def select_threshold(s: Sample, alpha: float, min_k: int = 5) -> tuple[float, int]:
    """Threshold ``u = X_{n-k,n}`` with ``k = floor(alpha * n)``."""
    k = tail_count(s.n, alpha)
    if k < min_k:
        raise InsufficientDataError(f"only k={k} exceedances for alpha={alpha}, n={s.n}; need {min_k}")
    if k >= s.n:
        raise InsufficientDataError(f"k={k} leaves no observation below the threshold")
    return s.order_stat(s.n - k), k


def _top(s: Sample, k: int) -> np.ndarray:
    if not 1 <= k <= s.n - 1:
        raise DomainError(f"k={k} outside [1, n-1] for n={s.n}")
    return s.values[s.n - k:]


def _drop(values: np.ndarray, bad: np.ndarray, what: str) -> np.ndarray:
    n_bad = int(np.count_nonzero(bad))
    if n_bad:
        warnings.warn(f"dropped {n_bad} {what} tied with the threshold", TailFitWarning, stacklevel=3)
    return values[~bad]


def absolute_exceedances(s: Sample, u: float, k: int) -> np.ndarray:
    """``X_{n-k+i,n} - u`` for i = 1..k, with zero excesses dropped."""
    exc = _top(s, k) - u
    return _drop(exc, exc <= 0, "zero excesses")


def relative_exceedances(s: Sample, u: float, k: int) -> np.ndarray:
    """``X_{n-k+i,n} / u`` for i = 1..k, with unit ratios dropped."""
    if u <= 0:
        raise DomainError("relative exceedances need a positive threshold")
    rel = _top(s, k) / u
    return _drop(rel, rel <= 1, "unit ratios")


def _check_fit_input(x, min_count, lower):
    x = np.asarray(x, dtype=float)
    if x.size >= 2 and np.ptp(x) == 0:
        raise DegenerateDataError("all values are equal")
    if x.size < min_count:
        raise InsufficientDataError(f"need at least {min_count} values, got {x.size}")
    if np.any(x <= lower):
        raise DomainError(f"fit data must exceed {lower}")
    return x


def _multistart(nll, starts):
    """Nelder-Mead from each start; keep the lowest objective, earliest start on ties."""
    best = None
    for x0 in starts:
        res = minimize(nll, np.asarray(x0, dtype=float), method="Nelder-Mead", options=NM_OPTIONS)
        if not np.isfinite(res.fun):
            continue
        if best is None or res.fun < best.fun - TIE_TOL:
            best = res
    if best is None:
        raise FitConvergenceError("no starting point produced a finite likelihood")
    # restart from the winner; a collapsed simplex can stall short of the optimum
    polish = minimize(nll, best.x, method="Nelder-Mead", options=NM_OPTIONS)
    if polish.fun <= best.fun:
        polish.success = polish.success or best.success
        best = polish
    if not best.success:
        raise FitConvergenceError(f"Nelder-Mead did not converge: {best.message}", best=best.x, loglik=-best.fun)
    return best


def _gpd_nll(theta, x):
    sigma, gamma = math.exp(theta[0]), math.exp(theta[1])
    if not (math.isfinite(sigma) and sigma > 0 and gamma > 0):
        return math.inf
    z = x / sigma
    if gamma < 1e-10:
        # exponential limit avoids 0/0 in log1p(gamma z)/gamma
        return x.size * math.log(sigma) + float(np.sum(z))
    return x.size * math.log(sigma) + (1.0 / gamma + 1.0) * float(np.sum(np.log1p(gamma * z)))


def fit_gpd_mle(excesses) -> GpdParams:
    """Maximum likelihood GPD fit over sigma > 0, gamma > 0."""
    x = _check_fit_input(excesses, MIN_K[Family.GPD], 0.0)
    m = float(np.mean(x))
    starts = [(math.log(m * (1.0 - g0)), math.log(g0)) for g0 in (0.1, 0.3, 0.5, 0.7, 0.9)]
    res = _multistart(lambda th: _gpd_nll(th, x), starts)
    return GpdParams(sigma=math.exp(res.x[0]), gamma=math.exp(res.x[1]))


def fit_pareto_hill(rel_exceedances) -> ParetoParams:
    """Closed-form Pareto MLE: the mean of the log ratios."""
    r = np.asarray(rel_exceedances, dtype=float)
    if r.size == 0:
        raise InsufficientDataError("Hill estimate of an empty sample")
    if np.any(r <= 1):
        raise DomainError("relative exceedances must exceed 1")
    return ParetoParams(gamma=float(np.mean(np.log(r))))


# second-order rate box; outside it c and tau are not separately identifiable
TAU_BOUNDS = (0.1, 10.0)
_LOG_TAU = (math.log(TAU_BOUNDS[0]), math.log(TAU_BOUNDS[1]))


def _tau_from(z):
    return math.exp(_LOG_TAU[0] + (_LOG_TAU[1] - _LOG_TAU[0]) * float(expit(z)))


def _tau_to(tau):
    return float(logit((math.log(tau) - _LOG_TAU[0]) / (_LOG_TAU[1] - _LOG_TAU[0])))


def _ppd_unpack(theta):
    gamma, tau = math.exp(theta[0]), _tau_from(theta[1])
    lo = dist.ppd_c_lower(gamma, tau)
    c = lo + (1.0 - lo) * float(expit(theta[2]))
    return gamma, c, tau


def _ppd_nll(theta, lx):
    gamma, c, tau = _ppd_unpack(theta)
    if not (gamma > 0 and tau > 0 and math.isfinite(gamma) and math.isfinite(tau)) or not c < 1.0:
        return math.inf
    bracket = (1.0 - c) + c * (1.0 + gamma * tau) * np.exp(-tau * lx)
    if np.any(bracket <= 0):
        return math.inf
    return lx.size * math.log(gamma) + (1.0 / gamma + 1.0) * float(np.sum(lx)) - float(np.sum(np.log(bracket)))


def _ppd_nll_natural(theta, lx):
    gamma, c, tau = theta
    bracket = (1.0 - c) + c * (1.0 + gamma * tau) * np.exp(-tau * lx)
    if gamma <= 0 or tau <= 0 or np.any(bracket <= 0):
        return math.inf
    return lx.size * math.log(gamma) + (1.0 / gamma + 1.0) * math.fsum(lx) - math.fsum(np.log(bracket))


def _ppd_score(theta, lx):
    """Gradient of the PPD negative log-likelihood in (gamma, c, tau)."""
    gamma, c, tau = theta
    e = np.exp(-tau * lx)
    bracket = (1.0 - c) + c * (1.0 + gamma * tau) * e
    return np.array([
        lx.size / gamma - math.fsum(lx) / gamma**2 - math.fsum(c * tau * e / bracket),
        -math.fsum(((1.0 + gamma * tau) * e - 1.0) / bracket),
        -math.fsum(c * e * (gamma - (1.0 + gamma * tau) * lx) / bracket),
    ])


def _ppd_admissible(gamma, c, tau):
    return gamma > 0 and TAU_BOUNDS[0] <= tau <= TAU_BOUNDS[1] and dist.ppd_c_lower(gamma, tau) <= c < 1.0


def _on_bound(x, lo, hi, rel=1e-9):
    span = hi - lo
    return x - lo <= rel * span or hi - x <= rel * span


def _ppd_newton_polish(gamma, c, tau, lx, max_iter=30):
    """Newton steps on the score from the simplex optimum.

    The simplex stops where the objective is flat to rounding, which leaves
    the parameters uncertain at the 1e-8 level; solving score = 0 pins them
    down to near machine precision. Active constraints are kept active:
    ``tau`` is frozen on a bound of its box and ``c`` rides its lower bound
    when it sits there. An optimum with ``c`` next to 1 is left alone. Steps
    that leave the feasible set, fail to shrink the score, or meet a
    non-convex Hessian end the polish.
    """
    lo = dist.ppd_c_lower(gamma, tau)
    if 1.0 - c <= 1e-9 * (1.0 - lo) or not _ppd_admissible(gamma, c, tau):
        return gamma, c, tau
    tied = c - lo <= 1e-9 * (1.0 - lo)
    tau_free = not _on_bound(tau, *TAU_BOUNDS)

    def expand(v):
        g = v[0]
        t = v[-1] if tau_free else tau
        cc = dist.ppd_c_lower(g, t) if tied else v[1]
        return float(g), float(cc), float(t)

    def reduced_score(v):
        g, cc, t = expand(v)
        full = _ppd_score((g, cc, t), lx)
        out = [full[0]]
        if tied:
            # c = -1/(tau max(1, gamma)) moves with gamma (above 1) and tau
            out[0] += full[1] * (-cc / g if g > 1.0 else 0.0)
        else:
            out.append(full[1])
        if tau_free:
            out.append(full[2] + (full[1] * (-cc / t) if tied else 0.0))
        return np.array(out)

    def feasible(v):
        g, cc, t = expand(v)
        if not _ppd_admissible(g, cc, t):
            return False
        return tied or cc - dist.ppd_c_lower(g, t) > 1e-12 * (1.0 - cc)

    v = np.array([gamma] + ([] if tied else [c]) + ([tau] if tau_free else []), dtype=float)
    nll = _ppd_nll_natural(expand(v), lx)
    score = reduced_score(v)
    for _ in range(max_iter):
        hess = np.empty((v.size, v.size))
        for i in range(v.size):
            h = 1e-6 * max(abs(v[i]), 1e-3)
            up, dn = v.copy(), v.copy()
            up[i] += h
            dn[i] -= h
            if not (feasible(up) and feasible(dn)):
                return expand(v)
            hess[:, i] = (reduced_score(up) - reduced_score(dn)) / (2 * h)
        hess = 0.5 * (hess + hess.T)
        try:
            np.linalg.cholesky(hess)
            step = np.linalg.solve(hess, score)
        except np.linalg.LinAlgError:
            break
        cand = v - step
        if not feasible(cand):
            break
        cand_nll = _ppd_nll_natural(expand(cand), lx)
        cand_score = reduced_score(cand)
        if cand_nll > nll + 1e-12 * abs(nll) or np.max(np.abs(cand_score)) >= np.max(np.abs(score)):
            break
        v, nll, score = cand, cand_nll, cand_score
        if np.max(np.abs(step) / np.abs(v)) < 1e-15:
            break
    return expand(v)


def fit_ppd_mle(rel_exceedances) -> PpdParams:
    """Constrained PPD maximum likelihood, started around the Hill fit.

    ``c`` is mapped onto (lower(gamma, tau), 1) by a logistic transform, where the
    lower bound keeps the density positive. The returned fit never has a lower
    likelihood than the strict Pareto (``c = 0``) fit.
    """
    r = _check_fit_input(rel_exceedances, MIN_K[Family.PPD], 1.0)
    lx = np.log(r)
    g0 = float(np.mean(lx))
    starts = []
    for c0 in (-0.25, 0.0, 0.25):
        for t0 in (0.5, 1.0, 2.0):
            lo = dist.ppd_c_lower(g0, t0)
            if not lo < c0 < 1.0:
                continue
            starts.append((math.log(g0), _tau_to(t0), float(logit((c0 - lo) / (1.0 - lo)))))
    res = _multistart(lambda th: _ppd_nll(th, lx), starts)
    gamma, c, tau = _ppd_newton_polish(*_ppd_unpack(res.x), lx)

    if _ppd_nll_natural((gamma, c, tau), lx) > _ppd_nll_natural((g0, 0.0, 1.0), lx):
        gamma, c, tau = g0, 0.0, 1.0
    lo = dist.ppd_c_lower(gamma, tau)
    if c - lo < 1e-4 or 1.0 - c < 1e-4:
        warnings.warn(f"PPD weight c={c:.6g} is at a constraint bound", TailFitWarning, stacklevel=2)
    # the logistic map can round onto the open bounds
    while not -1.0 / tau < c:
        c = float(np.nextafter(c, 1.0))
    while not c < 1.0:
        c = float(np.nextafter(c, 0.0))
    return PpdParams(gamma=gamma, c=c, tau=tau)


_FITTERS = {Family.GPD: fit_gpd_mle, Family.PA: fit_pareto_hill, Family.PPD: fit_ppd_mle}


def exceedances_for(family: Family, s: Sample, u: float, k: int) -> np.ndarray:
    """Exceedances in the family's own coordinate: differences for GPD, ratios otherwise."""
    return relative_exceedances(s, u, k) if Family(family).relative else absolute_exceedances(s, u, k)


def fit_tail(
    s: Sample,
    family,
    alpha: Optional[float] = None,
    k: Optional[int] = None,
) -> TailFit:
    """Threshold the sample and fit ``family`` to its top ``k`` observations.

    Give either ``alpha`` (k = floor(alpha n)) or ``k`` directly.
    """
    family = Family(family)
    if (alpha is None) == (k is None):
        raise ValueError("give exactly one of alpha or k")
    if k is None:
        u, k = select_threshold(s, alpha, MIN_K[family])
    else:
        if k < MIN_K[family] or k >= s.n:
            raise InsufficientDataError(f"k={k} outside [{MIN_K[family]}, n-1] for n={s.n}")
        u = s.order_stat(s.n - k)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        exc = exceedances_for(family, s, u, k)
        params = _FITTERS[family](exc)
    diagnostics = tuple(str(w.message) for w in caught)
    return TailFit(
        family=family,
        params=params,
        u=u,
        k=k,
        n=s.n,
        loglik=dist.log_likelihood(family, params, exc),
        n_ties=k - exc.size,
        diagnostics=diagnostics,
    )
