"""Semi-parametric distribution estimator: empirical body, fitted tail.

Below the threshold ``u = X_{n-k,n}`` the estimator is the empirical CDF of the
body observations; above it, ``1 - alpha * S(t(x))`` where ``S`` is the fitted
tail survival function, ``alpha = k/n`` and ``t(x)`` is ``x - u`` (GPD) or
``x / u`` (Pa, PPD).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import hyp2f1

from . import distributions as dist
from .distributions import Family
from .errors import DomainError, InconsistentFitError, InfiniteMeanError
from .tailfit import Sample, TailFit


def _require_finite_mean(fit: TailFit):
    if fit.params.gamma >= 1.0:
        raise InfiniteMeanError(
            f"{fit.family.value} tail has extreme value index {fit.params.gamma:.4g} >= 1; the mean is infinite"
        )


def tail_sf(fit: TailFit, x):
    """Survival of the tail law at data-unit points ``x >= u``."""
    x = np.asarray(x, dtype=float)
    if fit.family is Family.GPD:
        return dist.gpd_sf(np.maximum(x - fit.u, 0.0), fit.params)
    return dist.sf(fit.family, fit.params, np.maximum(x / fit.u, 1.0))


def tail_quantile(fit: TailFit, q):
    if fit.family is Family.GPD:
        return fit.u + dist.gpd_quantile(q, fit.params)
    return fit.u * dist.quantile(fit.family, fit.params, q)


def tail_sf_integrals(fit: TailFit) -> tuple[float, float]:
    """``(int_u^inf S, int_u^inf S^2)`` in data units."""
    _require_finite_mean(fit)
    p, u = fit.params, fit.u
    g = p.gamma
    if fit.family is Family.GPD:
        return p.sigma / (1.0 - g), p.sigma / (2.0 - g)
    if fit.family is Family.PA:
        return u * g / (1.0 - g), u * g / (2.0 - g)
    a = 1.0 / g
    c, t = p.c, p.tau
    i1 = (1.0 - c) / (a - 1.0) + c / (a + t - 1.0)
    i2 = (1.0 - c) ** 2 / (2 * a - 1.0) + 2 * c * (1.0 - c) / (2 * a + t - 1.0) + c**2 / (2 * a + 2 * t - 1.0)
    return u * i1, u * i2


def tail_mean(fit: TailFit) -> float:
    """``E[X | X > u]`` under the fitted tail law."""
    return fit.u + tail_sf_integrals(fit)[0]


def tail_upper_mean(fit: TailFit, r: float) -> float:
    """``E[X ; F_tail(X) > r]``: mean contribution of the tail mass above level ``r``."""
    _require_finite_mean(fit)
    if not 0.0 <= r < 1.0:
        raise DomainError(f"tail level must lie in [0, 1), got {r}")
    p, u = fit.params, fit.u
    g = p.gamma
    if fit.family is Family.GPD:
        z = float(dist.gpd_quantile(r, p))
        # above z the excess is again GPD with scale sigma + gamma z
        return (1.0 - r) * (u + z) + (1.0 - r) * (p.sigma + g * z) / (1.0 - g)
    y = float(dist.quantile(fit.family, p, r))
    if fit.family is Family.PA:
        return u * (1.0 - r) * y / (1.0 - g)
    a = 1.0 / g
    c, t = p.c, p.tau
    int_sf = (1.0 - c) * y ** (1.0 - a) / (a - 1.0) + c * y ** (1.0 - a - t) / (a + t - 1.0)
    return u * ((1.0 - r) * y + int_sf)


def tail_log_mean(fit: TailFit) -> float:
    """``E[log X | X > u]``; finite for every gamma > 0."""
    p, u = fit.params, fit.u
    g = p.gamma
    if fit.family is Family.PA:
        return math.log(u) + g
    if fit.family is Family.PPD:
        return math.log(u) + (1.0 - p.c) * g + p.c * g / (1.0 + g * p.tau)
    # int_0^inf S(z)/(u+z) dz reduces to a Gauss hypergeometric function
    b = g * u / p.sigma - 1.0
    return math.log(u) + g * float(hyp2f1(1.0, 1.0 / g, 1.0 + 1.0 / g, -b))


@dataclass(frozen=True)
class SemiParamCdf:
    """Composite CDF built from ``sample`` and an optional tail ``fit``.

    With ``fit=None`` there is no tail (k = 0) and the estimator is the
    empirical CDF of the whole sample.
    """

    sample: Sample
    fit: Optional[TailFit] = None

    def __post_init__(self):
        fit, s = self.fit, self.sample
        if fit is None:
            return
        if fit.n != s.n or not 1 <= fit.k < s.n:
            raise InconsistentFitError(f"fit for n={fit.n}, k={fit.k} does not match a sample of size {s.n}")
        if fit.u != s.order_stat(s.n - fit.k):
            raise InconsistentFitError(f"fit threshold {fit.u} differs from X_(n-k,n) = {s.order_stat(s.n - fit.k)}")

    @property
    def n(self) -> int:
        return self.sample.n

    @property
    def k(self) -> int:
        return 0 if self.fit is None else self.fit.k

    @property
    def alpha(self) -> float:
        return self.k / self.n

    @property
    def u(self) -> float:
        return self.sample.order_stat(self.n - self.k)

    @property
    def body(self) -> np.ndarray:
        return self.sample.values[: self.n - self.k]

    @property
    def method(self) -> str:
        return "NP" if self.fit is None else f"SP-{self.fit.family.value}"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        body = np.searchsorted(self.body, x, side="right") / self.n
        if self.fit is None:
            return body
        above = x > self.u
        tail = 1.0 - self.alpha * tail_sf(self.fit, np.where(above, x, self.u))
        return np.where(above, tail, body)

    def sf(self, x):
        """``1 - F(x)``, computed without cancellation in the tail."""
        x = np.asarray(x, dtype=float)
        body = (self.n - np.searchsorted(self.body, x, side="right")) / self.n
        if self.fit is None:
            return body
        above = x > self.u
        return np.where(above, self.alpha * tail_sf(self.fit, np.where(above, x, self.u)), body)

    def quantile(self, p):
        """Left-continuous inverse: ``X_{ceil(np),n}`` in the body, tail quantile above."""
        p = np.asarray(p, dtype=float)
        if np.any(~((p > 0) & (p < 1))):
            raise DomainError("quantile level must lie in (0, 1)")
        n, k = self.n, self.k
        # rounding keeps n * (1 - k/n) from ceiling to n - k + 1
        idx = np.ceil(np.round(n * p, 9)).astype(int)
        in_body = idx <= n - k
        out = self.sample.values[np.clip(idx, 1, n) - 1]
        if self.fit is None or np.all(in_body):
            return out[()] if out.ndim == 0 else out
        level = np.clip((p - (1.0 - self.alpha)) / self.alpha, 0.0, np.nextafter(1.0, 0.0))
        tail = tail_quantile(self.fit, np.where(in_body, 0.0, level))
        out = np.where(in_body, out, tail)
        return out[()] if out.ndim == 0 else out

    def body_sum(self) -> float:
        return float(np.sum(self.body))

    def mean(self) -> float:
        """Plug-in mean: body average plus ``alpha`` times the tail mean."""
        m = self.body_sum() / self.n
        if self.fit is None:
            return m
        if self.fit.family is Family.GPD:
            _require_finite_mean(self.fit)
            p = self.fit.params
            return m + self.k / self.n * (self.u + p.sigma / (1.0 - p.gamma))
        return m + self.alpha * tail_mean(self.fit)


def build_sp_cdf(s: Sample, fit: Optional[TailFit] = None) -> SemiParamCdf:
    return SemiParamCdf(s, fit)
