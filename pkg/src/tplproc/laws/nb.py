"""Gamma and lattice negative binomial subordinators."""

from __future__ import annotations

import math

import numpy as np
from scipy import stats

from ..errors import ParameterError
from .params import GammaSS, NbParams


def _out(a):
    return a if np.ndim(a) else float(a)


def _nonneg(s):
    s = np.asarray(s, dtype=float)
    if np.any(s < 0) or np.any(~np.isfinite(s)):
        raise ParameterError("Laplace argument must be finite and >= 0")
    return s


# ---------------------------------------------------------------- gamma


def gamma_exponent(p: GammaSS, s):
    """shape * log(1 + s / rate)."""
    return _out(p.shape * np.log1p(_nonneg(s) / p.rate))


def gamma_laplace(p: GammaSS, s):
    return _out(np.exp(-np.asarray(gamma_exponent(p, s))))


def gamma_pdf(p: GammaSS, x):
    return _out(stats.gamma.pdf(x, a=p.shape, scale=1.0 / p.rate))


def gamma_cdf(p: GammaSS, x):
    return _out(stats.gamma.cdf(x, a=p.shape, scale=1.0 / p.rate))


def gamma_levy_density(p: GammaSS, x):
    x = np.asarray(x, dtype=float)
    return _out(p.shape * np.exp(-p.rate * x) / x)


# ---------------------------------------------------------------- negative binomial


def nb_exponent(p: NbParams, s):
    """kappa log((1 - (1-pi) e^{-alpha s}) / pi) + mu s."""
    s = _nonneg(s)
    if p.pi == 1.0:
        return _out(p.mu * s)
    # 1 - (1-pi) e^{-alpha s} = pi + (1-pi)(1 - e^{-alpha s})
    inner = np.log1p((1.0 - p.pi) / p.pi * -np.expm1(-p.alpha * s))
    return _out(p.kappa * inner + p.mu * s)


def nb_laplace(p: NbParams, s):
    """(pi / (1 - (1-pi) e^{-alpha s}))^kappa e^{-mu s}."""
    return _out(np.exp(-np.asarray(nb_exponent(p, s))))


def nb_mean(p: NbParams, t: float = 1.0) -> float:
    """t (mu + alpha kappa (1-pi)/pi)."""
    return t * (p.mu + p.alpha * p.kappa * (1.0 - p.pi) / p.pi)


def log_pmf(q: float, k):
    """Logarithmic-series pmf q^k / (-k log(1-q)), k = 1, 2, ...

    The lattice jump J = alpha K of NB(pi, ., alpha, .) has K ~ log_pmf(1 - pi).
    """
    if not 0 < q < 1:
        raise ParameterError("logarithmic pmf needs q in (0, 1)")
    k = np.asarray(k)
    if np.any(k < 1):
        raise ParameterError("support is k >= 1")
    return _out(stats.logser.pmf(k, q))


def logarithmic_mean(q: float) -> float:
    return q / ((1.0 - q) * -math.log1p(-q))
