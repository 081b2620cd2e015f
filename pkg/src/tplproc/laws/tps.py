"""Tempered positive stable (Tweedie) law: exponent, Levy density, density, potential."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy import integrate

from ..errors import DomainError, ParameterError, RegimeError
from ..mlfun import mittag_leffler
from .params import TpsParams

# relative size of the largest series term to the sum beyond which we switch to the integral
_SERIES_MAX_LOSS = 1e3


def tps_exponent(p: TpsParams, s):
    """Laplace exponent sgn(gamma) lam ((theta+s)^gamma - theta^gamma), s >= 0."""
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ParameterError("Laplace argument must be >= 0")
    g, lam, th = p.gamma, p.lam, p.theta
    if g == 1.0:
        out = lam * s
    elif th == 0.0:
        out = lam * s**g
    else:
        # expm1 form keeps precision for small s
        out = p.sign * lam * th**g * np.expm1(g * np.log1p(s / th))
    return out if out.ndim else float(out)


def tps_laplace(p: TpsParams, s):
    return np.exp(-np.asarray(tps_exponent(p, s)))


def tps_levy_density(p: TpsParams, x):
    """|gamma| lam e^{-theta x} x^{-gamma-1} / Gamma(1-gamma); zero at gamma = 1."""
    x = np.asarray(x, dtype=float)
    if p.gamma == 1.0:
        return np.zeros_like(x)
    g = p.gamma
    coef = abs(g) * p.lam / math.gamma(1.0 - g)
    return coef * np.exp(-p.theta * x) * x ** (-g - 1.0)


class SeriesInfo(NamedTuple):
    value: float
    n_terms: int
    tail_bound: float
    in_domain: bool
    method: str


def _stable_pdf_integral(x, g, lam):
    """Positive stable density (Laplace transform exp(-lam s^g)) by the Kanter-Zolotarev integral."""
    # scale to lam = 1
    sc = lam ** (1.0 / g)
    y = x / sc
    r = g / (1.0 - g)
    yr = y ** (-r)

    def a_fun(u):
        return (math.sin(g * u) / math.sin(u)) ** (1.0 / (1.0 - g)) * math.sin((1.0 - g) * u) / math.sin(g * u)

    def f(u):
        au = a_fun(u)
        return au * math.exp(-yr * au)

    val, _ = integrate.quad(f, 0.0, math.pi, epsabs=0.0, epsrel=1e-12, limit=400)
    return r * yr / y * val / math.pi / sc


def _stable_series(x, g, lam, tol=1e-14):
    """Pollard series sum_k (-1)^{k+1} z^k sin(pi k g) Gamma(1+k g) / (pi k! x), z = lam x^-g."""
    z = lam * x ** (-g)
    logz = math.log(z)
    terms, log_max = [], -math.inf
    bound = math.inf
    k = 1
    prev = None
    while k < 5000:
        lt = k * logz + math.lgamma(1.0 + k * g) - math.lgamma(k + 1.0)
        if lt > 700:
            raise DomainError("stable density series overflows")
        t = (-1) ** (k + 1) * math.exp(lt) * math.sin(math.pi * k * g)
        terms.append(t)
        log_max = max(log_max, lt)
        if prev is not None:
            ratio = math.exp(lt - prev)
            if ratio < 1.0:
                bound = math.exp(lt) * ratio / (1.0 - ratio)
                if bound <= tol * max(abs(math.fsum(terms)), 1e-300):
                    break
        prev = lt
        k += 1
    else:
        raise DomainError("stable density series did not converge")
    s = math.fsum(terms)
    loss = math.exp(log_max) / abs(s) if s != 0 else math.inf
    return s / (math.pi * x), k, bound / (math.pi * x), loss


def tps_pdf_series(p: TpsParams, x, *, full_output=False):
    """Density of TPS(gamma, lam, theta) for gamma in (0, 1).

    The untempered density is summed by its convergent series in lam x^-gamma;
    tempering multiplies by exp(-theta x + lam theta^gamma). When the series
    cancels badly (small x relative to lam^(1/gamma)) the Kanter-Zolotarev
    integral is used instead and the result is flagged ``in_domain=False``.
    """
    if not 0.0 < p.gamma < 1.0:
        raise RegimeError("tps_pdf_series needs gamma in (0, 1)")
    x = float(x)
    if not x > 0:
        raise ParameterError("x must be > 0")
    g, lam, th = p.gamma, p.lam, p.theta
    tilt = math.exp(-th * x + lam * th**g) if th > 0 else 1.0
    try:
        base, n, bound, loss = _stable_series(x, g, lam)
    except DomainError:
        base, n, bound, loss = math.nan, 0, math.inf, math.inf
    if loss <= _SERIES_MAX_LOSS:
        info = SeriesInfo(max(base, 0.0) * tilt, n, bound * tilt, True, "series")
    else:
        info = SeriesInfo(_stable_pdf_integral(x, g, lam) * tilt, n, math.nan, False, "integral")
    return info if full_output else info.value


def tps_pdf(p: TpsParams, x):
    """Vectorised :func:`tps_pdf_series`."""
    xx = np.asarray(x, dtype=float)
    out = np.array([tps_pdf_series(p, v) for v in xx.ravel()]).reshape(xx.shape)
    return out if out.ndim else float(out)


def tps_potential_density(p: TpsParams, q: float, x):
    """Density of the q-potential measure of the TPS Levy process, gamma in (0, 1].

    For lam = 1 this is e^{-theta x} x^{gamma-1} E_{gamma,gamma}((theta^gamma - q) x^gamma).
    A general lam follows from the transform 1/(q + lam h(s)) = (1/lam)/(q/lam + h(s)),
    so v^q_lam = v^{q/lam}_1 / lam.
    """
    if not p.gamma > 0:
        raise RegimeError("potential density is implemented for gamma in (0, 1]")
    if not q > 0:
        raise ParameterError("q must be > 0")
    g, th = p.gamma, p.theta
    qq = q / p.lam
    x = np.asarray(x, dtype=float)

    def one(v):
        if not v > 0:
            raise ParameterError("x must be > 0")
        if g == 1.0:
            return math.exp(-qq * v)
        arg = (th**g - qq) * v**g
        return v ** (g - 1.0) * mittag_leffler(arg, g, g, log_scale=th * v)

    out = np.array([one(v) for v in x.ravel()]).reshape(x.shape) / p.lam
    return out if out.ndim else float(out)


def levy_smirnov_pdf(x):
    """Closed-form density of the 1/2-stable law with transform exp(-s^(1/2))."""
    x = np.asarray(x, dtype=float)
    return 0.5 / math.sqrt(math.pi) * x**-1.5 * np.exp(-0.25 / x)


__all__ = [
    "tps_exponent",
    "tps_laplace",
    "tps_levy_density",
    "tps_pdf_series",
    "tps_pdf",
    "tps_potential_density",
    "levy_smirnov_pdf",
    "SeriesInfo",
]

