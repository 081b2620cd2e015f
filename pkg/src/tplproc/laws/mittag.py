"""Logarithmic and tempered Mittag-Leffler laws.

LML(a, c, theta) is the jump law of the compound Poisson TPL process in the
MINUS regime (a = -gamma, c from :func:`constant_c`). TML(a, c, theta) is the
jump law of the background driving noise of the TPL Ornstein-Uhlenbeck process.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from ..errors import ParameterError
from ..mlfun import mittag_leffler
from .params import LmlParams, TmlParams


def _out(a):
    return a if np.ndim(a) else float(a)


def _nonneg(s, what="Laplace argument"):
    s = np.asarray(s, dtype=float)
    if np.any(s < 0) or np.any(~np.isfinite(s)):
        raise ParameterError(f"{what} must be finite and >= 0")
    return s


# ---------------------------------------------------------------- LML


def lml_laplace(p: LmlParams, s):
    """log(1 - c (s+theta)^-a) / log(1 - c theta^-a); (theta/(theta+s))^a at c = 0."""
    s = _nonneg(s)
    if p.c == 0.0:
        return _out((p.theta / (p.theta + s)) ** p.a)
    num = np.log1p(-p.c * (s + p.theta) ** (-p.a))
    return _out(num / math.log1p(-p.q))


def lml_pdf(p: LmlParams, x):
    """n(a, c, theta) e^{-theta x} x^{a-1} E_{a,a+1}(c x^a)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ParameterError("x must be > 0")
    a, c, th, n = p.a, p.c, p.theta, p.norm_const

    def one(v):
        return n * v ** (a - 1.0) * mittag_leffler(c * v**a, a, a + 1.0, log_scale=th * v)

    return _out(np.array([one(v) for v in x.ravel()]).reshape(x.shape))


def lml_mean(p: LmlParams) -> float:
    """(a/theta) E[K] with K logarithmic(q): -a q / (theta (1-q) log(1-q))."""
    q = p.q
    if q == 0.0:
        return p.a / p.theta
    return -p.a * q / (p.theta * (1.0 - q) * math.log1p(-q))


def lml_cdf(p: LmlParams, x):
    """Distribution function by adaptive quadrature of :func:`lml_pdf` (about 1e-10)."""
    x = np.asarray(x, dtype=float)

    def one(v):
        if v <= 0:
            return 0.0
        val, _ = integrate.quad(lambda u: float(lml_pdf(p, u)), 0.0, v, epsabs=1e-13, epsrel=1e-11, limit=200)
        return min(val, 1.0)

    return _out(np.array([one(v) for v in x.ravel()]).reshape(x.shape))


# ---------------------------------------------------------------- TML


def tml_laplace(p: TmlParams, s):
    """(theta (s+theta)^(a-1) + c) / ((s+theta)^a + c)."""
    s = _nonneg(s)
    a, c, th = p.a, p.c, p.theta
    u = s + th
    with np.errstate(divide="ignore"):
        num = th * u ** (a - 1.0) if th > 0 else np.zeros_like(u)
    return _out((num + c) / (u**a + c))


def tml_sf(p: TmlParams, x):
    """Survival function e^{-theta x} E_a(-c x^a)."""
    x = _nonneg(x, "x")
    a, c, th = p.a, p.c, p.theta

    def one(v):
        if a == 1.0:
            return math.exp(-(th + c) * v)
        return math.exp(-th * v) * mittag_leffler(-c * v**a, a)

    return _out(np.array([one(v) for v in x.ravel()]).reshape(x.shape))


def tml_cdf(p: TmlParams, x):
    """1 - e^{-theta x} E_a(-c x^a)."""
    return _out(1.0 - np.asarray(tml_sf(p, x)))


def tml_pdf(p: TmlParams, x):
    """e^{-theta x} (theta E_a(-c x^a) + c x^{a-1} E_{a,a}(-c x^a))."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ParameterError("x must be > 0")
    a, c, th = p.a, p.c, p.theta

    def one(v):
        if a == 1.0:
            return (th + c) * math.exp(-(th + c) * v)
        z = -c * v**a
        first = th * mittag_leffler(z, a) if th > 0 else 0.0
        second = c * v ** (a - 1.0) * mittag_leffler(z, a, a) if c > 0 else 0.0
        return math.exp(-th * v) * (first + second)

    return _out(np.array([one(v) for v in x.ravel()]).reshape(x.shape))


def tml_mean(p: TmlParams) -> float:
    """theta^(a-1) / (theta^a + c), from -L'(0); inf when theta = 0."""
    if p.theta == 0.0:
        return math.inf
    return p.theta ** (p.a - 1.0) / (p.theta**p.a + p.c)
