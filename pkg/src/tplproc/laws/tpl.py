"""Tempered positive Linnik law: transform, exponent, density, Levy density, cumulants."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from scipy import stats

from ..errors import DomainError, ParameterError, RegimeError
from ..mlfun import mittag_leffler
from .params import Regime, TplParams
from .tps import tps_exponent


def _check_s(s):
    s = np.asarray(s, dtype=float)
    if np.any(s < 0) or np.any(~np.isfinite(s)):
        raise ParameterError("Laplace argument must be finite and >= 0")
    return s


def _out(a):
    return a if np.ndim(a) else float(a)


def tpl_exponent(p: TplParams, s):
    """Laplace exponent delta log(1 + sgn(gamma) lam ((theta+s)^gamma - theta^gamma))."""
    s = _check_s(s)
    return _out(p.delta * np.log1p(np.asarray(tps_exponent(p.tps, s))))


def tpl_laplace(p: TplParams, s):
    """Laplace transform (1 + sgn(gamma) lam ((theta+s)^gamma - theta^gamma))^(-delta)."""
    return _out(np.exp(-np.asarray(tpl_exponent(p, s))))


def constant_c(p: TplParams) -> float:
    """The constant ((lam theta^gamma - sgn gamma)/lam)^(sgn gamma).

    It is the Mittag-Leffler argument scale of the Levy density; it vanishes
    when lam theta^gamma = 1 and is negative for lam theta^gamma < 1 (PLUS).
    """
    base = (p.lam_theta_gamma - p.sign) / p.lam
    return base if p.sign > 0 else 1.0 / base


def tpl_point_mass(p: TplParams) -> float:
    """P(X = 0): (1 + lam theta^gamma)^(-delta) in the MINUS regime, 0 otherwise."""
    if p.regime is Regime.PLUS:
        return 0.0
    return (1.0 + p.lam_theta_gamma) ** (-p.delta)


def tpl_pdf(p: TplParams, x):
    """Density e^{-theta x} x^{gamma delta - 1} lam^{-delta} E^delta_{gamma,gamma delta}(c' x^gamma).

    with c' = (lam theta^gamma - 1)/lam. gamma = 1 is the gamma law with shape
    delta and scale lam. Raises :class:`RegimeError` for gamma < 0, where the
    law carries an atom at zero.
    """
    if p.regime is Regime.MINUS:
        raise RegimeError("TPL with gamma < 0 has an atom at 0 and no density")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ParameterError("x must be > 0")
    g, lam, d, th = p.gamma, p.lam, p.delta, p.theta
    if g == 1.0:
        return _out(stats.gamma.pdf(x, a=d, scale=lam))
    cc = (p.lam_theta_gamma - 1.0) / lam

    def one(v):
        logpre = (g * d - 1.0) * math.log(v) - d * math.log(lam)
        return math.exp(logpre) * mittag_leffler(cc * v**g, g, g * d, d, log_scale=th * v)

    return _out(np.array([one(v) for v in x.ravel()]).reshape(x.shape))


def levy_region_ok(p: TplParams) -> bool:
    """True where the Mittag-Leffler form of the Levy density is established."""
    if p.regime is Regime.MINUS or p.gamma == 1.0:
        return True
    return p.lam_theta_gamma < 1.0 or math.isclose(p.lam_theta_gamma, 1.0, rel_tol=1e-14)


def tpl_levy_density(p: TplParams, x):
    """Levy density |gamma| delta e^{-theta x}/x (E_{|gamma|}(c x^{|gamma|}) - 1{gamma<0}).

    In the MINUS regime the bracket is evaluated as c x^a E_{a,a+1}(c x^a), which
    avoids the cancellation in E_a - 1 near the origin. gamma = 1 gives the
    gamma-law density delta e^{-x/lam}/x. PLUS parameters with
    lam theta^gamma > 1 are refused.
    """
    if not levy_region_ok(p):
        raise DomainError(
            f"Levy density series is only established for lam*theta^gamma <= 1 (got {p.lam_theta_gamma})"
        )
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ParameterError("x must be > 0")
    d = p.delta
    if p.gamma == 1.0:
        return _out(d * np.exp(-x / p.lam) / x)
    a = abs(p.gamma)
    c = constant_c(p)
    minus = p.regime is Regime.MINUS

    def one(v):
        z = c * v**a
        if minus:
            br = z * mittag_leffler(z, a, a + 1.0, log_scale=p.theta * v)
        else:
            br = mittag_leffler(z, a, log_scale=p.theta * v)
        return a * d / v * br

    return _out(np.array([one(v) for v in x.ravel()]).reshape(x.shape))


def tpl_levy_mass(p: TplParams) -> float:
    """Total Levy mass delta log(1 + lam theta^gamma), finite in the MINUS regime only."""
    if p.regime is Regime.PLUS:
        return math.inf
    return p.delta * math.log1p(p.lam_theta_gamma)


# ---------------------------------------------------------------- cumulants


@dataclass(frozen=True)
class CumulantReport:
    n: int
    value: float
    regime: Regime


def cumulant_generator(gamma: float, n: int, regime: Regime) -> tuple[Polynomial, int]:
    """Rational form g_n(x) = P(x) / (1 - x)^m of the cumulant generating series.

    Recursion g_n = x |gamma| g'_{n-1} + n g_{n-1} from g_0 = 1/(1-x) (PLUS)
    or x/(1-x) (MINUS). The derivative of P/(1-x)^m is (P'(1-x) + m P)/(1-x)^{m+1},
    so each step is exact polynomial algebra.
    """
    a = abs(gamma)
    one_minus = Polynomial([1.0, -1.0])
    xpoly = Polynomial([0.0, 1.0])
    num = Polynomial([1.0]) if regime is Regime.PLUS else xpoly
    m = 1
    for k in range(1, n + 1):
        num = a * xpoly * (num.deriv() * one_minus + m * num) + k * num * one_minus
        m += 1
    return num, m


def cumulant_argument(p: TplParams) -> float:
    """Argument c theta^{-|gamma|} of the generating function (c theta^gamma when gamma < 0)."""
    return constant_c(p) * p.theta ** (-abs(p.gamma))


def tpl_cumulant(p: TplParams, n: int) -> CumulantReport:
    """n-th cumulant |gamma| delta theta^-n g_{n-1}(x) via the exact rational recursion.

    The rational closed form is the analytic continuation of the generating
    series and stays valid for every x < 1, which covers the whole PLUS
    parameter space (x = 1 - 1/(lam theta^gamma)) and the MINUS one
    (x in (0, 1)); only x = 1 itself, which cannot occur, is a pole.
    """
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise ParameterError("cumulant order must be an integer >= 1")
    if not p.theta > 0:
        raise ParameterError("cumulant recursion needs theta > 0")
    if p.gamma == 1.0:
        # gamma law: delta lam^n (n-1)!
        return CumulantReport(n, p.delta * p.lam**n * math.factorial(n - 1), p.regime)
    x = cumulant_argument(p)
    if not x < 1.0:
        raise DomainError(f"cumulant generating function has a pole at x={x}")
    num, m = cumulant_generator(p.gamma, n - 1, p.regime)
    g = num(x) / (1.0 - x) ** m
    return CumulantReport(n, abs(p.gamma) * p.delta / p.theta**n * g, p.regime)


def tpl_mean(p: TplParams) -> float:
    """|gamma| delta lam theta^(gamma-1)."""
    if p.gamma == 1.0:
        return p.delta * p.lam
    if p.theta == 0.0:
        return math.inf
    return abs(p.gamma) * p.delta * p.lam * p.theta ** (p.gamma - 1.0)


def tpl_variance(p: TplParams) -> float:
    """Variance E (1 - gamma)/theta + E^2/delta, from the second derivative of the exponent."""
    if p.gamma == 1.0:
        return p.delta * p.lam**2
    if p.theta == 0.0:
        return math.inf
    e = tpl_mean(p)
    return e * (1.0 - p.gamma) / p.theta + e * e / p.delta
