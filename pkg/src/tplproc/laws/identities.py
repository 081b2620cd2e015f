"""Subordination and self-similarity identities as checkable residuals.

Each function evaluates both sides of a Laplace-exponent identity on a grid of
s values and returns the maximum absolute residual. The two sides are computed
by independent code paths (TPL exponent versus composition of the gamma / NB /
TPS exponents), so a floating-point-scale residual certifies the algebra.
"""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError
from .nb import gamma_exponent, nb_exponent
from .params import GammaSS, NbParams, Regime, TplParams, TpsParams
from .tpl import tpl_exponent, tpl_laplace
from .tps import tps_exponent

DEFAULT_GRID = np.geomspace(0.1, 10.0, 25)


def _grid(s):
    s = DEFAULT_GRID if s is None else np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ParameterError("s-grid must be >= 0")
    return s


def subordination_identity(p: TplParams, s_grid=None, variant: str = "standard") -> float:
    """Residual of phi_X = phi_Z o phi_Y.

    ``standard``: Z gamma with shape delta and rate 1, Y = TPS(gamma, lam, theta).
    ``equivalent``: Z gamma with shape delta and rate 1/lam, Y = TPS(gamma, 1, theta).
    """
    s = _grid(s_grid)
    if variant == "standard":
        z, y = GammaSS(p.delta, 1.0), p.tps
    elif variant == "equivalent":
        z, y = GammaSS.from_scale_shape(p.lam, p.delta), TpsParams(p.gamma, 1.0, p.theta)
    else:
        raise ParameterError(f"unknown variant {variant!r}")
    lhs = tpl_exponent(p, s)
    rhs = gamma_exponent(z, tps_exponent(y, s))
    return float(np.max(np.abs(lhs - rhs)))


def ss_identity(gamma, lam, delta, kappa, H, c, s_grid=None) -> float:
    """Residual of phi_{B^c}(phi_X(s)) = kappa log(1 + c^H lam s^gamma).

    X is the positive Linnik process PL(gamma, lam, delta) and
    B^c = NB(c^-H, kappa, 1/delta, kappa/delta).
    """
    if not c > 1:
        raise ParameterError("scaling factor c must be > 1")
    s = _grid(s_grid)
    x = TplParams(gamma, lam, delta, 0.0)
    b = NbParams(c ** (-H), kappa, 1.0 / delta, kappa / delta)
    lhs = nb_exponent(b, tpl_exponent(x, s))
    rhs = kappa * np.log1p(c**H * lam * s**gamma)
    return float(np.max(np.abs(lhs - rhs)))


def tpl_invariance_identity(p: TplParams, kappa, pi, s_grid=None) -> float:
    """Residual of phi_{B^pi}(phi_X(s)) = exponent of TPL(gamma, lam/pi, kappa, theta).

    B^pi = NB(pi, kappa, 1/delta, kappa/delta).
    """
    s = _grid(s_grid)
    b = NbParams(pi, kappa, 1.0 / p.delta, kappa / p.delta)
    lhs = nb_exponent(b, tpl_exponent(p, s))
    rhs = tpl_exponent(TplParams(p.gamma, p.lam / pi, kappa, p.theta), s)
    return float(np.max(np.abs(lhs - rhs)))


def nb_gamma_target(regime: Regime, gamma, theta, delta, pi) -> TplParams:
    """TPL law produced by NB-subordinating a gamma process with shape |gamma|, scale theta."""
    if regime is Regime.PLUS:
        return TplParams(gamma, theta**gamma / pi, delta, 1.0 / theta)
    return TplParams(gamma, theta**gamma * (1.0 / pi - 1.0), delta, 1.0 / theta)


def nb_gamma_subordinator(regime: Regime, delta, pi) -> NbParams:
    """NB(pi, delta, 1, delta) for PLUS, NB(pi, delta, 1, 0) for MINUS."""
    return NbParams(pi, delta, 1.0, delta if regime is Regime.PLUS else 0.0)


def nb_gamma_representation_identity(regime, gamma, theta, delta, pi, s_grid=None) -> float:
    """Residual of phi_B(phi_Z(s)) = TPL exponent, Z gamma with shape |gamma| and rate 1/theta.

    Only the sign of gamma selects the regime; ``regime`` must agree with it.
    """
    regime = Regime(regime) if not isinstance(regime, Regime) else regime
    if (gamma < 0) != (regime is Regime.MINUS):
        raise ParameterError("regime does not match the sign of gamma")
    s = _grid(s_grid)
    z = GammaSS(abs(gamma), 1.0 / theta)
    b = nb_gamma_subordinator(regime, delta, pi)
    lhs = nb_exponent(b, gamma_exponent(z, s))
    rhs = tpl_exponent(nb_gamma_target(regime, gamma, theta, delta, pi), s)
    return float(np.max(np.abs(lhs - rhs)))


def geometric_stability_check(p: TplParams, s_grid=None) -> float:
    """Residual of (1 - 1/L_X(s)) + phi_Y(s), Y = TPS(gamma, lam, theta), for delta = 1.

    A zero residual says the geometric-sum witness has exactly the TPS exponent.
    """
    if p.delta != 1.0:
        raise ParameterError("geometric infinite divisibility is established for delta = 1 only")
    s = _grid(s_grid)
    lhs = 1.0 - 1.0 / np.asarray(tpl_laplace(p, s))
    return float(np.max(np.abs(lhs + tps_exponent(p.tps, s))))


def tps_limit_residual(gamma, lam, theta, delta, s_grid=None) -> float:
    """max |L_{TPL(gamma, lam/delta, delta, theta)}(s) - exp(-phi_TPS(s))|.

    (1 + lam h / delta)^(-delta) -> exp(-lam h) as delta -> infinity.
    """
    s = _grid(s_grid)
    lhs = tpl_laplace(TplParams(gamma, lam / delta, delta, theta), s)
    rhs = np.exp(-np.asarray(tps_exponent(TpsParams(gamma, lam, theta), s)))
    return float(np.max(np.abs(lhs - rhs)))
