"""Random-variate generators for the TPL family and its building blocks.

Every sampler takes an explicit :class:`numpy.random.Generator` and an optional
``size``; with ``size=None`` a Python float is returned. Streams are derived
from ``(seed, stream_id)`` through :class:`numpy.random.SeedSequence`, so
distinct stream ids give independent streams and a fixed pair reproduces the
output byte for byte.

Standard variates (gamma, Poisson, logarithmic series, exponential) come from
numpy's Generator; the constructions specific to these laws are:

* positive stable: Kanter's trigonometric representation;
* tempered stable, gamma in (0, 1): exponential rejection on a stable proposal
  with acceptance probability exp(-theta S), after slicing the time so that each
  slice needs at most ``SLICE_BUDGET`` in t lam theta^gamma;
* tempered stable, gamma < 0: Poisson(t lam theta^gamma) gamma-distributed jumps;
* LML: logarithmic-gamma mixture. Expanding the transform,
  log(1 - c u^-a) / log(1 - q) = sum_k [q^k / (-k log(1-q))] (theta/u)^(a k),
  u = s + theta, q = c theta^-a, so the law is Gamma(a K, rate theta) with K
  logarithmic(q);
* TML: min(c^(-1/a) E1^(1/a) S_a, E2/theta) with S_a standard positive stable.
  The survival function of the first term is E[exp(-c x^a S_a^-a)] = E_a(-c x^a)
  (Mittag-Leffler moment generating function), the second contributes e^{-theta x}.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import interpolate, optimize

from .errors import DegradedAccuracyWarning, DomainError, ParameterError, ResourceError
from .laws import (
    GammaSS,
    LmlParams,
    NbParams,
    TmlParams,
    TplParams,
    TpsParams,
    constant_c,
    lml_pdf,
    tml_cdf,
)
from .laws.params import Regime

# Maximum t lam theta^gamma handled by one rejection slice; expected trials e^budget.
SLICE_BUDGET = 1.0
# Hard cap on a single slice, matching the e^30 trial guard.
MAX_SLICE_BUDGET = 30.0
# Refuse when the expected number of stable proposals per variate exceeds this.
MAX_TRIALS = 1e6


@dataclass(frozen=True)
class RngState:
    """Seed and stream id of a reproducible random stream."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        return make_rng(self.seed, self.stream_id)


def make_rng(seed: int, stream_id: int = 0) -> np.random.Generator:
    """PCG64 generator for the stream ``(seed, stream_id)``."""
    if seed < 0 or stream_id < 0:
        raise ParameterError("seed and stream id must be nonnegative")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream_id,))))


def _ret(x, size):
    return float(x) if size is None else x


def _shape(size):
    return () if size is None else size


# ---------------------------------------------------------------- standard variates


def sample_gamma(g: GammaSS, rng: np.random.Generator, size=None):
    """Gamma variates (numpy's Marsaglia-Tsang sampler, boosted for shape < 1)."""
    return _ret(rng.gamma(g.shape, 1.0 / g.rate, size=size), size)


def sample_logarithmic(q: float, rng: np.random.Generator, size=None):
    """Logarithmic-series variates, pmf q^k / (-k log(1-q)), k >= 1."""
    if not 0.0 < q < 1.0:
        raise ParameterError("logarithmic parameter must lie in (0, 1)")
    out = rng.logseries(q, size=size)
    return int(out) if size is None else out


def sample_positive_stable(gamma: float, lam: float, rng: np.random.Generator, size=None):
    """One-sided stable variates with Laplace transform exp(-lam s^gamma), 0 < gamma <= 1.

    Kanter: S = lam^(1/gamma) sin(gamma U) / sin(U)^(1/gamma) * (sin((1-gamma) U) / E)^((1-gamma)/gamma)
    with U uniform on (0, pi) and E standard exponential.
    """
    if not 0.0 < gamma <= 1.0:
        raise ParameterError("stable index must lie in (0, 1]")
    if not lam > 0:
        raise ParameterError("stable scale must be > 0")
    if gamma == 1.0:
        return _ret(np.full(_shape(size), float(lam)), size)
    u = rng.uniform(0.0, math.pi, size=size)
    e = rng.standard_exponential(size=size)
    s = np.sin(gamma * u) / np.sin(u) ** (1.0 / gamma) * (np.sin((1.0 - gamma) * u) / e) ** ((1.0 - gamma) / gamma)
    return _ret(lam ** (1.0 / gamma) * s, size)


def _stable_unit(gamma, n, rng):
    u = rng.uniform(0.0, math.pi, size=n)
    e = rng.standard_exponential(size=n)
    return np.sin(gamma * u) / np.sin(u) ** (1.0 / gamma) * (np.sin((1.0 - gamma) * u) / e) ** ((1.0 - gamma) / gamma)


# ---------------------------------------------------------------- tempered stable


def tps_slices(p: TpsParams, t, slice_budget: float = SLICE_BUDGET) -> np.ndarray:
    """Number of rejection slices per time so each slice has (t/m) lam theta^gamma <= budget."""
    if not 0 < slice_budget <= MAX_SLICE_BUDGET:
        raise ParameterError(f"slice budget must lie in (0, {MAX_SLICE_BUDGET}]")
    load = np.asarray(t, dtype=float) * p.lam * p.theta**p.gamma
    return np.maximum(1, np.ceil(load / slice_budget)).astype(np.int64)


def sample_tps(p: TpsParams, t, rng: np.random.Generator, size=None, *, slice_budget: float = SLICE_BUDGET):
    """Tempered stable variates with Laplace exponent t phi_Y(s).

    ``t`` may be an array (one variate per entry, ``size`` ignored) or a
    scalar. gamma = 1 is the deterministic drift lam t.

    Raises
    ------
    ResourceError
        If the expected number of stable proposals for one variate exceeds
        ``MAX_TRIALS``.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(~np.isfinite(t_arr)):
        raise ParameterError("time must be finite and >= 0")
    scalar_t = t_arr.ndim == 0
    if scalar_t:
        t_arr = np.full(_shape(size), float(t_arr))
    out_size = None if (scalar_t and size is None) else t_arr.shape
    flat = t_arr.ravel()
    g, lam, th = p.gamma, p.lam, p.theta

    if g == 1.0:
        res = lam * flat
    elif p.regime is Regime.MINUS:
        n = rng.poisson(flat * lam * th**g)
        res = rng.gamma(-g * n, 1.0 / th)  # shape 0 gives exactly 0
    elif th == 0.0:
        res = np.where(flat > 0, (lam * flat) ** (1.0 / g) * _stable_unit(g, flat.size, rng), 0.0)
    else:
        res = _tps_rejection(g, lam, th, flat, rng, slice_budget)
    res = res.reshape(t_arr.shape)
    return _ret(res, out_size)


def _tps_rejection(g, lam, th, t, rng, slice_budget):
    if not 0 < slice_budget <= MAX_SLICE_BUDGET:
        raise ParameterError(f"slice budget must lie in (0, {MAX_SLICE_BUDGET}]")
    load = t * lam * th**g
    m = np.maximum(1, np.ceil(load / slice_budget)).astype(np.int64)
    trials = m * np.exp(load / m)
    worst = float(np.max(trials, initial=0.0))
    if worst > MAX_TRIALS:
        raise ResourceError(
            f"tempered-stable rejection needs ~{worst:.3g} proposals per variate "
            f"(t lam theta^gamma = {float(np.max(load)):.3g}); cap is {MAX_TRIALS:.0e}"
        )
    owner = np.repeat(np.arange(t.size), m)
    scale = np.repeat((lam * t / m) ** (1.0 / g), m)
    vals = np.zeros(owner.size)
    pending = np.flatnonzero(scale > 0)
    while pending.size:
        s = scale[pending] * _stable_unit(g, pending.size, rng)
        ok = rng.uniform(size=pending.size) < np.exp(-th * s)
        vals[pending[ok]] = s[ok]
        pending = pending[~ok]
    return np.bincount(owner, weights=vals, minlength=t.size)


# ---------------------------------------------------------------- TPL


def sample_tpl(p: TplParams, t, rng: np.random.Generator, size=None, **kw):
    """TPL(gamma, lam, t delta, theta) variates: TPS(gamma, 1, theta) at a gamma(t delta, scale lam) time."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ParameterError("time must be >= 0")
    shape = t_arr.shape if t_arr.ndim else _shape(size)
    # numpy returns 0 for shape 0
    clock = rng.gamma(np.broadcast_to(t_arr * p.delta, shape), p.lam)
    out = sample_tps(TpsParams(p.gamma, 1.0, p.theta), np.asarray(clock), rng, **kw)
    if t_arr.ndim == 0 and size is None:
        return float(out)
    return np.asarray(out)


def sample_tpl_cpp(p: TplParams, t, rng: np.random.Generator, size=None):
    """MINUS-regime TPL variates as a compound Poisson sum of LML jumps.

    Rate t delta log(1 + lam theta^gamma), jumps LML(-gamma, c, theta).
    """
    if p.regime is not Regime.MINUS:
        raise ParameterError("the compound Poisson representation exists for gamma < 0 only")
    rate = t * p.delta * math.log1p(p.lam_theta_gamma)
    n = rng.poisson(rate, size=size)
    jumps = LmlParams(-p.gamma, constant_c(p), p.theta)
    return _ret(_compound(n, lambda k: sample_lml(jumps, rng, size=k)), size)


def nb_gamma_params(p: TplParams) -> tuple[NbParams, GammaSS]:
    """Subordinator NB and gamma-process pair whose composition is TPL(p).

    PLUS needs lam theta^gamma >= 1 and uses NB(pi, delta, 1, delta) with
    pi = 1/(lam theta^gamma); MINUS uses NB(pi, delta, 1, 0) with
    pi = 1/(1 + lam theta^gamma). The gamma process has shape |gamma| and rate theta.
    """
    ltg = p.lam_theta_gamma
    if p.regime is Regime.PLUS:
        if p.gamma == 1.0 or not ltg >= 1.0:
            raise ParameterError("NB-gamma representation in the PLUS regime needs lam theta^gamma >= 1 and gamma < 1")
        nb = NbParams(1.0 / ltg, p.delta, 1.0, p.delta)
    else:
        nb = NbParams(1.0 / (1.0 + ltg), p.delta, 1.0, 0.0)
    return nb, GammaSS(abs(p.gamma), p.theta)


def sample_tpl_nb_gamma(p: TplParams, t, rng: np.random.Generator, size=None):
    """TPL variates as a gamma process evaluated at a negative binomial time."""
    nb, z = nb_gamma_params(p)
    b = sample_nb_increment(nb, t, rng, size=size)
    return _ret(rng.gamma(z.shape * np.asarray(b), 1.0 / z.rate), size)


# ---------------------------------------------------------------- LML / TML


def _compound(n, draw):
    """Sum of n[i] i.i.d. draws for each i; ``draw(k)`` returns k variates."""
    n = np.asarray(n)
    total = int(n.sum())
    if total == 0:
        return np.zeros(n.shape)
    vals = draw(total)
    owner = np.repeat(np.arange(n.size), n.ravel())
    return np.bincount(owner, weights=vals, minlength=n.size).reshape(n.shape)


def sample_lml(p: LmlParams, rng: np.random.Generator, size=None, *, return_latent: bool = False):
    """LML(a, c, theta) variates.

    c > 0: exact mixture Gamma(a K, rate theta), K logarithmic(c theta^-a).
    c = 0: Gamma(a, rate theta), the limit law.
    c < 0: no positive mixture exists; inverse-cdf on a quadrature table, with
    a :class:`DegradedAccuracyWarning`.

    With ``return_latent`` (c > 0 only) the logarithmic mixing index K is
    returned alongside the variates.
    """
    if p.c > 0:
        k = rng.logseries(p.q, size=size)
        x = _ret(rng.gamma(p.a * k, 1.0 / p.theta), size)
        return (x, k) if return_latent else x
    if return_latent:
        raise ParameterError("latent mixing index exists for c > 0 only")
    if p.c == 0:
        return _ret(rng.gamma(p.a, 1.0 / p.theta, size=size), size)
    warnings.warn("LML with c < 0 is sampled by table inversion of a quadrature cdf", DegradedAccuracyWarning, stacklevel=2)
    inv = _lml_inverse_table(p)
    return _ret(inv(rng.uniform(size=size)), size)


def _lml_inverse_table(p: LmlParams, n_grid: int = 400):
    # tail bracket from the gamma-like decay e^{-theta x}; heuristic
    hi = (p.a + 40.0) / p.theta
    x = np.concatenate(([0.0], np.geomspace(1e-8 * hi, hi, n_grid)))
    pdf = np.concatenate(([0.0], np.asarray(lml_pdf(p, x[1:]))))
    # integrate the x^{a-1} singularity exactly on the first cell
    first = pdf[1] * x[1] / p.a
    cdf = np.concatenate(([0.0], first + np.concatenate(([0.0], np.cumsum(0.5 * (pdf[1:-1] + pdf[2:]) * np.diff(x[1:]))))))
    cdf /= cdf[-1]
    keep = np.concatenate(([True], np.diff(cdf) > 0))
    return interpolate.PchipInterpolator(cdf[keep], x[keep])


def sample_tml(p: TmlParams, rng: np.random.Generator, size=None, *, method: str = "exact"):
    """TML(a, c, theta) variates.

    ``method="exact"``: min(c^(-1/a) E1^(1/a) S_a, E2 / theta), see module notes.
    ``method="inverse"``: bracket and solve cdf(x) = u to 1e-10 (slow; one
    Mittag-Leffler evaluation per iteration).
    """
    if method == "exact":
        shp = _shape(size)
        a, c, th = p.a, p.c, p.theta
        with np.errstate(divide="ignore"):
            second = rng.standard_exponential(size=shp) / th if th > 0 else np.full(shp, np.inf)
        if c > 0:
            e1 = rng.standard_exponential(size=shp)
            st = _stable_unit(a, shp, rng) if a < 1 else np.ones(shp)
            first = c ** (-1.0 / a) * e1 ** (1.0 / a) * st
        else:
            first = np.full(shp, np.inf)
        return _ret(np.minimum(first, second), size)
    if method == "inverse":
        u = rng.uniform(size=size)
        out = np.array([_tml_invert(p, v) for v in np.ravel(u)]).reshape(np.shape(u))
        return _ret(out, size)
    raise ParameterError(f"unknown TML sampling method {method!r}")


def _tml_invert(p: TmlParams, u: float) -> float:
    hi = 1.0
    for _ in range(200):
        if tml_cdf(p, hi) > u:
            break
        hi *= 2.0
    else:
        raise DomainError("TML inverse-cdf bracketing failed")
    return optimize.brentq(lambda x: tml_cdf(p, x) - u, 0.0, hi, xtol=1e-14, rtol=1e-12, maxiter=200)


# ---------------------------------------------------------------- negative binomial


def sample_nb_increment(p: NbParams, t, rng: np.random.Generator, size=None):
    """NB increment over time t: mu t + alpha sum_{n <= N} K_n, N ~ Poisson(-kappa t log pi).

    ``t`` may be an array (one increment per entry, ``size`` ignored).
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(~np.isfinite(t_arr)):
        raise ParameterError("time must be finite and >= 0")
    shape = t_arr.shape if t_arr.ndim else _shape(size)
    scalar = t_arr.ndim == 0 and size is None
    t_b = np.broadcast_to(t_arr, shape)
    if p.pi == 1.0:
        k = np.zeros(shape)
    else:
        n = rng.poisson(p.jump_rate * t_b)
        q = 1.0 - p.pi
        k = _compound(np.asarray(n), lambda m: rng.logseries(q, size=m))
    out = p.mu * t_b + p.alpha * k
    return float(out) if scalar else out
