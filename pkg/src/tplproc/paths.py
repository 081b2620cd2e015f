"""Trajectories on time grids: TPL Levy, negative binomial, OU and Sato processes.

Batch generators (``*_paths``) return an ``(n_paths, len(grid))`` array and are
vectorised across paths; the single-path wrappers return a :class:`SamplePath`.

Sato process
------------
With k(x) = x u(x) the unit-time Levy density in self-decomposable form, the
law at time t has Levy density k(t^-H x)/x. Differentiating in t gives the
space-time jump intensity H tau^-1 (-k'(y)) dy dtau with jump size
x = tau^H y, and -k'/k(0+) is the TML(gamma, -c, theta) density. Away from
t = 0 the jumps therefore form a compound Poisson stream with
Poisson(H gamma delta log(t2/t1)) counts on (t1, t2], log-uniform jump times
and sizes tau^H Y, Y ~ TML. The first grid cell (0, t1] has infinitely many
jumps and is drawn directly from the known marginal law at t1, so the whole
scheme is exact in law. An optional ``eps`` removes jumps below eps and adds
their mean back as drift; the L1 error bound is reported with the path.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import integrate

from .errors import ParameterError
from .laws import (
    GammaSS,
    LmlParams,
    NbParams,
    TmlParams,
    TplParams,
    TpsParams,
    constant_c,
    gamma_exponent,
    tml_laplace,
    tpl_exponent,
    tpl_mean,
    tps_exponent,
)
from .laws.params import Regime
from .mlfun import mittag_leffler
from .samplers import (
    _compound,
    sample_lml,
    sample_nb_increment,
    sample_tml,
    sample_tpl,
    sample_tps,
)

# ---------------------------------------------------------------- containers


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing finite times starting at 0."""

    times: np.ndarray

    def __post_init__(self):
        t = np.array(self.times, dtype=float)
        if t.ndim != 1 or t.size < 1:
            raise ParameterError("time grid must be a nonempty 1-d sequence")
        if t[0] != 0.0:
            raise ParameterError("time grid must start at 0")
        if not np.all(np.isfinite(t)) or np.any(np.diff(t) <= 0):
            raise ParameterError("time grid must be finite and strictly increasing")
        t.setflags(write=False)
        object.__setattr__(self, "times", t)

    @classmethod
    def uniform(cls, t_max: float, steps: int) -> "TimeGrid":
        if not (t_max > 0 and steps >= 1):
            raise ParameterError("uniform grid needs t_max > 0 and steps >= 1")
        return cls(np.linspace(0.0, t_max, int(steps) + 1))

    @property
    def dt(self) -> np.ndarray:
        return np.diff(self.times)

    def __len__(self) -> int:
        return self.times.size


@dataclass(frozen=True)
class SamplePath:
    """Values of one trajectory on a grid; ``info`` carries run diagnostics."""

    grid: TimeGrid
    values: np.ndarray
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != self.grid.times.shape:
            raise ParameterError("values must match the grid length")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def to_csv(self, target=None) -> str:
        """Write ``t,value`` rows with 17 significant digits; returns the text."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "value"])
        for t, v in zip(self.grid.times, self.values):
            w.writerow([f"{t:.17g}", f"{v:.17g}"])
        text = buf.getvalue()
        if target is not None:
            Path(target).write_text(text)
        return text

    @classmethod
    def from_csv(cls, source) -> "SamplePath":
        rows = list(csv.reader(io.StringIO(Path(source).read_text())))
        if rows[0] != ["t", "value"]:
            raise ParameterError("expected header t,value")
        arr = np.array(rows[1:], dtype=float).reshape(-1, 2)
        return cls(TimeGrid(arr[:, 0]), arr[:, 1])


def _grid(grid) -> TimeGrid:
    return grid if isinstance(grid, TimeGrid) else TimeGrid(np.asarray(grid, dtype=float))


def _cumulate(increments: np.ndarray, x0=0.0) -> np.ndarray:
    n = increments.shape[0]
    out = np.empty((n, increments.shape[1] + 1))
    out[:, 0] = x0
    np.cumsum(increments, axis=1, out=out[:, 1:])
    out[:, 1:] += out[:, :1]
    return out


# ---------------------------------------------------------------- TPL Levy process


class Representation(enum.Enum):
    GAMMA_TPS = "gamma-tps"
    CPP_LML = "cpp-lml"
    NB_GAMMA = "nb-gamma"


def tpl_increments(p: TplParams, dt, representation, rng: np.random.Generator, *, pi: float = 0.5) -> np.ndarray:
    """Independent TPL(gamma, lam, delta dt, theta) increments, one per entry of ``dt``.

    GAMMA_TPS: TPS(gamma, 1, theta) at a gamma(delta dt, scale lam) time.
    CPP_LML: gamma < 0 only; Poisson(delta log(1 + lam theta^gamma) dt) jumps
    with LML(-gamma, c, theta) sizes.
    NB_GAMMA: theta > 0; B ~ NB(pi, delta, 1, delta) over dt, then a gamma time
    with shape B and scale lam pi, then TPS(gamma, 1, theta) at that time.
    Subordinating the TPL(gamma, lam pi, 1, theta) process by B gives
    TPL(gamma, lam, delta, theta) for every pi in (0, 1].
    """
    rep = Representation(representation)
    dt = np.asarray(dt, dtype=float)
    if rep is Representation.GAMMA_TPS:
        return np.asarray(sample_tpl(p, dt, rng))
    if rep is Representation.CPP_LML:
        if p.regime is not Regime.MINUS:
            raise ParameterError("CPP_LML representation requires gamma < 0")
        n = rng.poisson(p.delta * math.log1p(p.lam_theta_gamma) * dt)
        jumps = LmlParams(-p.gamma, constant_c(p), p.theta)
        return _compound(n, lambda k: sample_lml(jumps, rng, size=k))
    if not p.theta > 0:
        raise ParameterError("NB_GAMMA representation requires theta > 0")
    if not 0 < pi <= 1:
        raise ParameterError("pi must lie in (0, 1]")
    b = sample_nb_increment(NbParams(pi, p.delta, 1.0, p.delta), dt, rng)
    clock = rng.gamma(np.asarray(b), p.lam * pi)
    return np.asarray(sample_tps(TpsParams(p.gamma, 1.0, p.theta), clock, rng))


def tpl_levy_paths(p: TplParams, grid, representation, rng, n_paths: int = 1, *, pi: float = 0.5) -> np.ndarray:
    """``n_paths`` TPL Levy trajectories started at 0."""
    g = _grid(grid)
    dt = np.broadcast_to(g.dt, (n_paths, g.dt.size))
    return _cumulate(tpl_increments(p, dt, representation, rng, pi=pi).reshape(n_paths, -1))


def tpl_levy_path(p: TplParams, grid, representation, rng, *, pi: float = 0.5) -> SamplePath:
    g = _grid(grid)
    rep = Representation(representation)
    return SamplePath(g, tpl_levy_paths(p, g, rep, rng, 1, pi=pi)[0], {"representation": rep.value})


# ---------------------------------------------------------------- negative binomial


def nb_paths(p: NbParams, grid, rng, n_paths: int = 1) -> np.ndarray:
    g = _grid(grid)
    dt = np.broadcast_to(g.dt, (n_paths, g.dt.size))
    return _cumulate(np.asarray(sample_nb_increment(p, dt, rng)).reshape(n_paths, -1))


def nb_path(p: NbParams, grid, rng) -> SamplePath:
    """Negative binomial subordinator: drift mu t plus alpha-lattice jumps."""
    g = _grid(grid)
    return SamplePath(g, nb_paths(p, g, rng)[0])


# ---------------------------------------------------------------- OU process

STATIONARY = "stationary"


@dataclass(frozen=True)
class OuConfig:
    """OU process with TPL(gamma, lam, delta, theta) stationary law, gamma in (0, 1].

    ``x0`` is a starting value >= 0 or :data:`STATIONARY` for a draw from the
    stationary law. lam theta^gamma <= 1 is required; the boundary value gives
    c = 0 and exponential driver jumps.
    """

    tpl: TplParams
    alpha: float
    x0: float | str = STATIONARY

    def __post_init__(self):
        p = self.tpl
        if p.regime is not Regime.PLUS:
            raise ParameterError("OU driver needs gamma in (0, 1]")
        if p.lam_theta_gamma > 1.0 and not math.isclose(p.lam_theta_gamma, 1.0, rel_tol=1e-14):
            raise ParameterError(f"OU driver needs lam*theta^gamma <= 1 (got {p.lam_theta_gamma})")
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ParameterError("alpha must be > 0")
        if self.x0 != STATIONARY and not (isinstance(self.x0, (int, float)) and self.x0 >= 0):
            raise ParameterError("x0 must be >= 0 or STATIONARY")

    @property
    def jump_rate(self) -> float:
        """Driver intensity alpha delta gamma."""
        return self.alpha * self.tpl.delta * self.tpl.gamma

    @property
    def jump_law(self) -> TmlParams:
        """TML(gamma, -c, theta) jump sizes of the driver."""
        return TmlParams(self.tpl.gamma, max(-constant_c(self.tpl), 0.0), self.tpl.theta)


def ou_paths(cfg: OuConfig, grid, rng, n_paths: int = 1, *, euler: bool = False) -> np.ndarray:
    """OU trajectories X_{k+1} = e^{-alpha dt} X_k + sum_j e^{-alpha (t_{k+1} - tau_j)} U_j.

    The driver is compound Poisson, so the stochastic integral is exact on the
    grid. ``euler=True`` uses X_{k+1} = (1 - alpha dt) X_k + sum_j U_j instead.
    """
    g = _grid(grid)
    a = cfg.alpha
    if cfg.x0 == STATIONARY:
        x = np.asarray(sample_tpl(cfg.tpl, 1.0, rng, size=n_paths), dtype=float)
    else:
        x = np.full(n_paths, float(cfg.x0))
    out = np.empty((n_paths, len(g)))
    out[:, 0] = x
    law = cfg.jump_law
    for k, dt in enumerate(g.dt, start=1):
        n = rng.poisson(cfg.jump_rate * dt, size=n_paths)
        if euler:
            jumps = _compound(n, lambda m: sample_tml(law, rng, size=m))
            x = (1.0 - a * dt) * x + jumps
        else:
            # jump at uniform time u dt, discounted over the remaining (1 - u) dt
            jumps = _compound(n, lambda m: np.exp(-a * dt * rng.uniform(size=m)) * sample_tml(law, rng, size=m))
            x = math.exp(-a * dt) * x + jumps
        out[:, k] = x
    return out


def ou_path(cfg: OuConfig, grid, rng, *, euler: bool = False) -> SamplePath:
    g = _grid(grid)
    return SamplePath(g, ou_paths(cfg, g, rng, 1, euler=euler)[0], {"scheme": "euler" if euler else "exact"})


FIG1 = {"alpha": 25.0, "delta": 20.0, "lam": 0.5, "theta": 0.5, "gamma": 0.7, "t_max": 1.0, "steps": 1000}


def fig1_pair(seed: int, stream_id: int = 0, **overrides) -> tuple[SamplePath, SamplePath]:
    """Coupled stationary OU trajectories for gamma = 0.7 and gamma = 1.

    Both runs consume the same (seed, stream) generator from its start, so they
    share their random numbers up to the parameter-dependent transforms.
    """
    from .samplers import make_rng

    c = {**FIG1, **overrides}
    grid = TimeGrid.uniform(c["t_max"], int(c["steps"]))
    paths = []
    for gam in (c["gamma"], 1.0):
        cfg = OuConfig(TplParams(gam, c["lam"], c["delta"], c["theta"]), c["alpha"])
        paths.append(ou_path(cfg, grid, make_rng(seed, stream_id)))
    return paths[0], paths[1]


def ou_driver_exponent(cfg: OuConfig, s, form: str = "direct"):
    """Exponent of the background driving process.

    ``direct``: alpha delta gamma lam s (theta+s)^(gamma-1) / (1 + lam ((theta+s)^gamma - theta^gamma)).
    ``tml``: alpha delta gamma (1 - L_TML(s)), the compound Poisson form.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ParameterError("s must be >= 0")
    p = cfg.tpl
    if form == "direct":
        g, lam, th = p.gamma, p.lam, p.theta
        with np.errstate(divide="ignore", invalid="ignore"):
            u = th + s
            val = cfg.jump_rate * lam * s * u ** (g - 1.0) / (1.0 + lam * (u**g - th**g))
        val = np.where(s == 0, 0.0, val)
    elif form == "tml":
        val = cfg.jump_rate * (1.0 - np.asarray(tml_laplace(cfg.jump_law, s)))
    else:
        raise ParameterError(f"unknown form {form!r}")
    return val if np.ndim(val) else float(val)


def ou_k(cfg: OuConfig, x):
    """k(x) = gamma delta e^{-theta x} E_gamma(c x^gamma), the self-decomposable kernel."""
    p = cfg.tpl
    c = constant_c(p)
    x = np.asarray(x, dtype=float)

    def one(v):
        if v == 0:
            return p.gamma * p.delta
        if p.gamma == 1.0:
            return p.delta * math.exp(-v / p.lam)
        return p.gamma * p.delta * mittag_leffler(c * v**p.gamma, p.gamma, log_scale=p.theta * v)

    out = np.array([one(v) for v in x.ravel()]).reshape(x.shape)
    return out if out.ndim else float(out)


def ou_background_levy_density(cfg: OuConfig, x):
    """Driver Levy density -alpha k'(x).

    Term-wise differentiation gives d/dx E_g(c x^g) = c x^(g-1) E_{g,g}(c x^g), so
    -k'(x) = g delta e^{-theta x} (theta E_g(c x^g) - c x^(g-1) E_{g,g}(c x^g)).
    """
    p = cfg.tpl
    g, d, th = p.gamma, p.delta, p.theta
    c = constant_c(p)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ParameterError("x must be > 0")

    def one(v):
        if g == 1.0:
            return cfg.alpha * d / p.lam * math.exp(-v / p.lam)
        z = c * v**g
        e1 = mittag_leffler(z, g, log_scale=th * v)
        e2 = mittag_leffler(z, g, g, log_scale=th * v)
        return cfg.alpha * g * d * (th * e1 - c * v ** (g - 1.0) * e2)

    out = np.array([one(v) for v in x.ravel()]).reshape(x.shape)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------- Sato process


@dataclass(frozen=True)
class SatoConfig:
    """Self-similar additive process with unit-time law TPL(gamma, lam, delta, theta).

    ``eps=None`` gives the exact scheme; a positive ``eps`` drops jumps of size
    <= eps after the first grid cell and compensates their mean.
    """

    tpl: TplParams
    H: float
    eps: float | None = None

    def __post_init__(self):
        p = self.tpl
        if not 0 < p.gamma < 1:
            raise ParameterError("Sato construction needs gamma in (0, 1)")
        if p.lam_theta_gamma > 1.0 and not math.isclose(p.lam_theta_gamma, 1.0, rel_tol=1e-14):
            raise ParameterError(f"Sato jump law needs lam*theta^gamma <= 1 (got {p.lam_theta_gamma})")
        if not (math.isfinite(self.H) and self.H > 0):
            raise ParameterError("H must be > 0")
        if self.eps is not None and not self.eps > 0:
            raise ParameterError("eps must be > 0")

    def marginal(self, t: float) -> TplParams:
        """TPL(gamma, lam t^{H gamma}, delta, theta t^{-H}), the law at time t."""
        p = self.tpl
        return TplParams(p.gamma, p.lam * t ** (self.H * p.gamma), p.delta, p.theta * t ** (-self.H))

    @property
    def jump_law(self) -> TmlParams:
        return TmlParams(self.tpl.gamma, -constant_c(self.tpl), self.tpl.theta)


def _ou_like(cfg: SatoConfig) -> OuConfig:
    return OuConfig(cfg.tpl, 1.0)


def sato_small_jump_mean(cfg: SatoConfig, s: float, t: float) -> float:
    """Mean total size of jumps <= eps on (s, t]: int_0^eps k(t^-H x) - k(s^-H x) dx."""
    eps, H = cfg.eps, cfg.H
    ou = _ou_like(cfg)

    def kint(tt):
        # int_0^eps k(tt^-H x) dx = tt^H int_0^{eps tt^-H} k(y) dy
        up = eps * tt ** (-H)
        val, _ = integrate.quad(lambda y: ou_k(ou, y), 0.0, up, epsabs=1e-14, epsrel=1e-10, limit=200)
        return tt**H * val

    return kint(t) - kint(s)


def _sato_prepare(cfg: SatoConfig, g: TimeGrid):
    if len(g) < 2:
        return np.zeros(0), 0.0
    t = g.times
    if cfg.eps is None:
        return np.zeros(len(g) - 2), 0.0
    comp = np.array([sato_small_jump_mean(cfg, t[k], t[k + 1]) for k in range(1, len(g) - 1)])
    if comp.size:
        m1 = tpl_mean(cfg.tpl)
        inc_mean = m1 * (t[2:] ** cfg.H - t[1:-1] ** cfg.H)
        if cfg.eps > 0.1 * float(np.min(inc_mean)):
            raise ParameterError(
                f"eps={cfg.eps} exceeds 10% of the smallest increment mean ({float(np.min(inc_mean)):.3g})"
            )
    return comp, 2.0 * float(comp.sum())


def sato_paths(cfg: SatoConfig, grid, rng, n_paths: int = 1) -> tuple[np.ndarray, float]:
    """Sato trajectories and the L1 truncation bound (0 for the exact scheme)."""
    g = _grid(grid)
    comp, bound = _sato_prepare(cfg, g)
    out = np.zeros((n_paths, len(g)))
    if len(g) == 1:
        return out, bound
    t = g.times
    out[:, 1] = sample_tpl(cfg.marginal(t[1]), 1.0, rng, size=n_paths)
    rate = cfg.H * cfg.tpl.gamma * cfg.tpl.delta
    law = cfg.jump_law
    for k in range(1, len(g) - 1):
        t0, t1 = t[k], t[k + 1]
        n = rng.poisson(rate * math.log(t1 / t0), size=n_paths)

        def draw(m):
            tau = t0 * (t1 / t0) ** rng.uniform(size=m)
            x = tau**cfg.H * sample_tml(law, rng, size=m)
            return x if cfg.eps is None else np.where(x > cfg.eps, x, 0.0)

        out[:, k + 1] = out[:, k] + _compound(n, draw) + comp[k - 1]
    return out, bound


def sato_path(cfg: SatoConfig, grid, rng) -> SamplePath:
    g = _grid(grid)
    vals, bound = sato_paths(cfg, g, rng, 1)
    return SamplePath(g, vals[0], {"truncation_bound": bound, "eps": cfg.eps})


def sato_subordinated_identity(cfg: SatoConfig, s_grid, t_grid) -> float:
    """Max residual over (s, t) of phi_{X_t} = phi_Z(phi_{Y_t}) and phi_{X_t}(s) = phi_X(s t^H).

    Y_t ~ TPS(gamma, lam t^{H gamma}, theta t^{-H}), Z gamma with shape delta, rate 1.
    """
    s = np.asarray(s_grid, dtype=float)
    p = cfg.tpl
    z = GammaSS(p.delta, 1.0)
    res = 0.0
    for t in np.atleast_1d(np.asarray(t_grid, dtype=float)):
        m = cfg.marginal(t)
        lhs = np.asarray(tpl_exponent(m, s))
        sub = gamma_exponent(z, tps_exponent(TpsParams(p.gamma, m.lam, m.theta), s))
        scaled = np.asarray(tpl_exponent(p, s * t**cfg.H))
        res = max(res, float(np.max(np.abs(lhs - sub))), float(np.max(np.abs(lhs - scaled))))
    return res


def sato_large_scale_residual(cfg: SatoConfig, t: float, s_grid) -> float:
    """max |phi_{X_t}(s) - phi_PL(s)| with PL(gamma, lam t^{H gamma}, delta) the untempered law."""
    s = np.asarray(s_grid, dtype=float)
    m = cfg.marginal(t)
    pl = TplParams(m.gamma, m.lam, m.delta, 0.0)
    return float(np.max(np.abs(np.asarray(tpl_exponent(m, s)) - np.asarray(tpl_exponent(pl, s)))))
