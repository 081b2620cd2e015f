"""Monte Carlo oracle harness.

Every check produces :class:`McReport` rows with the rule
``pass <=> |statistic - target| <= k * tol``. For Monte Carlo rows ``tol`` is
the estimated standard error; for Kolmogorov-Smirnov rows it is the asymptotic
critical value at level ``alpha`` and ``k = 1``.

Each registered check draws from its own stream ``make_rng(seed, crc32(name))``,
so a row is reproducible from ``(name, seed, n)`` alone and the order in which
checks run does not matter.

Geometric compounds
-------------------
With G geometric on {1, 2, ...}, P(G = k) = p (1-p)^(k-1), the compound
sum of i.i.d. Z has transform p L_Z / (1 - (1-p) L_Z). Matching it to
L_X = 1 / (1 + psi(s)), psi the TPS(gamma, lam, theta) exponent, gives
L_Z = 1 / (1 + p psi(s)), so Z ~ TPL(gamma, p lam, 1, theta). For theta = 0 this
is the law of p^(1/gamma) X, which is the geometric strict stability of the
Mittag-Leffler law; for theta > 0 the scaled copy p^(1/gamma) X is
TPL(gamma, p lam, 1, theta p^(-1/gamma)) and the stability relation breaks.
"""

from __future__ import annotations

import csv
import math
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import special, stats

from .errors import ParameterError
from .laws import (
    GammaSS,
    LmlParams,
    NbParams,
    TmlParams,
    TplParams,
    TpsParams,
    gamma_cdf,
    gamma_laplace,
    lml_laplace,
    nb_laplace,
    tml_cdf,
    tml_laplace,
    tpl_cumulant,
    tpl_laplace,
    tps_laplace,
)
from .samplers import (
    _compound,
    make_rng,
    sample_gamma,
    sample_lml,
    sample_nb_increment,
    sample_positive_stable,
    sample_tml,
    sample_tpl,
    sample_tps,
)

Sampler = Callable[[np.random.Generator, int], np.ndarray]

DEFAULT_SEED = 20240611
DEFAULT_N = 100_000
QUICK_N = 10_000
S_GRID = (0.5, 1.0, 2.0)
KS_ALPHA = 0.01
# k = 4 above this many comparisons; a 4-SE band has two-sided level 6.3e-5,
# so 100 comparisons keep the family-wise false-alarm rate below 1%.
FAMILY_SIZE = 50
FAMILY_K = 4.0
TSV_FIELDS = ("name", "statistic", "target", "tol", "n", "pass", "seed")


@dataclass(frozen=True)
class McReport:
    """One comparison: ``passed`` iff ``|statistic - target| <= k * tol``."""

    name: str
    statistic: float
    target: float
    tol: float
    n: int
    passed: bool
    seed: int
    k: float = field(default=3.0, compare=False)

    @classmethod
    def build(cls, name, statistic, target, tol, n, seed, k=3.0) -> "McReport":
        ok = bool(abs(statistic - target) <= k * tol)
        return cls(name, float(statistic), float(target), float(tol), int(n), ok, int(seed), float(k))

    @property
    def z(self) -> float:
        """Deviation in units of ``tol``."""
        return abs(self.statistic - self.target) / self.tol if self.tol > 0 else math.inf

    def to_row(self) -> list[str]:
        return [
            self.name,
            f"{self.statistic:.17g}",
            f"{self.target:.17g}",
            f"{self.tol:.17g}",
            str(self.n),
            "pass" if self.passed else "fail",
            str(self.seed),
        ]


def stream_rng(name: str, seed: int) -> np.random.Generator:
    """Generator for the check ``name`` under master ``seed``."""
    return make_rng(seed, zlib.crc32(name.encode()))


def _se(values: np.ndarray) -> float:
    n = values.size
    # floor keeps degenerate (constant) samples comparable at rounding level
    return max(float(np.std(values, ddof=1)) / math.sqrt(n) if n > 1 else math.inf, 1e-15)


# ---------------------------------------------------------------- comparisons


def laplace_compare(
    name: str,
    sampler: Sampler,
    transform: Callable[[float], float],
    s_grid: Sequence[float] = S_GRID,
    n: int = DEFAULT_N,
    seed: int = DEFAULT_SEED,
    k: float = 3.0,
) -> list[McReport]:
    """Empirical mean of e^{-sX} against ``transform(s)`` at each s, SE = sd / sqrt(n)."""
    x = np.asarray(sampler(stream_rng(name, seed), n), dtype=float)
    out = []
    for s in s_grid:
        e = np.exp(-s * x)
        out.append(McReport.build(f"{name}@s={s:g}", e.mean(), float(transform(s)), _se(e), n, seed, k))
    return out


def moment_compare(
    name: str,
    sampler: Sampler,
    kappa1: float,
    kappa2: float,
    n: int = DEFAULT_N,
    seed: int = DEFAULT_SEED,
    k: float = 3.0,
) -> list[McReport]:
    """Sample mean and variance against the first two cumulants.

    The variance SE is sqrt((m4 - s^4) / n), m4 the central fourth moment.
    """
    x = np.asarray(sampler(stream_rng(name, seed), n), dtype=float)
    m = x.mean()
    v = x.var(ddof=1)
    m4 = np.mean((x - m) ** 4)
    se_v = max(math.sqrt(max(m4 - v * v, 0.0) / n), 1e-15)
    return [
        McReport.build(f"{name}/k1", m, kappa1, _se(x), n, seed, k),
        McReport.build(f"{name}/k2", v, kappa2, se_v, n, seed, k),
    ]


def ks_compare(name: str, samples, cdf: Callable, seed: int = DEFAULT_SEED, alpha: float = KS_ALPHA) -> McReport:
    """One-sample KS: statistic D, tol the asymptotic critical value, so pass iff p > alpha."""
    x = np.asarray(samples, dtype=float)
    d = stats.kstest(x, cdf, method="asymp").statistic
    crit = stats.kstwobign.isf(alpha) / math.sqrt(x.size)
    return McReport.build(name, d, 0.0, crit, x.size, seed, 1.0)


def ks2_compare(name: str, x, y, seed: int = DEFAULT_SEED, alpha: float = KS_ALPHA) -> McReport:
    """Two-sample KS with the asymptotic critical value sqrt((n+m)/(n m)) K_alpha."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = stats.ks_2samp(x, y, method="asymp").statistic
    crit = stats.kstwobign.isf(alpha) * math.sqrt((x.size + y.size) / (x.size * y.size))
    return McReport.build(name, d, 0.0, crit, min(x.size, y.size), seed, 1.0)


def ks_pvalue(report: McReport) -> float:
    """Asymptotic p-value of a KS row (``n`` is the effective sample size for two samples)."""
    return float(stats.kstwobign.sf(report.statistic * math.sqrt(report.n)))


# ---------------------------------------------------------------- g.i.d.


def geometric_compound(z_sampler: Sampler, p: float, rng: np.random.Generator, n: int) -> np.ndarray:
    """n draws of sum_{j <= G} Z_j with G geometric on {1, 2, ...} with mean 1/p."""
    g = rng.geometric(p, size=n)
    return _compound(g, lambda m: z_sampler(rng, m))


def gid_mc_check(
    gamma: float,
    lam: float,
    theta: float,
    p: float,
    n: int = DEFAULT_N,
    *,
    construction: str = "derived",
    s: float = 1.0,
    seed: int = DEFAULT_SEED,
    k: float = 3.0,
    name: str | None = None,
) -> McReport:
    """Empirical transform of a geometric compound against tpl_laplace(gamma, lam, 1, theta).

    ``construction="derived"`` sums Z ~ TPL(gamma, p lam, 1, theta), the law
    forced by 1 / L_X = 1 + psi. ``construction="scaled"`` sums p^(1/gamma) X_j
    with X_j ~ TPL(gamma, lam, 1, theta), the geometric strict stability
    relation; it agrees with the derived law only when theta = 0.
    """
    if not 0 < p < 1:
        raise ParameterError("p must lie in (0, 1)")
    target = TplParams(gamma, lam, 1.0, theta)
    if construction == "derived":
        z = TplParams(gamma, p * lam, 1.0, theta)

        def zs(rng, m):
            return sample_tpl(z, 1.0, rng, size=m)

    elif construction == "scaled":
        if not gamma > 0:
            raise ParameterError("the p^(1/gamma) scaling needs gamma > 0")
        scale = p ** (1.0 / gamma)

        def zs(rng, m):
            return scale * sample_tpl(target, 1.0, rng, size=m)

    else:
        raise ParameterError(f"unknown construction {construction!r}")
    name = name or f"gid/{construction}/g={gamma:g},l={lam:g},th={theta:g},p={p:g}"
    rng = stream_rng(name, seed)
    e = np.exp(-s * geometric_compound(zs, p, rng, n))
    return McReport.build(name, e.mean(), float(tpl_laplace(target, s)), _se(e), n, seed, k)


# ---------------------------------------------------------------- battery


LAW_SETS = {
    "tpl+": [(0.5, 1.0, 2.0, 1.0), (0.3, 0.2, 1.5, 1.0), (0.8, 3.0, 0.7, 2.0)],
    "tpl-": [(-1.0, 1.0, 1.0, 1.0), (-2.2, 10.0, 1.0, 0.5), (-0.5, 0.3, 2.0, 2.0)],
    "tps+": [(0.5, 1.0, 0.25), (0.3, 2.0, 1.5), (0.8, 0.5, 3.0)],
    "tps-": [(-1.0, 1.0, 1.0), (-2.5, 0.4, 0.5), (-0.4, 3.0, 2.0)],
    "lml": [(2.2, 0.1, 0.5), (0.7, 0.5, 1.2), (1.5, 0.0, 0.8)],
    "tml": [(0.7, 0.3, 1.0), (0.4, 1.0, 0.2), (0.9, 2.0, 0.0)],
    "nb": [(0.4, 2.0, 1.0, 0.0), (0.3, 1.5, 0.25, 0.7), (0.8, 1.0, 2.0, 0.5)],
    "gamma": [(1.0, 2.0), (2.5, 0.5), (0.3, 2.0)],
}

MOMENT_SETS = {
    "tpl+": [(0.5, 1.0, 2.0, 1.0), (0.3, 0.5, 3.0, 2.0), (0.8, 2.0, 0.5, 1.5)],
    "tpl-": [(-1.0, 1.0, 1.0, 2.0), (-2.2, 10.0, 1.0, 0.5), (-0.5, 0.3, 2.0, 2.0)],
}


def law_sampler(kind: str, params: tuple) -> tuple[Sampler, Callable[[float], float]]:
    """(sampler, transform) pair for a battery entry."""
    if kind in ("tpl+", "tpl-"):
        q = TplParams(*params)
        return (lambda rng, n: sample_tpl(q, 1.0, rng, size=n)), (lambda s: tpl_laplace(q, s))
    if kind in ("tps+", "tps-"):
        q = TpsParams(*params)
        return (lambda rng, n: sample_tps(q, 1.0, rng, size=n)), (lambda s: tps_laplace(q, s))
    if kind == "lml":
        q = LmlParams(*params)
        return (lambda rng, n: sample_lml(q, rng, size=n)), (lambda s: lml_laplace(q, s))
    if kind == "tml":
        q = TmlParams(*params)
        return (lambda rng, n: sample_tml(q, rng, size=n)), (lambda s: tml_laplace(q, s))
    if kind == "nb":
        q = NbParams(*params)
        return (lambda rng, n: sample_nb_increment(q, 1.0, rng, size=n)), (lambda s: nb_laplace(q, s))
    if kind == "gamma":
        q = GammaSS(*params)
        return (lambda rng, n: sample_gamma(q, rng, size=n)), (lambda s: gamma_laplace(q, s))
    raise ParameterError(f"unknown law {kind!r}")


def _levy_smirnov_cdf(x):
    # positive 1/2-stable with exponent s^(1/2): P(X <= x) = erfc(1 / (2 sqrt x))
    x = np.asarray(x, dtype=float)
    return special.erfc(0.5 / np.sqrt(np.maximum(x, 1e-300)))


class Check(NamedTuple):
    """A registered suite item; ``size`` is its number of comparisons."""

    name: str
    size: int
    run: Callable[[int, int, float], list[McReport]]
    control: bool = False


def _laplace_check(kind, params, name):
    sampler, transform = law_sampler(kind, params)
    return Check(name, len(S_GRID), lambda seed, n, k: laplace_compare(name, sampler, transform, S_GRID, n, seed, k))


def _moment_check(kind, params, name, shift=0.0):
    sampler, _ = law_sampler(kind, params)
    q = TplParams(*params)

    def run(seed, n, k):
        k1 = tpl_cumulant(q, 1).value * (1.0 + shift)
        return moment_compare(name, sampler, k1, tpl_cumulant(q, 2).value, n, seed, k)

    return Check(name, 2, run)


def _ks_check(name, sampler, cdf):
    return Check(name, 1, lambda seed, n, k: [ks_compare(name, sampler(stream_rng(name, seed), n), cdf, seed)])


def _gid_check(name, construction, gamma, lam, theta, p):
    def run(seed, n, k):
        return [gid_mc_check(gamma, lam, theta, p, n, construction=construction, seed=seed, k=k, name=name)]

    return Check(name, 1, run)


def registry(plant_defect: bool = False) -> list[Check]:
    """Regular checks followed by the negative controls (``control=True``)."""
    checks = []
    for kind, sets in LAW_SETS.items():
        for i, params in enumerate(sets):
            checks.append(_laplace_check(kind, params, f"laplace/{kind}/{i}"))
    for kind, sets in MOMENT_SETS.items():
        for i, params in enumerate(sets):
            checks.append(_moment_check(kind, params, f"moments/{kind}/{i}"))
    tml_exp = TmlParams(1.0, 1.0, 0.5)
    tml_gen = TmlParams(0.6, 0.8, 0.7)
    g = GammaSS(2.5, 1.5)
    checks += [
        _ks_check("ks/tml-exponential", lambda r, n: sample_tml(tml_exp, r, size=n), stats.expon(scale=1 / 1.5).cdf),
        _ks_check("ks/tml", lambda r, n: sample_tml(tml_gen, r, size=n), lambda x: tml_cdf(tml_gen, x)),
        _ks_check("ks/gamma", lambda r, n: sample_gamma(g, r, size=n), lambda x: gamma_cdf(g, x)),
        _ks_check("ks/stable-1/2", lambda r, n: sample_positive_stable(0.5, 1.0, r, size=n), _levy_smirnov_cdf),
        _gid_check("gid/mittag-leffler-scaled", "scaled", 0.6, 1.0, 0.0, 0.3),
        _gid_check("gid/tempered-derived", "derived", 0.6, 1.0, 1.0, 0.3),
        _gid_check("gid/minus-derived", "derived", -1.0, 1.0, 1.0, 0.3),
    ]
    checks += path_checks()
    if plant_defect:
        checks.append(_laplace_check_wrong("defect/tpl-wrong-theta", control=False))
    checks += [
        _laplace_check_wrong("control/tpl-wrong-theta", control=True),
        _moment_check("tpl+", MOMENT_SETS["tpl+"][0], "control/moments-shifted-mean", shift=0.05)._replace(control=True),
        _ks_check("control/ks-shifted-cdf", lambda r, n: sample_gamma(g, r, size=n), lambda x: gamma_cdf(g, x + 0.05))._replace(
            control=True
        ),
        _gid_check("control/gid-tempered-scaled", "scaled", 0.6, 1.0, 1.0, 0.3)._replace(control=True),
    ]
    return checks


def path_checks() -> list[Check]:
    """Marginal transforms of simulated processes: Levy (three representations), OU, Sato, multivariate."""
    from .mvtpl import MvTplParams, mv_exponent, mv_sample
    from .paths import OuConfig, Representation, SatoConfig, ou_paths, sato_paths, tpl_levy_paths

    out = []
    for q in (TplParams(-1.0, 1.0, 1.0, 1.0), TplParams(0.6, 1.0, 1.5, 0.8)):
        for rep in Representation:
            if rep is Representation.CPP_LML and q.gamma > 0:
                continue
            name = f"path/levy/{rep.value}/g={q.gamma:g}"
            sampler = lambda rng, n, q=q, rep=rep: tpl_levy_paths(q, [0.0, 0.5, 1.0], rep, rng, n)[:, -1]  # noqa: E731
            out.append(_laplace_check_from(name, sampler, lambda s, q=q: tpl_laplace(q, s)))
    ou = OuConfig(TplParams(0.7, 0.5, 2.0, 0.5), 2.0)
    out.append(
        _laplace_check_from(
            "path/ou-stationary",
            lambda rng, n: ou_paths(ou, np.linspace(0.0, 2.5, 11), rng, n)[:, -1],
            lambda s: tpl_laplace(ou.tpl, s),
        )
    )
    sato = SatoConfig(TplParams(0.6, 1.0, 1.5, 0.8), 0.7)
    out.append(
        _laplace_check_from(
            "path/sato-t2",
            lambda rng, n: sato_paths(sato, [0.0, 0.5, 1.0, 2.0], rng, n)[0][:, -1],
            lambda s: tpl_laplace(sato.marginal(2.0), s),
        )
    )
    mv = MvTplParams(((0.6, 1.0, 0.8), (-1.0, 2.0, 1.0)), 1.5, 0.3)
    vecs = ((0.5, 0.5), (1.0, 0.2), (0.3, 2.0))

    def mv_run(seed, n, k, name="path/mv-joint"):
        x = mv_sample(mv, 1.0, n, stream_rng(name, seed))
        rows = []
        for v in vecs:
            e = np.exp(-x @ np.asarray(v))
            tgt = math.exp(-mv_exponent(mv, np.asarray(v)))
            rows.append(McReport.build(f"{name}@s={v[0]:g},{v[1]:g}", e.mean(), tgt, _se(e), n, seed, k))
        return rows

    out.append(Check("path/mv-joint", len(vecs), mv_run))
    return out


def _laplace_check_from(name, sampler, transform):
    return Check(name, len(S_GRID), lambda seed, n, k: laplace_compare(name, sampler, transform, S_GRID, n, seed, k))


def _laplace_check_wrong(name, control):
    # sampler at theta = 1, transform at theta = 1.3
    right = TplParams(0.5, 1.0, 2.0, 1.0)
    wrong = right.replace(theta=1.3)
    sampler, _ = law_sampler("tpl+", (0.5, 1.0, 2.0, 1.0))
    run = lambda seed, n, k: laplace_compare(name, sampler, lambda s: tpl_laplace(wrong, s), S_GRID, n, seed, k)  # noqa: E731
    return Check(name, len(S_GRID), run, control)


# ---------------------------------------------------------------- suite


@dataclass(frozen=True)
class SuiteConfig:
    """Master seed, sample size, optional k override and planted-defect switch."""

    seed: int = DEFAULT_SEED
    n: int = DEFAULT_N
    k: float | None = None
    plant_defect: bool = False

    @classmethod
    def quick(cls, seed: int = DEFAULT_SEED, **kw) -> "SuiteConfig":
        return cls(seed=seed, n=QUICK_N, **kw)


class SuiteResult(NamedTuple):
    reports: list[McReport]
    controls: list[McReport]
    exit_code: int


def suite_k(checks: Sequence[Check]) -> float:
    """3, or 4 when the regular battery exceeds FAMILY_SIZE comparisons."""
    size = sum(c.size for c in checks if not c.control)
    return FAMILY_K if size > FAMILY_SIZE else 3.0


def run_suite(config: SuiteConfig | None = None) -> SuiteResult:
    """Run the registered battery.

    Exit code 0 iff every regular row passes and every negative control fails
    (the harness demonstrates its own power); 3 otherwise.
    """
    cfg = config or SuiteConfig()
    checks = registry(cfg.plant_defect)
    k = cfg.k if cfg.k is not None else suite_k(checks)
    reports, controls = [], []
    for c in checks:
        rows = c.run(cfg.seed, cfg.n, k)
        (controls if c.control else reports).extend(rows)
    ok = all(r.passed for r in reports) and all(_control_failed(controls, c.name) for c in checks if c.control)
    return SuiteResult(reports, controls, 0 if ok else 3)


def _control_failed(rows: Sequence[McReport], name: str) -> bool:
    # a control fails as required when at least one of its rows fails
    return any(not r.passed for r in rows if r.name == name or r.name.startswith(name + "@") or r.name.startswith(name + "/"))


def run_check(name: str, seed: int = DEFAULT_SEED, n: int = DEFAULT_N, k: float | None = None) -> list[McReport]:
    """Re-run one registered check by name."""
    checks = registry(plant_defect=name.startswith("defect/"))
    kk = k if k is not None else suite_k(checks)
    for c in checks:
        if c.name == name:
            return c.run(seed, n, kk)
    raise ParameterError(f"no registered check named {name!r}")


# ---------------------------------------------------------------- serialization


def write_report(reports: Sequence[McReport], target) -> str:
    """Tab-separated ``name statistic target tol n pass seed`` with a header; returns the text."""
    lines = ["\t".join(TSV_FIELDS)] + ["\t".join(r.to_row()) for r in reports]
    text = "\n".join(lines) + "\n"
    if target is not None:
        Path(target).write_text(text)
    return text


def read_report(source, k: float = 3.0) -> list[McReport]:
    """Inverse of :func:`write_report`; ``k`` is not serialized and is supplied by the caller."""
    with open(source, newline="") as fh:
        rows = list(csv.reader(fh, delimiter="\t"))
    if not rows or tuple(rows[0]) != TSV_FIELDS:
        raise ParameterError("report header must be: " + " ".join(TSV_FIELDS))
    out = []
    for row in rows[1:]:
        name, stat, tgt, tol, n, flag, seed = row
        out.append(McReport(name, float(stat), float(tgt), float(tol), int(n), flag == "pass", int(seed), k))
    return out
