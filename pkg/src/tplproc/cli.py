"""Command-line front end.

Subcommands
-----------
``eval FUNCTION``     tabulate an analytic function
``sample LAW``        i.i.d. variates as CSV
``simulate PROCESS``  trajectories (tpl-levy, nb, ou, sato) or multivariate draws (mv)
``verify``            the Monte Carlo oracle suite

Configuration
-------------
``--config FILE`` reads a flat text file; each non-blank line that does not
start with ``#`` is ``key = value``, where ``key`` is a flag name of the chosen
subcommand without the leading dashes (``-`` and ``_`` are interchangeable)
and ``value`` is its text. Boolean flags take ``true`` or ``false``. Command
line flags override file entries, which override built-in defaults. Unknown
keys and flags are errors.

The default seed is read from the ``TPL_SEED`` environment variable.

Exit codes: 0 success, 1 validation error, 2 runtime or accuracy-domain error,
3 verification failure. Numbers are written with 17 significant digits.
"""

from __future__ import annotations

import argparse
import io
import os
import sys
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .errors import DomainError, ParameterError, ResourceError, TplError
from .laws import (
    GammaSS,
    LmlParams,
    NbParams,
    TmlParams,
    TplParams,
    TpsParams,
    gamma_laplace,
    lml_laplace,
    lml_pdf,
    nb_laplace,
    tml_cdf,
    tml_laplace,
    tml_pdf,
    tpl_cumulant,
    tpl_exponent,
    tpl_laplace,
    tpl_levy_density,
    tpl_mean,
    tpl_pdf,
    tpl_variance,
    tps_laplace,
    tps_levy_density,
    tps_pdf,
    tps_potential_density,
)
from .mlfun import mittag_leffler
from .samplers import (
    make_rng,
    sample_gamma,
    sample_lml,
    sample_nb_increment,
    sample_positive_stable,
    sample_tml,
    sample_tpl,
    sample_tps,
)

EXIT_OK, EXIT_VALIDATION, EXIT_RUNTIME, EXIT_VERIFY = 0, 1, 2, 3
DEFAULT_SEED = 12345


class UsageError(ParameterError):
    """Malformed command line or configuration file."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in str(text).split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("true", "1", "yes"):
        return True
    if t in ("false", "0", "no"):
        return False
    raise UsageError(f"expected true or false, got {text!r}")


def _env_seed() -> int:
    raw = os.environ.get("TPL_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"TPL_SEED must be an integer, got {raw!r}") from None


# ---------------------------------------------------------------- registries

# parameter groups: flag name -> (default, help)
TPL_FLAGS = {"gamma": (0.5, "index gamma"), "lam": (1.0, "scale lam"), "delta": (2.0, "shape delta"), "theta": (1.0, "tilt theta")}
TPS_FLAGS = {"gamma": (0.5, "index gamma"), "lam": (1.0, "scale lam"), "theta": (1.0, "tilt theta")}
ML_FLAGS = {"a": (0.7, "index a"), "c": (0.3, "parameter c"), "theta": (1.0, "tilt theta")}
NB_FLAGS = {"pi": (0.5, "success probability pi"), "kappa": (1.0, "kappa"), "alpha": (1.0, "lattice step alpha"), "mu": (0.0, "drift mu")}
GAMMA_FLAGS = {"shape": (2.0, "shape"), "rate": (1.0, "rate")}


def _tpl(ns) -> TplParams:
    return TplParams(ns.gamma, ns.lam, ns.delta, ns.theta)


def _tps(ns) -> TpsParams:
    return TpsParams(ns.gamma, ns.lam, ns.theta)


def _lml(ns) -> LmlParams:
    return LmlParams(ns.a, ns.c, ns.theta)


def _tml(ns) -> TmlParams:
    return TmlParams(ns.a, ns.c, ns.theta)


def _nb(ns) -> NbParams:
    return NbParams(ns.pi, ns.kappa, ns.alpha, ns.mu)


def _gamma(ns) -> GammaSS:
    return GammaSS(ns.shape, ns.rate)


class EvalFn:
    """An analytic function: parameter flags, argument flag (or None) and evaluator."""

    def __init__(self, flags: dict, arg: str | None, fn: Callable, help: str, extra: dict | None = None):
        self.flags = {**flags, **(extra or {})}
        self.arg = arg
        self.fn = fn
        self.help = help


EVAL_FUNCTIONS = {
    "mittag-leffler": EvalFn(
        {"a": (1.0, "order a"), "b": (1.0, "order b"), "c": (1.0, "Prabhakar parameter c")},
        "z",
        lambda ns, z: mittag_leffler(z, ns.a, ns.b, ns.c),
        "E^c_{a,b}(z)",
    ),
    "tpl-laplace": EvalFn(TPL_FLAGS, "s", lambda ns, s: tpl_laplace(_tpl(ns), s), "TPL Laplace transform"),
    "tpl-exponent": EvalFn(TPL_FLAGS, "s", lambda ns, s: tpl_exponent(_tpl(ns), s), "TPL Laplace exponent"),
    "tpl-pdf": EvalFn(TPL_FLAGS, "x", lambda ns, x: tpl_pdf(_tpl(ns), x), "TPL density"),
    "tpl-levy-density": EvalFn(TPL_FLAGS, "x", lambda ns, x: tpl_levy_density(_tpl(ns), x), "TPL Levy density"),
    "tpl-cumulant": EvalFn(
        TPL_FLAGS, None, lambda ns, _: tpl_cumulant(_tpl(ns), ns.n).value, "n-th TPL cumulant", {"n": (1, "order")}
    ),
    "tpl-mean": EvalFn(TPL_FLAGS, None, lambda ns, _: tpl_mean(_tpl(ns)), "TPL mean"),
    "tpl-variance": EvalFn(TPL_FLAGS, None, lambda ns, _: tpl_variance(_tpl(ns)), "TPL variance"),
    "tps-laplace": EvalFn(TPS_FLAGS, "s", lambda ns, s: tps_laplace(_tps(ns), s), "TPS Laplace transform"),
    "tps-pdf": EvalFn(TPS_FLAGS, "x", lambda ns, x: tps_pdf(_tps(ns), x), "TPS density"),
    "tps-levy-density": EvalFn(TPS_FLAGS, "x", lambda ns, x: tps_levy_density(_tps(ns), x), "TPS Levy density"),
    "tps-potential-density": EvalFn(
        TPS_FLAGS,
        "x",
        lambda ns, x: tps_potential_density(_tps(ns), ns.q, x),
        "q-potential density of the TPS process",
        {"q": (1.0, "killing rate q")},
    ),
    "lml-pdf": EvalFn({**ML_FLAGS, "a": (2.2, "index a"), "c": (0.1, "parameter c")}, "x", lambda ns, x: lml_pdf(_lml(ns), x), "LML density"),
    "lml-laplace": EvalFn(
        {**ML_FLAGS, "a": (2.2, "index a"), "c": (0.1, "parameter c")}, "s", lambda ns, s: lml_laplace(_lml(ns), s), "LML transform"
    ),
    "tml-cdf": EvalFn(ML_FLAGS, "x", lambda ns, x: tml_cdf(_tml(ns), x), "TML cdf"),
    "tml-pdf": EvalFn(ML_FLAGS, "x", lambda ns, x: tml_pdf(_tml(ns), x), "TML density"),
    "tml-laplace": EvalFn(ML_FLAGS, "s", lambda ns, s: tml_laplace(_tml(ns), s), "TML transform"),
    "nb-laplace": EvalFn(NB_FLAGS, "s", lambda ns, s: nb_laplace(_nb(ns), s), "NB Laplace transform at unit time"),
    "gamma-laplace": EvalFn(GAMMA_FLAGS, "s", lambda ns, s: gamma_laplace(_gamma(ns), s), "gamma Laplace transform"),
}

SAMPLE_LAWS = {
    "tpl": (TPL_FLAGS, lambda ns, rng: sample_tpl(_tpl(ns), 1.0, rng, size=ns.n)),
    "tps": (TPS_FLAGS, lambda ns, rng: sample_tps(_tps(ns), 1.0, rng, size=ns.n)),
    "lml": ({**ML_FLAGS, "a": (2.2, "index a"), "c": (0.1, "parameter c")}, lambda ns, rng: sample_lml(_lml(ns), rng, size=ns.n)),
    "tml": (ML_FLAGS, lambda ns, rng: sample_tml(_tml(ns), rng, size=ns.n)),
    "nb": (NB_FLAGS, lambda ns, rng: sample_nb_increment(_nb(ns), 1.0, rng, size=ns.n)),
    "gamma": (GAMMA_FLAGS, lambda ns, rng: sample_gamma(_gamma(ns), rng, size=ns.n)),
    "stable": (
        {"gamma": (0.5, "index gamma"), "lam": (1.0, "scale lam")},
        lambda ns, rng: sample_positive_stable(ns.gamma, ns.lam, rng, size=ns.n),
    ),
}


# ---------------------------------------------------------------- parser


def _add_flags(p: argparse.ArgumentParser, flags: dict):
    for name, (default, help_) in flags.items():
        kind = type(default)
        p.add_argument(f"--{name}", type=kind, default=default, help=f"{help_} (default {default})")


def _add_common(p: argparse.ArgumentParser, seed=True, out=True):
    p.add_argument("--config", type=str, default=None, help="flat key = value configuration file")
    if seed:
        p.add_argument("--seed", type=int, default=None, help="master seed (default: TPL_SEED or 12345)")
        p.add_argument("--stream", type=int, default=0, help="stream id under the seed")
    if out:
        p.add_argument("--out", type=str, default=None, help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="tplproc", description="Tempered positive Linnik laws and processes.")
    top.add_argument("--version", action="version", version=f"tplproc {__version__}")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("eval", help="tabulate an analytic function")
    evs = ev.add_subparsers(dest="function", required=True, parser_class=_Parser)
    for name, spec in EVAL_FUNCTIONS.items():
        p = evs.add_parser(name, help=spec.help)
        _add_flags(p, spec.flags)
        if spec.arg is not None:
            p.add_argument(f"--{spec.arg}", type=_floats, default="1", help="comma-separated argument values")
        _add_common(p, seed=False)
        p.set_defaults(_leaf=p, _run=_cmd_eval)

    sa = sub.add_parser("sample", help="i.i.d. variates of a law")
    sas = sa.add_subparsers(dest="law", required=True, parser_class=_Parser)
    for name, (flags, _) in SAMPLE_LAWS.items():
        p = sas.add_parser(name, help=f"{name} variates")
        _add_flags(p, flags)
        p.add_argument("--n", dest="n", type=int, default=1000, help="number of variates")
        _add_common(p)
        p.set_defaults(_leaf=p, _run=_cmd_sample)

    si = sub.add_parser("simulate", help="process trajectories and ensembles")
    sis = si.add_subparsers(dest="process", required=True, parser_class=_Parser)
    _simulate_parsers(sis)

    ve = sub.add_parser("verify", help="run the Monte Carlo oracle suite")
    ve.add_argument("--quick", action="store_true", help="n = 10^4 per check")
    ve.add_argument("--n", type=int, default=None, help="draws per check (default 10^5)")
    ve.add_argument("--k", type=float, default=None, help="override the SE multiplier")
    ve.add_argument("--plant-defect", action="store_true", help="add a deliberately wrong law to the battery")
    ve.add_argument("--report", type=str, default=None, help="TSV report path (default stdout)")
    _add_common(ve, out=False)
    ve.set_defaults(_leaf=ve, _run=_cmd_verify)
    return top


def _grid_flags(p):
    p.add_argument("--t-max", type=float, default=None, help="horizon (default 1)")
    p.add_argument("--steps", type=int, default=None, help="number of grid steps (default 100, fig1 preset 1000)")
    p.add_argument("--n-paths", type=int, default=1, help="number of trajectories")
    p.add_argument("--svg", type=str, default=None, help="also write an SVG rendering")


def _simulate_parsers(sis):
    p = sis.add_parser("tpl-levy", help="TPL Levy subordinator")
    _add_flags(p, TPL_FLAGS)
    p.add_argument("--representation", choices=["gamma-tps", "cpp-lml", "nb-gamma"], default="gamma-tps")
    p.add_argument("--nb-pi", type=float, default=0.5, help="pi of the NB-gamma representation")
    _grid_flags(p)

    p2 = sis.add_parser("nb", help="negative binomial process")
    _add_flags(p2, NB_FLAGS)
    _grid_flags(p2)

    p3 = sis.add_parser("ou", help="OU process with TPL stationary law")
    _add_flags(p3, TPL_FLAGS)
    p3.add_argument("--ou-alpha", type=float, default=1.0, help="mean-reversion rate")
    p3.add_argument("--x0", type=str, default="stationary", help="start value or 'stationary'")
    p3.add_argument("--euler", action="store_true", help="Euler scheme instead of the exact one")
    p3.add_argument("--preset", choices=["fig1"], default=None, help="coupled gamma = 0.7 / 1 pair")
    _grid_flags(p3)

    p4 = sis.add_parser("sato", help="self-similar additive process")
    _add_flags(p4, {**TPL_FLAGS, "theta": (0.5, "tilt theta")})
    p4.add_argument("--H", type=float, default=0.5, help="self-similarity exponent")
    p4.add_argument("--eps", type=float, default=None, help="small-jump truncation level")
    _grid_flags(p4)

    p5 = sis.add_parser("mv", help="multivariate TPL draws at time t")
    p5.add_argument("--gammas", type=_floats, default="0.5,0.5", help="comma list (use --gammas=-1,-1 for negatives)")
    p5.add_argument("--lams", type=_floats, default="1,1")
    p5.add_argument("--thetas", type=_floats, default="1,1")
    p5.add_argument("--delta", type=float, default=1.0)
    p5.add_argument("--pi", type=float, default=0.5)
    p5.add_argument("--t", type=float, default=1.0, help="time")
    p5.add_argument("--n", type=int, default=None, help="number of draws (default 1000, fig2 preset 5000)")
    p5.add_argument("--preset", choices=["fig2"], default=None, help="5000 bivariate draws of the reference set")
    p5.add_argument("--svg", type=str, default=None, help="also write an SVG scatter")
    for q in (p, p2, p3, p4, p5):
        _add_common(q)
        q.set_defaults(_leaf=q, _run=_cmd_simulate)


# ---------------------------------------------------------------- config


def read_config(path) -> dict[str, str]:
    """Parse the flat ``key = value`` grammar; keys are normalised to flag dests."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (t.strip() for t in line.split("=", 1))
        key = key.replace("-", "_")
        if not key:
            raise UsageError(f"{path}:{lineno}: empty key")
        if key in out:
            raise UsageError(f"{path}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _apply_config(parser, argv, ns):
    leaf = ns._leaf
    values = read_config(ns.config)
    actions = {a.dest: a for a in leaf._actions if a.dest not in ("help", "config")}
    unknown = sorted(set(values) - set(actions))
    if unknown:
        raise UsageError(f"unknown configuration keys: {', '.join(unknown)}")
    defaults = {}
    for key, value in values.items():
        a = actions[key]
        if isinstance(a, argparse._StoreTrueAction):
            defaults[key] = _bool(value)
        elif a.choices is not None and value not in a.choices:
            raise UsageError(f"{key}: invalid choice {value!r}")
        else:
            defaults[key] = value
    leaf.set_defaults(**defaults)
    return parser.parse_args(argv)


def parse(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    ns = parser.parse_args(argv)
    if getattr(ns, "config", None):
        ns = _apply_config(parser, argv, ns)
    if hasattr(ns, "seed") and ns.seed is None:
        ns.seed = _env_seed()
    return ns


# ---------------------------------------------------------------- output


def _emit(text: str, out: str | None, stdout):
    if out is None:
        stdout.write(text)
    else:
        Path(out).write_text(text)


def _csv(header: Sequence[str], columns: Sequence[np.ndarray]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    if columns:
        for row in zip(*columns):
            buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def render_svg(series: Sequence[tuple], kind: str = "line", title: str = "") -> str:
    """Static 800x600 SVG with axes; ``series`` holds (x, y, label) triples."""
    w, h, m = 800, 600, 60
    xs = np.concatenate([np.asarray(s[0], dtype=float) for s in series]) if series else np.zeros(1)
    ys = np.concatenate([np.asarray(s[1], dtype=float) for s in series]) if series else np.zeros(1)
    fin = np.isfinite(xs) & np.isfinite(ys)
    x0, x1 = (float(xs[fin].min()), float(xs[fin].max())) if fin.any() else (0.0, 1.0)
    y0, y1 = (float(ys[fin].min()), float(ys[fin].max())) if fin.any() else (0.0, 1.0)
    x1 = x1 if x1 > x0 else x0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0

    def px(x):
        return m + (np.asarray(x, dtype=float) - x0) / (x1 - x0) * (w - 2 * m)

    def py(y):
        return h - m - (np.asarray(y, dtype=float) - y0) / (y1 - y0) * (h - 2 * m)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
        f'<line x1="{m}" y1="{h - m}" x2="{w - m}" y2="{h - m}" stroke="black"/>',
        f'<line x1="{m}" y1="{m}" x2="{m}" y2="{h - m}" stroke="black"/>',
        f'<text x="{m}" y="{h - m + 20}" font-size="12">{x0:.4g}</text>',
        f'<text x="{w - m}" y="{h - m + 20}" font-size="12" text-anchor="end">{x1:.4g}</text>',
        f'<text x="{m - 5}" y="{h - m}" font-size="12" text-anchor="end">{y0:.4g}</text>',
        f'<text x="{m - 5}" y="{m + 4}" font-size="12" text-anchor="end">{y1:.4g}</text>',
    ]
    if title:
        parts.append(f'<text x="{w / 2:.0f}" y="{m / 2:.0f}" font-size="14" text-anchor="middle">{title}</text>')
    for i, (x, y, label) in enumerate(series):
        col = _COLORS[i % len(_COLORS)]
        X, Y = px(x), py(y)
        if kind == "line":
            pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(X, Y))
            parts.append(f'<polyline fill="none" stroke="{col}" stroke-width="1" points="{pts}"/>')
        else:
            parts += [f'<circle cx="{a:.2f}" cy="{b:.2f}" r="1.5" fill="{col}"/>' for a, b in zip(X, Y)]
        parts.append(f'<text x="{w - m}" y="{m + 16 * (i + 1)}" font-size="12" fill="{col}" text-anchor="end">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------- commands


def _cmd_eval(ns, stdout) -> int:
    spec = EVAL_FUNCTIONS[ns.function]
    if spec.arg is None:
        _emit(_fmt(spec.fn(ns, None)) + "\n", ns.out, stdout)
        return EXIT_OK
    args = getattr(ns, spec.arg)
    vals = [float(spec.fn(ns, a)) for a in args]
    if len(vals) == 1:
        text = _fmt(vals[0]) + "\n"
    else:
        text = _csv([spec.arg, "value"], [np.asarray(args), np.asarray(vals)])
    _emit(text, ns.out, stdout)
    return EXIT_OK


def _cmd_sample(ns, stdout) -> int:
    if ns.n < 0:
        raise ParameterError("n must be >= 0")
    _, draw = SAMPLE_LAWS[ns.law]
    rng = make_rng(ns.seed, ns.stream)
    x = np.asarray(draw(ns, rng), dtype=float).reshape(-1) if ns.n > 0 else np.zeros(0)
    _emit(_csv(["x"], [x]), ns.out, stdout)
    return EXIT_OK


def _paths_csv(grid, paths: np.ndarray) -> str:
    cols = [grid.times] + [paths[i] for i in range(paths.shape[0])]
    return _csv(["t"] + [f"path{i}" for i in range(paths.shape[0])], cols)


def _cmd_simulate(ns, stdout) -> int:
    from .mvtpl import FIG2, MvTplParams, fig2_scenario, mv_sample
    from .paths import (
        STATIONARY,
        OuConfig,
        Representation,
        SatoConfig,
        TimeGrid,
        fig1_pair,
        nb_paths,
        ou_paths,
        sato_paths,
        tpl_levy_paths,
    )

    rng = make_rng(ns.seed, ns.stream)
    proc = ns.process
    if proc == "mv":
        n = ns.n if ns.n is not None else (5000 if ns.preset == "fig2" else 1000)
        if n < 0:
            raise ParameterError("n must be >= 0")
        if ns.preset == "fig2":
            x = fig2_scenario(rng, n).samples
            p = FIG2
        else:
            if not (len(ns.gammas) == len(ns.lams) == len(ns.thetas)):
                raise ParameterError("gammas, lams and thetas must have equal length")
            p = MvTplParams(tuple(zip(ns.gammas, ns.lams, ns.thetas)), ns.delta, ns.pi)
            x = mv_sample(p, ns.t, n, rng)
        _emit(_csv([f"x{i + 1}" for i in range(p.d)], [x[:, i] for i in range(p.d)]), ns.out, stdout)
        if ns.svg and p.d >= 2:
            Path(ns.svg).write_text(render_svg([(x[:, 0], x[:, 1], "draws")], "scatter", "multivariate TPL"))
        return EXIT_OK

    if ns.n_paths < 1:
        raise ParameterError("n-paths must be >= 1")
    fig1 = proc == "ou" and ns.preset == "fig1"
    t_max = ns.t_max if ns.t_max is not None else 1.0
    steps = ns.steps if ns.steps is not None else (1000 if fig1 else 100)
    grid = TimeGrid.uniform(t_max, steps)
    if fig1:
        a, b = fig1_pair(ns.seed, ns.stream, t_max=t_max, steps=steps)
        text = _csv(["t", "gamma_0.7", "gamma_1"], [a.grid.times, a.values, b.values])
        _emit(text, ns.out, stdout)
        if ns.svg:
            series = [(a.grid.times, a.values, "gamma = 0.7"), (b.grid.times, b.values, "gamma = 1")]
            Path(ns.svg).write_text(render_svg(series, "line", "stationary OU pair"))
        return EXIT_OK
    if proc == "tpl-levy":
        vals = tpl_levy_paths(_tpl(ns), grid, Representation(ns.representation), rng, ns.n_paths, pi=ns.nb_pi)
    elif proc == "nb":
        vals = nb_paths(_nb(ns), grid, rng, ns.n_paths)
    elif proc == "ou":
        x0 = STATIONARY if ns.x0 == "stationary" else _x0(ns.x0)
        vals = ou_paths(OuConfig(_tpl(ns), ns.ou_alpha, x0), grid, rng, ns.n_paths, euler=ns.euler)
    else:
        vals, bound = sato_paths(SatoConfig(_tpl(ns), ns.H, ns.eps), grid, rng, ns.n_paths)
        if ns.eps is not None:
            print(f"truncation bound {_fmt(bound)}", file=sys.stderr)
    _emit(_paths_csv(grid, vals), ns.out, stdout)
    if ns.svg:
        series = [(grid.times, vals[i], f"path {i}") for i in range(min(vals.shape[0], len(_COLORS)))]
        Path(ns.svg).write_text(render_svg(series, "line", proc))
    return EXIT_OK


def _x0(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParameterError(f"x0 must be a number or 'stationary', got {text!r}") from None


def _cmd_verify(ns, stdout) -> int:
    from .verify import DEFAULT_N, QUICK_N, SuiteConfig, run_suite, write_report

    n = ns.n if ns.n is not None else (QUICK_N if ns.quick else DEFAULT_N)
    if n < 2:
        raise ParameterError("n must be >= 2")
    res = run_suite(SuiteConfig(seed=ns.seed, n=n, k=ns.k, plant_defect=ns.plant_defect))
    text = write_report(res.reports + res.controls, ns.report)
    if ns.report is None:
        stdout.write(text)
    bad = [r.name for r in res.reports if not r.passed]
    print(f"{len(res.reports) - len(bad)}/{len(res.reports)} checks passed; {len(res.controls)} control rows", file=sys.stderr)
    for name in bad:
        print(f"FAIL {name}", file=sys.stderr)
    return EXIT_OK if res.exit_code == 0 else EXIT_VERIFY


# ---------------------------------------------------------------- entry point


def main(argv: Sequence[str] | None = None, stdout=None) -> int:
    """Run the CLI and return its exit code."""
    stdout = stdout or sys.stdout
    try:
        ns = parse(argv)
        return ns._run(ns, stdout)
    except (ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (DomainError, ResourceError, TplError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
