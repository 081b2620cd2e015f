"""Parameter containers with admissibility checks.

All containers are frozen dataclasses validated on construction, so a law
object that exists is always a valid member of its family.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from ..errors import ParameterError


class Regime(enum.Enum):
    PLUS = "plus"    # gamma in (0, 1]: absolutely continuous, infinite activity
    MINUS = "minus"  # gamma < 0: atom at zero, compound Poisson


def _finite(**kw):
    for name, v in kw.items():
        if not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ParameterError(f"{name} must be a finite real, got {v!r}")


def _check_triple(gamma, lam, theta):
    _finite(gamma=gamma, lam=lam, theta=theta)
    if gamma == 0 or gamma > 1:
        raise ParameterError(f"gamma must lie in (-inf, 0) U (0, 1], got {gamma}")
    if not lam > 0:
        raise ParameterError(f"lambda must be > 0, got {lam}")
    if theta < 0:
        raise ParameterError(f"theta must be >= 0, got {theta}")
    if gamma < 0 and not theta > 0:
        raise ParameterError("gamma < 0 requires theta > 0")


@dataclass(frozen=True)
class TpsParams:
    """Tempered positive stable law TPS(gamma, lam, theta)."""

    gamma: float
    lam: float
    theta: float

    def __post_init__(self):
        _check_triple(self.gamma, self.lam, self.theta)

    @property
    def regime(self) -> Regime:
        return Regime.MINUS if self.gamma < 0 else Regime.PLUS

    @property
    def sign(self) -> int:
        return -1 if self.gamma < 0 else 1


@dataclass(frozen=True)
class TplParams:
    """Tempered positive Linnik law TPL(gamma, lam, delta, theta).

    The admissible set is ``gamma < 0, theta > 0`` (MINUS regime) or
    ``0 < gamma <= 1, theta >= 0`` (PLUS regime), with ``lam, delta > 0``.
    """

    gamma: float
    lam: float
    delta: float
    theta: float

    def __post_init__(self):
        _check_triple(self.gamma, self.lam, self.theta)
        _finite(delta=self.delta)
        if not self.delta > 0:
            raise ParameterError(f"delta must be > 0, got {self.delta}")

    @property
    def regime(self) -> Regime:
        return Regime.MINUS if self.gamma < 0 else Regime.PLUS

    @property
    def sign(self) -> int:
        return -1 if self.gamma < 0 else 1

    @property
    def tps(self) -> TpsParams:
        return TpsParams(self.gamma, self.lam, self.theta)

    @property
    def lam_theta_gamma(self) -> float:
        """lam * theta**gamma, the quantity that splits the Levy-density regions."""
        return self.lam * self.theta**self.gamma if self.theta > 0 else 0.0

    def replace(self, **changes) -> "TplParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class GammaSS:
    """Gamma law in (shape, rate) form.

    Conversion table for the two-argument "G(., .)" notation used in the
    literature on these processes, which is always read in its Laplace-exponent
    convention ``G(scale, shape) -> exponent shape * log(1 + scale * s)``:

    ============================  ==========================
    usage                         GammaSS
    ============================  ==========================
    G(1, delta) subordinator      shape delta, rate 1
    G(lam, delta) subordinator    shape delta, rate 1/lam
    G(-gamma, 1/theta) jumps      shape -gamma, rate theta
    G(theta, abs(gamma))          shape abs(gamma), rate 1/theta
    ============================  ==========================

    The CPP jump law of the MINUS-regime stable part is the one entry that is
    written shape-first; its Laplace transform (theta/(theta+s))^(-gamma)
    fixes the reading.
    """

    shape: float
    rate: float

    def __post_init__(self):
        _finite(shape=self.shape, rate=self.rate)
        if not (self.shape > 0 and self.rate > 0):
            raise ParameterError(f"gamma law needs shape > 0 and rate > 0, got {self.shape}, {self.rate}")

    @classmethod
    def from_scale_shape(cls, scale: float, shape: float) -> "GammaSS":
        """Build from the exponent convention G(scale, shape)."""
        return cls(shape=shape, rate=1.0 / scale)


@dataclass(frozen=True)
class NbParams:
    """Lattice negative binomial law NB(pi, kappa, alpha, mu).

    ``pi = 1`` is accepted as the degenerate pure-drift case.
    """

    pi: float
    kappa: float
    alpha: float
    mu: float

    def __post_init__(self):
        _finite(pi=self.pi, kappa=self.kappa, alpha=self.alpha, mu=self.mu)
        if not 0 < self.pi <= 1:
            raise ParameterError(f"pi must lie in (0, 1], got {self.pi}")
        if not (self.kappa > 0 and self.alpha > 0):
            raise ParameterError("kappa and alpha must be > 0")

    @property
    def jump_rate(self) -> float:
        """Poisson intensity of the lattice jumps, -kappa log(pi)."""
        return -self.kappa * math.log(self.pi)


@dataclass(frozen=True)
class LmlParams:
    """Logarithmic Mittag-Leffler law LML(a, c, theta), |c| < theta**a."""

    a: float
    c: float
    theta: float

    def __post_init__(self):
        _finite(a=self.a, c=self.c, theta=self.theta)
        if not (self.a > 0 and self.theta > 0):
            raise ParameterError("LML needs a > 0 and theta > 0")
        if not abs(self.c) < self.theta**self.a:
            raise ParameterError(f"LML needs |c| < theta**a = {self.theta ** self.a}, got c={self.c}")

    @property
    def q(self) -> float:
        """c * theta**-a, the logarithmic-series parameter."""
        return self.c * self.theta ** (-self.a)

    @property
    def norm_const(self) -> float:
        """n(a, c, theta) = -a c / log(1 - c theta^-a); a theta^a at c = 0."""
        q = self.q
        if q == 0.0:
            return self.a * self.theta**self.a
        return -self.a * self.c / math.log1p(-q)


@dataclass(frozen=True)
class TmlParams:
    """Tempered Mittag-Leffler law TML(a, c, theta), a in (0, 1], c >= 0.

    ``theta = 0`` is the untempered Mittag-Leffler law and needs ``c > 0``.
    """

    a: float
    c: float
    theta: float

    def __post_init__(self):
        _finite(a=self.a, c=self.c, theta=self.theta)
        if not 0 < self.a <= 1:
            raise ParameterError(f"TML needs a in (0, 1], got {self.a}")
        if self.c < 0:
            raise ParameterError("TML is restricted to c >= 0 (nonnegative density)")
        if self.theta < 0 or (self.theta == 0 and self.c == 0):
            raise ParameterError("TML needs theta >= 0 and theta + c > 0")
