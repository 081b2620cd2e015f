"""Tempered positive Linnik (TPL) laws and processes.

Subpackages and modules
-----------------------
mlfun
    Mittag-Leffler, Prabhakar and Fox-Wright functions.
laws
    Analytic descriptors: transforms, densities, Levy densities, cumulants.
samplers
    Random-variate generators with reproducible streams.
paths
    Levy, negative binomial, OU and Sato trajectories.
mvtpl
    Multivariate TPL processes by common negative-binomial subordination.
verify
    Monte Carlo oracle harness.
cli
    Command-line front end (``tplproc``).
"""

from .errors import (
    DegradedAccuracyWarning,
    DomainError,
    ParameterError,
    RegimeError,
    ResourceError,
    TplError,
)
from .laws import GammaSS, LmlParams, NbParams, TmlParams, TplParams, TpsParams

__version__ = "0.1.0"

__all__ = [
    "DegradedAccuracyWarning",
    "DomainError",
    "GammaSS",
    "LmlParams",
    "NbParams",
    "ParameterError",
    "RegimeError",
    "ResourceError",
    "TmlParams",
    "TplError",
    "TplParams",
    "TpsParams",
    "__version__",
]
