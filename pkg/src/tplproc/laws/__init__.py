"""Analytic descriptors of the TPL family and its building blocks."""

from .identities import (
    geometric_stability_check,
    nb_gamma_representation_identity,
    nb_gamma_subordinator,
    nb_gamma_target,
    ss_identity,
    subordination_identity,
    tpl_invariance_identity,
    tps_limit_residual,
)
from .mittag import (
    lml_cdf,
    lml_laplace,
    lml_mean,
    lml_pdf,
    tml_cdf,
    tml_laplace,
    tml_mean,
    tml_pdf,
    tml_sf,
)
from .nb import (
    gamma_cdf,
    gamma_exponent,
    gamma_laplace,
    gamma_levy_density,
    gamma_pdf,
    log_pmf,
    logarithmic_mean,
    nb_exponent,
    nb_laplace,
    nb_mean,
)
from .params import GammaSS, LmlParams, NbParams, Regime, TmlParams, TplParams, TpsParams
from .tpl import (
    CumulantReport,
    constant_c,
    cumulant_argument,
    cumulant_generator,
    levy_region_ok,
    tpl_cumulant,
    tpl_exponent,
    tpl_laplace,
    tpl_levy_density,
    tpl_levy_mass,
    tpl_mean,
    tpl_pdf,
    tpl_point_mass,
    tpl_variance,
)
from .tps import (
    levy_smirnov_pdf,
    tps_exponent,
    tps_laplace,
    tps_levy_density,
    tps_pdf,
    tps_pdf_series,
    tps_potential_density,
)

__all__ = [name for name in dir() if not name.startswith("_")]
