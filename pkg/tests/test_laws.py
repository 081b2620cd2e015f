import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from tplproc.errors import DomainError, ParameterError, RegimeError
from tplproc.laws import (
    GammaSS,
    LmlParams,
    NbParams,
    Regime,
    TmlParams,
    TplParams,
    TpsParams,
    constant_c,
    cumulant_generator,
    gamma_exponent,
    gamma_laplace,
    geometric_stability_check,
    levy_smirnov_pdf,
    lml_cdf,
    lml_laplace,
    lml_mean,
    lml_pdf,
    log_pmf,
    nb_exponent,
    nb_gamma_representation_identity,
    nb_laplace,
    nb_mean,
    ss_identity,
    subordination_identity,
    tml_cdf,
    tml_laplace,
    tml_mean,
    tml_pdf,
    tpl_cumulant,
    tpl_exponent,
    tpl_invariance_identity,
    tpl_laplace,
    tpl_levy_density,
    tpl_levy_mass,
    tpl_mean,
    tpl_pdf,
    tpl_point_mass,
    tpl_variance,
    tps_exponent,
    tps_laplace,
    tps_levy_density,
    tps_limit_residual,
    tps_pdf,
    tps_pdf_series,
    tps_potential_density,
)

S_POINTS = [0.5, 1.0, 2.0, 5.0]


def quad_inf(f, a=0.0, **kw):
    kw.setdefault("limit", 400)
    kw.setdefault("epsabs", 1e-13)
    kw.setdefault("epsrel", 1e-11)
    # split at 1 so the endpoint singularity and the tail are handled separately
    if a < 1.0:
        return integrate.quad(f, a, 1.0, **kw)[0] + integrate.quad(f, 1.0, np.inf, **kw)[0]
    return integrate.quad(f, a, np.inf, **kw)[0]


# ---------------------------------------------------------------- parameters


@pytest.mark.parametrize(
    "args",
    [(0.0, 1, 1, 1), (1.2, 1, 1, 1), (-1.0, 1, 1, 0.0), (0.5, 0.0, 1, 1), (0.5, 1, -1, 1), (0.5, 1, 1, -0.1), (math.nan, 1, 1, 1)],
)
def test_tpl_params_rejected(args):
    with pytest.raises(ParameterError):
        TplParams(*args)


def test_regimes():
    assert TplParams(0.5, 1, 1, 0).regime is Regime.PLUS
    assert TplParams(1.0, 1, 1, 0).regime is Regime.PLUS
    assert TplParams(-2.0, 1, 1, 1).regime is Regime.MINUS


def test_gamma_conversion_table():
    g = GammaSS.from_scale_shape(2.0, 3.0)
    assert (g.shape, g.rate) == (3.0, 0.5)
    assert gamma_exponent(g, 1.0) == pytest.approx(3.0 * math.log(3.0))


def test_lml_and_nb_params():
    with pytest.raises(ParameterError):
        LmlParams(1.0, 2.0, 1.0)
    with pytest.raises(ParameterError):
        NbParams(0.0, 1, 1, 0)
    with pytest.raises(ParameterError):
        TmlParams(0.5, -0.1, 1.0)
    assert LmlParams(1.0, 0.0, 2.0).norm_const == pytest.approx(2.0)


# ---------------------------------------------------------------- TPL transform


def test_tpl_laplace_examples():
    assert tpl_laplace(TplParams(0.7, 2, 3, 1), 0.0) == 1.0
    assert tpl_laplace(TplParams(1.0, 2, 3, 0), 1.0) == pytest.approx(1 / 27, rel=1e-15)
    assert tpl_laplace(TplParams(0.5, 1, 2, 1), 3.0) == pytest.approx(0.25, rel=1e-15)


def test_tpl_laplace_vectorised():
    s = np.array([0.0, 1.0, 2.0])
    out = tpl_laplace(TplParams(-1.5, 2, 1, 1), s)
    assert out.shape == (3,) and out[0] == 1.0 and np.all(np.diff(out) < 0)


def test_tpl_rejects_negative_s():
    with pytest.raises(ParameterError):
        tpl_laplace(TplParams(0.5, 1, 1, 1), -0.1)


def test_minus_point_mass_is_transform_limit():
    p = TplParams(-1.0, 1, 1, 1)
    assert tpl_point_mass(p) == pytest.approx(0.5)
    assert tpl_laplace(p, 1e12) == pytest.approx(0.5, rel=1e-9)
    assert tpl_point_mass(TplParams(0.5, 1, 1, 1)) == 0.0


def test_convolution_closure():
    p1, p2 = TplParams(0.6, 1.5, 0.7, 0.8), TplParams(0.6, 1.5, 1.9, 0.8)
    p12 = TplParams(0.6, 1.5, 2.6, 0.8)
    s = np.array(S_POINTS)
    np.testing.assert_allclose(tpl_laplace(p1, s) * tpl_laplace(p2, s), tpl_laplace(p12, s), rtol=1e-14)


def test_tps_limit_monotone_decay():
    res = [tps_limit_residual(0.6, 1.2, 0.5, d) for d in (10, 100, 1000)]
    assert res[0] > res[1] > res[2]
    assert res[2] < 1e-3
    res_minus = [tps_limit_residual(-1.0, 1.0, 1.0, d) for d in (10, 100, 1000)]
    assert res_minus[0] > res_minus[1] > res_minus[2]


LAWS = {
    "tpl_plus": lambda s: tpl_laplace(TplParams(0.6, 1.5, 2.0, 0.8), s),
    "tpl_minus": lambda s: tpl_laplace(TplParams(-1.3, 2.0, 1.5, 0.7), s),
    "tps_plus": lambda s: tps_laplace(TpsParams(0.4, 1.0, 0.5), s),
    "tps_minus": lambda s: tps_laplace(TpsParams(-2.0, 1.0, 1.0), s),
    "lml": lambda s: lml_laplace(LmlParams(2.2, 0.1, 0.5), s),
    "tml": lambda s: tml_laplace(TmlParams(0.7, 0.3, 1.0), s),
    "nb": lambda s: nb_laplace(NbParams(0.3, 2.0, 0.5, 0.2), s),
    "gamma": lambda s: gamma_laplace(GammaSS(2.5, 1.5), s),
}


@pytest.mark.parametrize("name", list(LAWS))
def test_complete_monotonicity(name):
    f = LAWS[name]
    with mpmath.workdps(30):
        for s in S_POINTS:
            for k in range(1, 5):
                d = mpmath.diff(lambda u: f(float(u)), s, k, h=mpmath.mpf("1e-3"))
                # (-1)^k L^(k) >= 0
                assert (-1) ** k * float(d) > -1e-9, (name, s, k)


EXPONENTS = {
    "tpl_plus": lambda s: tpl_exponent(TplParams(0.6, 1.5, 2.0, 0.8), s),
    "tpl_minus": lambda s: tpl_exponent(TplParams(-1.3, 2.0, 1.5, 0.7), s),
    "tps_plus": lambda s: tps_exponent(TpsParams(0.4, 1.0, 0.5), s),
    "tps_minus": lambda s: tps_exponent(TpsParams(-2.0, 1.0, 1.0), s),
    "nb": lambda s: nb_exponent(NbParams(0.3, 2.0, 0.5, 0.2), s),
    "gamma": lambda s: gamma_exponent(GammaSS(2.5, 1.5), s),
}


@pytest.mark.parametrize("name", list(EXPONENTS))
def test_bernstein(name):
    f = EXPONENTS[name]
    s = np.linspace(0.0, 20.0, 401)
    v = np.asarray(f(s))
    assert v[0] == 0.0
    assert np.all(v[1:] > 0)
    assert np.all(np.diff(np.diff(v)) <= 1e-12)


def test_tps_exponent_examples():
    assert tps_exponent(TpsParams(0.5, 2, 0), 4.0) == pytest.approx(4.0)
    assert tps_exponent(TpsParams(-1.0, 3, 1), 1.0) == pytest.approx(1.5)
    assert tps_exponent(TpsParams(0.3, 3, 1), 0.0) == 0.0


# ---------------------------------------------------------------- densities


def test_tpl_pdf_examples():
    assert tpl_pdf(TplParams(0.5, 1, 1, 1), 1.0) == pytest.approx(math.exp(-1) / math.gamma(0.5), rel=1e-13)
    x = np.array([0.3, 1.0, 4.0])
    np.testing.assert_allclose(tpl_pdf(TplParams(1.0, 2.0, 3.0, 0.0), x), stats.gamma.pdf(x, a=3.0, scale=2.0), rtol=1e-14)


@pytest.mark.parametrize("p", [TplParams(0.5, 2, 1, 0.25), TplParams(0.7, 0.5, 2.5, 1.0), TplParams(0.4, 1.0, 0.8, 2.0)])
def test_tpl_pdf_normalised(p):
    assert quad_inf(lambda x: tpl_pdf(p, x)) == pytest.approx(1.0, abs=1e-8)


def test_tpl_pdf_laplace():
    p = TplParams(0.7, 0.5, 2.5, 1.0)
    val = quad_inf(lambda x: math.exp(-1.3 * x) * tpl_pdf(p, x))
    assert val == pytest.approx(tpl_laplace(p, 1.3), abs=1e-8)


def test_tpl_pdf_minus_refused():
    with pytest.raises(RegimeError):
        tpl_pdf(TplParams(-1.0, 1, 1, 1), 1.0)


@pytest.mark.parametrize("x", [0.05, 0.3, 1.0, 4.0, 30.0])
def test_tps_pdf_levy_smirnov(x):
    assert tps_pdf_series(TpsParams(0.5, 1.0, 0.0), x) == pytest.approx(levy_smirnov_pdf(x), rel=1e-8)


def test_tps_pdf_small_x_flags_integral():
    info = tps_pdf_series(TpsParams(0.5, 1.0, 0.0), 0.01, full_output=True)
    assert info.method == "integral" and not info.in_domain
    assert info.value == pytest.approx(levy_smirnov_pdf(0.01), rel=1e-8)


@pytest.mark.parametrize("x", [0.2, 1.0, 3.0])
def test_tps_tilt_consistency(x):
    g, lam, th = 0.7, 1.0, 0.5
    tilted = tps_pdf_series(TpsParams(g, lam, th), x)
    base = tps_pdf_series(TpsParams(g, lam, 0.0), x)
    assert tilted == pytest.approx(math.exp(-th * x + lam * th**g) * base, rel=1e-13)


def test_tps_pdf_normalised():
    p = TpsParams(0.7, 1.0, 0.5)
    assert quad_inf(lambda x: tps_pdf_series(p, x)) == pytest.approx(1.0, abs=1e-8)


def test_tps_pdf_vectorised_and_regime():
    assert tps_pdf(TpsParams(0.5, 1, 0), np.array([1.0, 2.0])).shape == (2,)
    with pytest.raises(RegimeError):
        tps_pdf_series(TpsParams(-1.0, 1, 1), 1.0)


def test_tps_levy_density_stable_index():
    # gamma-law limit of the TPS Levy density integrates (1 ^ x) finitely
    p = TpsParams(0.6, 1.0, 1.0)
    assert math.isfinite(quad_inf(lambda x: min(1.0, x) * tps_levy_density(p, x)))


# ---------------------------------------------------------------- Levy structure


def test_constant_c_examples():
    assert constant_c(TplParams(0.5, 1, 1, 1)) == 0.0
    assert constant_c(TplParams(-1.0, 1, 1, 1)) == pytest.approx(0.5)
    assert constant_c(TplParams(0.5, 4, 1, 0.01)) == pytest.approx(-0.15)


def test_levy_density_examples():
    p = TplParams(0.5, 1, 2, 1)
    for x in (0.1, 1.0, 3.0):
        assert tpl_levy_density(p, x) == pytest.approx(math.exp(-x) / x, rel=1e-14)
    q = TplParams(-1.0, 1, 1, 1)
    for x in (0.01, 1.0, 7.0):
        assert tpl_levy_density(q, x) == pytest.approx(math.exp(-x) * math.expm1(x / 2) / x, rel=1e-13)


@pytest.mark.parametrize("p", [TplParams(-1.0, 1, 1, 1), TplParams(-2.2, 10, 1, 0.5), TplParams(-0.5, 0.3, 2.0, 2.0)])
def test_levy_mass_minus(p):
    total = quad_inf(lambda x: tpl_levy_density(p, x), epsabs=1e-14, epsrel=1e-12)
    assert total == pytest.approx(tpl_levy_mass(p), abs=1e-8)
    assert tpl_levy_mass(p) == pytest.approx(p.delta * math.log(1 + p.lam_theta_gamma))


@pytest.mark.parametrize("p", [TplParams(0.5, 1, 2, 1), TplParams(0.3, 0.2, 1.5, 1.0), TplParams(0.8, 0.5, 1.0, 0.9)])
def test_levy_integrability_plus(p):
    val = quad_inf(lambda x: min(1.0, x) * tpl_levy_density(p, x), epsrel=1e-9)
    assert math.isfinite(val) and val > 0


def test_levy_density_region_refused():
    with pytest.raises(DomainError):
        tpl_levy_density(TplParams(0.5, 4.0, 1.0, 1.0), 1.0)


@pytest.mark.parametrize("p", [TplParams(0.3, 0.2, 1.5, 1.0), TplParams(-1.5, 0.7, 2.0, 1.2)])
def test_levy_density_reproduces_exponent(p):
    # phi(s) = int (1 - e^{-s x}) u(x) dx
    for s in (0.5, 2.0):
        val = quad_inf(lambda x: -math.expm1(-s * x) * tpl_levy_density(p, x), epsrel=1e-10)
        assert val == pytest.approx(tpl_exponent(p, s), rel=1e-8)


# ---------------------------------------------------------------- cumulants


def mp_cumulant(p, n):
    """n-th cumulant as (-1)^n d^n/ds^n log L at 0, high precision."""
    with mpmath.workdps(40):
        g, lam, d, th = map(mpmath.mpf, (p.gamma, p.lam, p.delta, p.theta))
        sg = 1 if p.gamma > 0 else -1

        def logl(s):
            return -d * mpmath.log(1 + sg * lam * ((th + s) ** g - th**g))

        return float((-1) ** n * mpmath.diff(logl, 0, n))


CUMULANT_SETS = [
    TplParams(0.5, 1, 2, 1),
    TplParams(0.3, 0.2, 1.5, 1.0),
    TplParams(0.7, 3.0, 2.0, 2.0),
    TplParams(-1.0, 1, 1, 2),
    TplParams(-2.2, 10, 1, 0.5),
    TplParams(-0.5, 0.3, 2.0, 2.0),
]


@pytest.mark.parametrize("p", CUMULANT_SETS)
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_cumulants_against_exponent_derivatives(p, n):
    assert tpl_cumulant(p, n).value == pytest.approx(mp_cumulant(p, n), rel=1e-10)


@pytest.mark.parametrize("p", CUMULANT_SETS)
def test_cumulants_closed_forms(p):
    assert tpl_cumulant(p, 1).value == pytest.approx(tpl_mean(p), rel=1e-13)
    assert tpl_cumulant(p, 2).value == pytest.approx(tpl_variance(p), rel=1e-13)


def test_cumulant_examples():
    p = TplParams(0.5, 1, 2, 1)
    assert tpl_cumulant(p, 1).value == pytest.approx(1.0)
    assert tpl_cumulant(TplParams(-1.0, 1, 1, 2), 1).value == pytest.approx(0.25)
    # the exponent's second derivative gives E (1-g)/theta + E^2/delta = 0.5 + 0.5
    assert tpl_cumulant(p, 2).value == pytest.approx(1.0)


def test_cumulants_gamma_case():
    p = TplParams(1.0, 2.0, 3.0, 0.4)
    assert [tpl_cumulant(p, n).value for n in (1, 2, 3)] == pytest.approx([6.0, 12.0, 48.0])


def test_cumulant_generator_is_series():
    # g_n(x) = sum_k (k a + 1)_n x^k for |x| < 1
    a, x, n = 0.4, 0.3, 3
    num, m = cumulant_generator(a, n, Regime.PLUS)
    ref = math.fsum(math.prod(k * a + 1 + j for j in range(n)) * x**k for k in range(400))
    assert num(x) / (1 - x) ** m == pytest.approx(ref, rel=1e-12)


def test_cumulant_report_fields():
    r = tpl_cumulant(TplParams(-1.0, 1, 1, 2), 2)
    assert r.n == 2 and r.regime is Regime.MINUS and r.value > 0
    with pytest.raises(ParameterError):
        tpl_cumulant(TplParams(0.5, 1, 1, 0.0), 1)
    with pytest.raises(ParameterError):
        tpl_cumulant(TplParams(0.5, 1, 1, 1), 0)


# ---------------------------------------------------------------- identities


@pytest.mark.parametrize(
    "p,variant",
    [(TplParams(0.5, 1, 2, 1), "standard"), (TplParams(0.5, 1, 2, 1), "equivalent"), (TplParams(-2.2, 10, 1, 0.5), "standard"), (TplParams(-2.2, 10, 1, 0.5), "equivalent")],
)
def test_subordination(p, variant):
    assert subordination_identity(p, np.linspace(0.1, 10, 25), variant) < 1e-12


def test_self_similarity():
    assert ss_identity(1.0, 1.0, 2.0, 2.0, 1.0, 1.5) < 1e-12
    assert ss_identity(0.6, 2.0, 3.0, 3.0, 2.0, 1.7) < 1e-12


def test_invariance_identity():
    assert tpl_invariance_identity(TplParams(0.5, 1, 2, 1), 3.0, 0.4) < 1e-12
    assert tpl_invariance_identity(TplParams(-1.5, 2, 1, 0.5), 0.7, 0.1) < 1e-12


def test_nb_gamma_representations():
    assert nb_gamma_representation_identity(Regime.PLUS, 0.5, 2.0, 1.0, 0.4) < 1e-12
    assert nb_gamma_representation_identity(Regime.MINUS, -1.0, 2.0, 1.0, 0.4) < 1e-12
    # drift-only limit
    assert nb_gamma_representation_identity(Regime.PLUS, 0.5, 2.0, 1.0, 1.0) < 1e-12
    with pytest.raises(ParameterError):
        nb_gamma_representation_identity(Regime.PLUS, -1.0, 2.0, 1.0, 0.4)


def test_geometric_stability():
    assert geometric_stability_check(TplParams(0.5, 1, 1, 1)) < 1e-12
    assert geometric_stability_check(TplParams(-2.0, 3, 1, 0.5)) < 1e-12
    with pytest.raises(ParameterError):
        geometric_stability_check(TplParams(0.5, 1, 2, 1))


@settings(max_examples=40, deadline=None)
@given(
    g=st.one_of(st.floats(0.05, 1.0), st.floats(-4.0, -0.05)),
    lam=st.floats(0.05, 20.0),
    delta=st.floats(0.05, 10.0),
    theta=st.floats(0.05, 5.0),
)
def test_subordination_property(g, lam, delta, theta):
    p = TplParams(g, lam, delta, theta)
    assert subordination_identity(p) < 1e-12 * max(1.0, float(tpl_exponent(p, 10.0)))


# ---------------------------------------------------------------- potential


@pytest.mark.parametrize("q", [0.5, 1.0])
@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
def test_potential_laplace(q, s):
    p = TpsParams(0.6, 1.0, 0.8)
    val = quad_inf(lambda x: math.exp(-s * x) * tps_potential_density(p, q, x), epsrel=1e-12)
    assert val == pytest.approx(1.0 / (q + tps_exponent(p, s)), abs=1e-8)


def test_potential_special_cases():
    x = np.array([0.5, 2.0])
    np.testing.assert_allclose(tps_potential_density(TpsParams(1.0, 1.0, 0.7), 0.4, x), np.exp(-0.4 * x), rtol=1e-14)
    p = TpsParams(0.5, 1.0, 0.64)
    np.testing.assert_allclose(
        tps_potential_density(p, 0.8, x), np.exp(-0.64 * x) * x**-0.5 / math.gamma(0.5), rtol=1e-13
    )


def test_potential_general_lambda():
    p = TpsParams(0.6, 2.5, 0.8)
    val = quad_inf(lambda x: math.exp(-x) * tps_potential_density(p, 0.5, x), epsrel=1e-12)
    assert val == pytest.approx(1.0 / (0.5 + tps_exponent(p, 1.0)), abs=1e-8)


# ---------------------------------------------------------------- LML / TML / NB


def test_lml_examples():
    p = LmlParams(2.2, constant_c(TplParams(-2.2, 10, 1, 0.5)), 0.5)
    assert lml_laplace(p, 0.0) == 1.0
    assert quad_inf(lambda x: lml_pdf(p, x)) == pytest.approx(1.0, abs=1e-8)
    for s in (0.3, 2.0):
        assert quad_inf(lambda x: math.exp(-s * x) * lml_pdf(p, x)) == pytest.approx(lml_laplace(p, s), abs=1e-8)
    assert quad_inf(lambda x: x * lml_pdf(p, x)) == pytest.approx(lml_mean(p), rel=1e-8)


def test_lml_a1_closed_form():
    c, th = 0.4, 1.0
    p = LmlParams(1.0, c, th)
    n = -c / math.log1p(-c / th)
    for x in (0.1, 1.0, 5.0):
        assert lml_pdf(p, x) == pytest.approx(n * math.exp(-th * x) * math.expm1(c * x) / (c * x), rel=1e-13)


def test_lml_negative_c_and_cdf():
    p = LmlParams(0.8, -0.5, 1.0)
    assert quad_inf(lambda x: lml_pdf(p, x)) == pytest.approx(1.0, abs=1e-8)
    assert lml_cdf(p, 60.0) == pytest.approx(1.0, abs=1e-8)
    assert 0 < lml_cdf(p, 0.5) < lml_cdf(p, 1.0) < 1


def test_tml_examples():
    p = TmlParams(1.0, 0.3, 0.5)
    x = np.array([0.2, 1.0, 3.0])
    np.testing.assert_allclose(tml_cdf(p, x), -np.expm1(-0.8 * x), rtol=1e-13)
    q = TmlParams(0.7, 0.3, 1.0)
    assert tml_laplace(q, 0.0) == pytest.approx(1.0, rel=1e-15)
    assert quad_inf(lambda v: math.exp(-v) * tml_pdf(q, v)) == pytest.approx(tml_laplace(q, 1.0), abs=1e-8)
    assert quad_inf(lambda v: v * tml_pdf(q, v)) == pytest.approx(tml_mean(q), rel=1e-8)


def test_tml_cdf_shape():
    p = TmlParams(0.6, 0.5, 0.2)
    x = np.linspace(0.0, 60.0, 121)
    c = tml_cdf(p, x)
    assert c[0] == 0.0 and np.all(np.diff(c) > 0) and c[-1] > 0.999
    # pdf is the derivative of the cdf
    h = 1e-5
    for v in (0.3, 2.0):
        fd = (tml_cdf(p, v + h) - tml_cdf(p, v - h)) / (2 * h)
        assert tml_pdf(p, v) == pytest.approx(fd, rel=1e-7)


def test_tml_untempered():
    p = TmlParams(0.5, 1.0, 0.0)
    assert tml_cdf(p, 1.0) == pytest.approx(1 - math.exp(1.0) * math.erfc(1.0), rel=1e-12)


def test_nb_examples():
    p = NbParams(0.3, 2.0, 0.5, 0.2)
    assert nb_laplace(p, 0.0) == 1.0
    assert nb_laplace(p, 1.3) == pytest.approx((0.3 / (1 - 0.7 * math.exp(-0.65))) ** 2 * math.exp(-0.26), rel=1e-14)
    k = np.arange(1, 400)
    assert np.sum(log_pmf(0.7, k)) == pytest.approx(1.0, abs=1e-12)
    assert log_pmf(0.7, 2) == pytest.approx(0.49 / (-2 * math.log(0.3)))
    h = 1e-6
    assert nb_mean(p) == pytest.approx((nb_exponent(p, h) - nb_exponent(p, 0.0)) / h, rel=1e-5)


def test_nb_degenerate_pi_one():
    p = NbParams(1.0, 2.0, 0.5, 0.2)
    assert nb_laplace(p, 3.0) == pytest.approx(math.exp(-0.6))
    assert p.jump_rate == 0.0
