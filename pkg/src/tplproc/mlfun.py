"""Real-argument special functions: log-gamma, Prabhakar Mittag-Leffler, Fox-Wright.

The three-parameter Mittag-Leffler function

    E^c_{a,b}(z) = sum_k (c)_k z^k / (k! Gamma(a k + b))

is summed in log space with sign tracking. For positive arguments the terms
never cancel and the series is used up to overflow. For negative arguments the
series cancels catastrophically once |z| grows, so three fallbacks are tried in
order:

1. the Gorenflo-Loutchko-Luchko integral for 0 < a <= 0.95, c = 1 (after reducing
   b into (0, 1] with the recurrence E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a))/z),
2. for other c > 0, the inverse-Laplace integral folded onto the negative axis
   (needs b < 1 + a c, which holds for the TPL density where b = a c),
3. closed forms at a = 1 (b = 1, 2),
4. the same series in extended precision (mpmath), sized to the cancellation.

Everything outside |z| <= Z_MAX is evaluated but flagged ``in_domain=False``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from typing import NamedTuple

import mpmath
import numpy as np
from scipy import integrate, special

from .errors import DomainError, ParameterError

Z_MAX = 50.0
TOL = 1e-12
MAX_TERMS = 20000
# Digits of cancellation tolerated in double precision before falling back.
_MAX_LOSS = 1e2
# Above this many decimal digits of cancellation the extended-precision path gives up.
_MAX_DPS = 1200
# Near a = 1 the spectral kernel degenerates into a spike; extended precision is cheaper there.
_INTEGRAL_MAX_A = 0.95


class MLInfo(NamedTuple):
    value: float
    n_terms: int
    tail_bound: float
    in_domain: bool
    method: str


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0 (double precision, ~1e-15 relative)."""
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"log_gamma requires finite x > 0, got {x!r}")
    return math.lgamma(x)


def _rgamma(x: float) -> float:
    return float(special.rgamma(x))


def _series(z, a, b, c, tol, log_scale=0.0):
    """Double-precision Prabhakar series.

    Every term is multiplied by exp(-log_scale). Returns
    (value, n_terms, tail_bound, log_max_abs_term), all on the scaled level.
    """
    logz = math.log(abs(z))
    zneg = z < 0
    terms = []
    log_poch, poch_sign = 0.0, 1
    log_max = -math.inf
    prev_lt, prev_ratio = None, math.inf
    running = 0.0
    bound = math.inf
    k = 0
    while k < MAX_TERMS:
        lt = log_poch + k * logz - math.lgamma(k + 1.0) - math.lgamma(a * k + b) - log_scale
        if lt > 709.0:
            raise DomainError(
                f"Mittag-Leffler series overflows at term {k} for z={z!r} "
                f"(a={a}, b={b}, c={c}); partial sum {running!r}"
            )
        sign = poch_sign * (-1 if (zneg and k % 2) else 1)
        t = sign * math.exp(lt)
        terms.append(t)
        running += t
        log_max = max(log_max, lt)
        k += 1
        f = c + k - 1
        if f == 0:
            # (c)_k vanishes from here on: the series is a polynomial
            bound = 0.0
            break
        log_poch += math.log(abs(f))
        if f < 0:
            poch_sign = -poch_sign
        if prev_lt is not None:
            ratio = math.exp(lt - prev_lt)
            if ratio < 1.0 and ratio <= prev_ratio:
                bound = abs(t) * ratio / (1.0 - ratio)
                scale = max(abs(running), 1e-300)
                if bound <= tol * scale or bound <= 1e-17 * math.exp(log_max):
                    break
            prev_ratio = ratio
        prev_lt = lt
    else:
        raise DomainError(f"Mittag-Leffler series did not converge in {MAX_TERMS} terms at z={z!r}")
    return math.fsum(terms), k, bound, log_max


def _ml_neg_integral(x, a, b):
    """E_{a,b}(-x) for x > 0, 0 < a < 1, 0 < b <= 1 by the spectral integral.

    In the variable t = chi (so that the e^{-chi^(1/a)} factor carries all the
    non-smoothness) the kernel is
    t^((1-b)/a) e^{-t^(1/a)} (t sin(pi(1-b)) + x sin(pi(1-b+a))) / (a pi (t^2 + 2 t x cos(pi a) + x^2)),
    smooth on [0, inf) for b <= 1.
    """
    s1 = math.sin(math.pi * (1.0 - b))
    s2 = math.sin(math.pi * (1.0 - b + a))
    ca = math.cos(math.pi * a)
    p = (1.0 - b) / a
    inv_a = 1.0 / a

    def f(t):
        return t**p * math.exp(-(t**inv_a)) * (t * s1 + x * s2) / (t * t + 2.0 * t * x * ca + x * x)

    # beyond T the exponential factor underflows
    upper = 745.0**a
    pts = [q for q in (1.0, x) if q < upper]
    with warnings.catch_warnings():
        # the error estimate is checked below instead
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        v, err = integrate.quad(f, 0.0, upper, points=pts, epsabs=0.0, epsrel=1e-13, limit=400)
    if not err <= 1e-11 * abs(v):
        raise DomainError(f"spectral integral unresolved at x={x} (a={a}, b={b})")
    return v / (a * math.pi)


def _prabhakar_neg_integral(x, a, b, c):
    """E^c_{a,b}(-x) for x > 0, 0 < a < 1, b < 1 + a c by collapsing the Bromwich contour.

    E^c_{a,b}(-x) is the inverse Laplace transform of s^(ac-b) (s^a + x)^(-c)
    at t = 1. That transform has no poles on the principal sheet, so the contour
    folds onto the negative axis. In the variable t = r^a the integrand is
    t^((ac-b+1-a)/a) e^{-t^(1/a)} Im[e^{-i pi (ac-b)} (t e^{-i pi a} + x)^(-c)] / (a pi).
    """
    p = (a * c - b + 1.0 - a) / a
    inv_a = 1.0 / a
    rot = cmath.exp(-1j * math.pi * (a * c - b))
    ea = cmath.exp(-1j * math.pi * a)

    def core(t):
        return math.exp(-(t**inv_a)) * (rot * (t * ea + x) ** (-c)).imag

    upper = 745.0**a
    pts = [q for q in (1.0, x) if q < upper]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        head = min(1.0, upper)
        v1, e1 = integrate.quad(core, 0.0, head, weight="alg", wvar=(p, 0.0), epsabs=0.0, epsrel=1e-13, limit=400)
        v2, e2 = integrate.quad(
            lambda t: t**p * core(t), head, upper, points=[q for q in pts if q > head] or None,
            epsabs=0.0, epsrel=1e-13, limit=400,
        )
    v = v1 + v2
    if not e1 + e2 <= 1e-11 * abs(v):
        raise DomainError(f"spectral integral unresolved at x={x} (a={a}, b={b}, c={c})")
    return v / (a * math.pi)


def _ml_mpmath(z, a, b, c, log_max, tol):
    """Series in extended precision; the digit count grows until it covers the cancellation."""
    digits = int(log_max / math.log(10.0)) + 25
    while True:
        if digits > _MAX_DPS:
            raise DomainError(
                f"Mittag-Leffler cancellation needs ~{digits} digits at z={z!r} (a={a}, b={b}, c={c})"
            )
        total, n = _mp_sum(z, a, b, c, digits, log_max, tol)
        if total == 0:
            digits *= 2
            continue
        lost = (log_max - float(mpmath.log(abs(total)))) / math.log(10.0)
        if lost + 20 <= digits:
            return float(total), n
        digits = int(lost) + 25


def _mp_sum(z, a, b, c, dps, log_max, tol):
    with mpmath.workdps(dps):
        zz, aa, bb, cc = mpmath.mpf(z), mpmath.mpf(a), mpmath.mpf(b), mpmath.mpf(c)
        total = mpmath.mpf(0)
        poch = mpmath.mpf(1)
        zk = mpmath.mpf(1)
        fact = mpmath.mpf(1)
        # stop once terms are below the working precision relative to the largest term
        floor = mpmath.exp(mpmath.mpf(log_max)) * mpmath.mpf(10) ** (-(dps - 3))
        k = 0
        while k < MAX_TERMS:
            t = poch * zk / (fact * mpmath.gamma(aa * k + bb))
            total += t
            if k > 2 and abs(t) < floor and abs(t) < tol * abs(total) * 1e-3:
                break
            poch *= cc + k
            k += 1
            zk *= zz
            fact *= k
            if poch == 0:
                break
        return +total, k + 1


def mittag_leffler(z, a, b=1.0, c=1.0, *, tol=TOL, full_output=False, log_scale=0.0):
    """Three-parameter (Prabhakar) Mittag-Leffler function at a real argument.

    Parameters
    ----------
    z : float
        Real argument.
    a, b : float
        Order parameters, both > 0.
    c : float, default 1
        Prabhakar parameter; ``c = 1`` gives the two-parameter function.
    tol : float
        Relative truncation tolerance of the series.
    log_scale : float, default 0
        Return ``exp(-log_scale) * E`` instead of ``E``. Densities pass their
        exponential tilt here so that a growing series times a decaying
        exponential does not overflow.
    full_output : bool
        If True return an :class:`MLInfo` with the term count, the
        truncation bound, the accuracy-domain flag and the method used.

    Raises
    ------
    ParameterError
        If ``a <= 0`` or ``b <= 0``.
    DomainError
        If the value overflows or cannot be resolved in finite precision.
    """
    z, a, b, c = float(z), float(a), float(b), float(c)
    if not (a > 0 and b > 0):
        raise ParameterError(f"Mittag-Leffler requires a > 0 and b > 0, got a={a}, b={b}")
    if not (math.isfinite(z) and math.isfinite(c)):
        raise ParameterError("Mittag-Leffler argument and c must be finite")
    in_domain = abs(z) <= Z_MAX
    if z == 0.0 or c == 0.0:
        info = MLInfo(_rgamma(b) * math.exp(-log_scale), 1, 0.0, True, "series")
        return info if full_output else info.value

    if c == 1.0 and z > 0:
        info = _asymptotic(z, a, b, log_scale, in_domain)
        if info is not None:
            return info if full_output else info.value

    # sum well past the declared tolerance; the extra terms are cheap
    try:
        value, n, bound, log_max = _series(z, a, b, c, tol * 1e-4, log_scale)
    except DomainError:
        if z > 0:
            raise
        # terms overflow but the sum is small: go straight to a stable method
        value, n, bound, log_max = 0.0, 0, math.inf, _log_max_term(z, a, b, c) - log_scale
    loss = math.exp(log_max) / abs(value) if value != 0.0 else math.inf
    if loss <= _MAX_LOSS or log_max < -700.0:
        # second case: the scaled value underflows whatever the cancellation
        info = MLInfo(value, n, bound, in_domain, "series")
    else:
        info = _cancelling(z, a, b, c, tol, n, bound, log_max + log_scale, in_domain)
        if log_scale:
            info = info._replace(value=info.value * math.exp(-log_scale))
    if not math.isfinite(info.value):
        raise DomainError(f"Mittag-Leffler value is not finite at z={z!r}")
    return info if full_output else info.value


def _log_max_term(z, a, b, c):
    """Log of the largest series term magnitude (unscaled)."""
    logz = math.log(abs(z))
    best, k = -math.inf, 0
    log_poch = 0.0
    while k < MAX_TERMS:
        lt = log_poch + k * logz - math.lgamma(k + 1.0) - math.lgamma(a * k + b)
        if lt < best - 50.0:
            break
        best = max(best, lt)
        f = c + k
        if f == 0:
            break
        log_poch += math.log(abs(f))
        k += 1
    return best


def _asymptotic(z, a, b, log_scale, in_domain):
    """Exponential asymptotics of E_{a,b}(z) for large positive z.

    E_{a,b}(z) = z^((1-b)/a) exp(z^(1/a)) / a - sum_k z^-k / Gamma(b - a k) + (other
    exponentials, present for a >= 2 and smaller by exp(w (cos(2 pi/a) - 1))).
    Used only once every neglected part is below exp(-40) relative.
    """
    w = z ** (1.0 / a)
    gap = w if a < 2.0 else w * (1.0 - math.cos(2.0 * math.pi / a))
    if w < 40.0 or gap < 40.0:
        return None
    log_lead = w + (1.0 - b) / a * math.log(z) - math.log(a) - log_scale
    if log_lead > 709.0:
        raise DomainError(f"Mittag-Leffler value overflows at z={z!r}")
    alg = -math.fsum(_rgamma(b - a * k) * z ** (-k) for k in range(1, 6))
    val = math.exp(log_lead) + alg * math.exp(-log_scale)
    return MLInfo(val, 0, math.exp(log_lead - 40.0), in_domain, "asymptotic")


def _cancelling(z, a, b, c, tol, n, bound, log_max, in_domain):
    if c == 1.0 and z < 0 and 0 < a <= _INTEGRAL_MAX_A:
        try:
            return _cancelling_integral(z, a, b, n, bound, in_domain)
        except DomainError:
            pass
    if c > 0 and z < 0 and 0 < a <= _INTEGRAL_MAX_A and b < 1.0 + a * c:
        try:
            return MLInfo(_prabhakar_neg_integral(-z, a, b, c), n, bound, in_domain, "integral")
        except DomainError:
            pass
    if c == 1.0 and a == 1.0 and b in (1.0, 2.0):
        val = math.exp(z) if b == 1.0 else math.expm1(z) / z
        return MLInfo(val, n, 0.0, in_domain, "closed")
    val, n_mp = _ml_mpmath(z, a, b, c, log_max, tol)
    return MLInfo(val, n_mp, bound, in_domain, "mpmath")


def _cancelling_integral(z, a, b, n, bound, in_domain):
    if b <= 1.0:
        return MLInfo(_ml_neg_integral(-z, a, b), n, bound, in_domain, "integral")
    # step b down into (0, 1] where the integral applies
    m = math.ceil((b - 1.0) / a)
    val = _ml_neg_integral(-z, a, b - m * a)
    for j in range(m - 1, -1, -1):
        bj = b - j * a
        val = (val - _rgamma(bj - a)) / z
    return MLInfo(val, n, bound, in_domain, "recurrence")


def ml(z, a, b=1.0, c=1.0):
    """Vectorised :func:`mittag_leffler` returning floats (array in, array out)."""
    zz = np.asarray(z, dtype=float)
    if zz.ndim == 0:
        return mittag_leffler(float(zz), a, b, c)
    out = np.empty_like(zz)
    flat = zz.ravel()
    cache = {}
    for i, v in enumerate(flat):
        if v not in cache:
            cache[v] = mittag_leffler(v, a, b, c)
        out.flat[i] = cache[v]
    return out


def fox_wright_2psi1(b_pair, beta_pair, arg, *, tol=TOL, full_output=False):
    """Fox-Wright 2Psi1[(1,1),(b,a); (beta,alpha); arg] as a real series.

    ``b_pair = (b, a)`` and ``beta_pair = (beta, alpha)``; the (1, 1) slot is
    fixed, so the terms are Gamma(a k + b) arg^k / Gamma(alpha k + beta).
    Only the geometric-type case alpha >= a is supported and the series is
    summed for |arg| < 1, which is where it converges.
    """
    b, a = map(float, b_pair)
    beta, alpha = map(float, beta_pair)
    arg = float(arg)
    if not (a > 0 and b > 0 and alpha > 0 and beta > 0):
        raise ParameterError("Fox-Wright parameters must be positive")
    if alpha < a:
        raise ParameterError("Fox-Wright series needs alpha >= a for a finite radius")
    if abs(arg) >= 1.0 and alpha == a:
        raise DomainError(f"Fox-Wright series diverges for |arg| >= 1 (arg={arg})")
    if arg == 0.0:
        v = math.exp(math.lgamma(b) - math.lgamma(beta))
        return (v, 1, 0.0) if full_output else v
    terms = []
    logx = math.log(abs(arg))
    bound = math.inf
    prev = None
    k = 0
    while k < MAX_TERMS:
        lt = math.lgamma(a * k + b) - math.lgamma(alpha * k + beta) + k * logx
        t = math.exp(lt) * (-1 if (arg < 0 and k % 2) else 1)
        terms.append(t)
        k += 1
        if prev is not None:
            ratio = math.exp(lt - prev)
            if ratio < 1.0:
                bound = abs(t) * ratio / (1.0 - ratio)
                if bound <= tol * abs(math.fsum(terms)):
                    break
        prev = lt
    else:
        raise DomainError("Fox-Wright series did not converge; arg too close to the radius")
    v = math.fsum(terms)
    return (v, k, bound) if full_output else v


def fox_wright_laplace(a, b, alpha, beta, c, s):
    """Laplace transform of x^(b-1) E_{alpha,beta}(c x^a) at s > 0.

    Equals sum_k Gamma(a k + b) c^k / (Gamma(alpha k + beta) s^(a k + b)),
    convergent for |c| < s^a when alpha = a.
    """
    s = float(s)
    if not s > 0:
        raise ParameterError("Laplace argument must be > 0")
    return s ** (-b) * fox_wright_2psi1((b, a), (beta, alpha), c / s**a)
