"""Gauss hypergeometric values backing the propagator kernels.

Three evaluation routes, each with its own regime:

* AGM (arithmetic-geometric mean) for F(+-1/2,1/2;1;z): near machine
  accuracy on [0,1), and for F(1/2,...) also on z < 0, which the kernel
  layer uses when a stencil straddles a light cone.
* Gauss series for the F(1/2,beta;3/2;z) family from the bound audits.
* Expansion about z=1 in powers of (1-z) and log(1-z), for callers that
  sit close to the logarithmic singularity.

All functions are pure; scalars in, scalars out (arrays likewise).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma, gammaln

from ._backend import kernels as _K
from .errors import DomainError, OutOfRegimeError, SingularityError

TWO_OVER_PI = 2.0 / math.pi

# term count for the z~1 expansions of F(+-1/2,1/2;1;z); w = 1-z stays
# below 0.1 there, so 16 terms leave a tail ~ 1e-17
_LOG_TERMS = 16


@dataclass(frozen=True)
class SeriesTruncation:
    """A truncation choice plus the a-posteriori geometric tail bound."""

    n_max: int = 64
    tail_bound: float = math.inf


def _log_pair_coefficients(n_terms):
    n = np.arange(n_terms)
    # c_p[n] = (1/pi) ((1/2)_n / n!)^2,  d_p[n] = 2 psi(n+1) - 2 psi(n+1/2)
    lp = 2.0 * (gammaln(n + 0.5) - gammaln(0.5) - gammaln(n + 1.0))
    c_p = np.exp(lp) / math.pi
    d_p = 2.0 * digamma(n + 1.0) - 2.0 * digamma(n + 0.5)
    # F(-1/2,...) = 2/pi - (w/(2 pi)) sum c~_n (ln w + h_n) w^n
    lm = (
        gammaln(n + 0.5)
        - gammaln(0.5)
        + gammaln(n + 1.5)
        - gammaln(1.5)
        - gammaln(n + 1.0)
        - gammaln(n + 2.0)
    )
    c_m = np.exp(lm) / (2.0 * math.pi)
    h_m = (
        digamma(n + 0.5)
        + digamma(n + 1.5)
        - digamma(n + 1.0)
        - digamma(n + 2.0)
    )
    return c_p, d_p, c_m, h_m


_CP, _DP, _CM, _HM = _log_pair_coefficients(_LOG_TERMS)


def _as_array(z):
    arr = np.atleast_1d(np.asarray(z, dtype=float))
    return arr, np.isscalar(z) or np.ndim(z) == 0


def _unwrap(values, scalar):
    return float(values[0]) if scalar else values


def agm(a, b):
    """Arithmetic-geometric mean of two positive numbers."""
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"agm needs positive operands, got {a}, {b}")
    return _K.agm_s(float(a), float(b))


def hyp_half(z):
    """F(1/2,1/2;1;z) on [0,1); equals (2/pi) K(sqrt(z))."""
    arr, scalar = _as_array(z)
    if np.any(arr < 0.0):
        raise DomainError("hyp_half requires z >= 0")
    if np.any(arr >= 1.0):
        raise SingularityError("hyp_half diverges logarithmically at z = 1")
    return _unwrap(_K.fhalf(arr), scalar)


def hyp_minus_half(z):
    """F(-1/2,1/2;1;z) on [0,1]; equals (2/pi) E(sqrt(z)), finite at z=1."""
    arr, scalar = _as_array(z)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError("hyp_minus_half requires 0 <= z <= 1")
    out = np.empty_like(arr)
    at_one = arr == 1.0
    out[at_one] = TWO_OVER_PI
    if np.any(~at_one):
        out[~at_one] = _K.fpm(arr[~at_one])[1]
    return _unwrap(out, scalar)


def hyp_pair(z):
    """(F(1/2,1/2;1;z), F(-1/2,1/2;1;z)) in one AGM pass, 0 <= z < 1."""
    arr, scalar = _as_array(z)
    if np.any(arr < 0.0) or np.any(arr >= 1.0):
        raise DomainError("hyp_pair requires 0 <= z < 1")
    fp, fm = _K.fpm(arr)
    if scalar:
        return float(fp[0]), float(fm[0])
    return fp, fm


def hyp_half_derivative(z):
    """d/dz F(1/2,1/2;1;z); analytic limit 1/4 as z -> 0."""
    arr, scalar = _as_array(z)
    if np.any(arr < 0.0):
        raise DomainError("hyp_half_derivative requires z >= 0")
    if np.any(arr >= 1.0):
        raise SingularityError("derivative of hyp_half diverges at z = 1")
    return _unwrap(_K.fhalf_deriv(arr), scalar)


def hyp_aux(beta, z, rel_tol=1e-12, trunc=None):
    """F(1/2,beta;3/2;z) by Gauss series, 0 <= z < 1, 0 < beta <= 3.5.

    Adaptive by default; pass ``trunc`` to force a fixed term count (use
    :func:`hyp_aux_tail` to inspect the resulting tail bound).
    """
    value, _ = hyp_aux_tail(beta, z, rel_tol=rel_tol, trunc=trunc)
    return value

def hyp_aux_tail(beta, z, rel_tol=1e-12, trunc=None):
    if not 0.0 < beta <= 3.5:
        raise DomainError("hyp_aux covers 0 < beta <= 3.5")
    arr, scalar = _as_array(z)
    if np.any(arr < 0.0):
        raise DomainError("hyp_aux requires z >= 0")
    if np.any(arr >= 1.0):
        if beta >= 1.0:
            raise SingularityError("hyp_aux diverges at z = 1 for beta >= 1")
        raise DomainError("hyp_aux requires z < 1")
    n_cap = trunc.n_max if trunc is not None else 400_000
    value, tail = _K.faux(beta, arr, rel_tol, n_cap)
    if scalar:
        return float(value[0]), SeriesTruncation(n_cap, float(tail[0]))
    return value, SeriesTruncation(n_cap, float(np.max(tail)))


def hyp_log_expansion(a, b, z, trunc=None):
    """F(a,b;a+b;z) from the expansion about z=1, for 1-z < 0.1.

    Only the balanced case c = a+b with a,b > 0 is covered; anything else
    (e.g. F(-1/2,1/2;1;z), whose upper parameter is not a+b) raises
    OutOfRegimeError so the caller can pick the AGM/series route.
    """
    value, _ = hyp_log_expansion_tail(a, b, z, trunc=trunc)
    return value


def hyp_log_expansion_tail(a, b, z, trunc=None):
    if a <= 0.0 or b <= 0.0:
        raise OutOfRegimeError("log expansion needs a, b > 0 with c = a+b")
    arr, scalar = _as_array(z)
    w = 1.0 - arr
    if np.any(w <= 0.0):
        raise DomainError("log expansion requires z < 1")
    if np.any(w >= 0.1):
        raise OutOfRegimeError("log expansion restricted to 1-z < 0.1")
    n_max = trunc.n_max if trunc is not None else SeriesTruncation().n_max
    pref = math.exp(gammaln(a + b) - gammaln(a) - gammaln(b))
    lw = np.log(w)
    total = np.zeros_like(arr)
    coeff = 1.0
    wp = np.ones_like(arr)
    term = np.zeros_like(arr)
    for n in range(n_max):
        d_n = 2.0 * digamma(n + 1.0) - digamma(a + n) - digamma(b + n)
        term = pref * coeff * (d_n - lw) * wp
        total += term
        coeff *= (a + n) * (b + n) / (n + 1.0) ** 2
        wp = wp * w
    ratio = np.max(w) * (a + n_max) * (b + n_max) / (n_max + 1.0) ** 2
    if ratio >= 1.0:
        tail = math.inf
    else:
        # x1.5 covers the slowly varying digamma factor
        tail = 1.5 * float(np.max(np.abs(term))) * ratio / (1.0 - ratio)
    value = _unwrap(total, scalar)
    return value, SeriesTruncation(n_max, tail)


def hyp_pair_near_one(one_minus_z):
    """Both F(+-1/2,1/2;1;z) from the z~1 expansions, given w = 1-z.

    Kernel code switches to this route when w < 1e-4; accurate for w < 0.1.
    """
    arr, scalar = _as_array(one_minus_z)
    if np.any(arr <= 0.0) or np.any(arr >= 0.1):
        raise OutOfRegimeError("hyp_pair_near_one requires 0 < 1-z < 0.1")
    fp, fm = _K.flogpair(arr, _CP, _DP, _CM, _HM)
    if scalar:
        return float(fp[0]), float(fm[0])
    return fp, fm
