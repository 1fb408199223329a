"""Numba implementations of the hot elementwise kernels.

Mirrors ``_kernels_numpy``; see that module for the reference semantics.
All functions assume float64 inputs already validated by the public layer.
"""

import math

import numpy as np
from numba import njit

TWO_OVER_PI = 2.0 / math.pi


@njit(cache=True)
def agm_s(a, b):
    # quadratic convergence; 40 iterations is far beyond worst case
    for _ in range(40):
        if abs(a - b) <= 5e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


@njit(cache=True)
def fhalf_s(z):
    # F(1/2,1/2;1;z) = 1/agm(1, sqrt(1-z)); valid for z < 1, z may be negative
    return 1.0 / agm_s(1.0, math.sqrt(1.0 - z))


@njit(cache=True)
def fpm_s(z):
    # returns (F(1/2,1/2;1;z), F(-1/2,1/2;1;z)) for 0 <= z < 1 via the
    # AGM-with-sums route for the two complete elliptic integrals
    a = 1.0
    b = math.sqrt(1.0 - z)
    csum = 0.5 * z
    p = 0.5
    for _ in range(40):
        if abs(a - b) <= 1e-17 * a:
            break
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        p *= 2.0
        csum += p * c * c
    fp = 1.0 / (0.5 * (a + b))
    return fp, fp * (1.0 - csum)


@njit(cache=True)
def fhalf(z):
    out = np.empty(z.shape[0])
    for i in range(z.shape[0]):
        out[i] = fhalf_s(z[i])
    return out


@njit(cache=True)
def fpm(z):
    n = z.shape[0]
    fp = np.empty(n)
    fm = np.empty(n)
    for i in range(n):
        fp[i], fm[i] = fpm_s(z[i])
    return fp, fm


@njit(cache=True)
def fhalf_deriv_s(z):
    if z <= 1e-3:
        # series of dF/dz, ratio ~ z so a dozen terms suffice
        ak = 1.0
        s = 0.0
        zp = 1.0
        for k in range(1, 14):
            ak *= ((k - 0.5) / k) ** 2
            s += k * ak * zp
            zp *= z
        return s
    fp, fm = fpm_s(z)
    return (fm / (1.0 - z) - fp) / (2.0 * z)


@njit(cache=True)
def fhalf_deriv(z):
    out = np.empty(z.shape[0])
    for i in range(z.shape[0]):
        out[i] = fhalf_deriv_s(z[i])
    return out


@njit(cache=True)
def faux_s(beta, z, rel_tol, n_cap):
    # Gauss series of F(1/2,beta;3/2;z); returns (value, tail_bound, n_used).
    # The term-ratio hump sits below k=6 for beta <= 3.5, after which the
    # current ratio bounds all later ones.
    term = 1.0
    s = 1.0
    tail = math.inf
    k = 0
    while k < n_cap:
        ratio = z * ((k + 0.5) * (k + beta)) / ((k + 1.5) * (k + 1.0))
        term *= ratio
        s += term
        k += 1
        if k >= 6:
            r = ratio if ratio > z else z
            if r < 1.0:
                tail = term * r / (1.0 - r)
                if tail <= rel_tol * abs(s):
                    return s, tail, k
    return s, tail, k


@njit(cache=True)
def faux(beta, z, rel_tol, n_cap):
    n = z.shape[0]
    out = np.empty(n)
    tails = np.empty(n)
    for i in range(n):
        out[i], tails[i], _ = faux_s(beta, z[i], rel_tol, n_cap)
    return out, tails


@njit(cache=True)
def gover_s(z):
    # (F(1/2,1/2;1;z) - F(-1/2,1/2;1;z)) / z as a positive-term series;
    # used to evaluate the kernel bracket without cancellation for z < 3/4
    ak = 0.25
    s = 0.5
    zp = 1.0
    k = 1
    while k < 400:
        zp *= z
        k += 1
        ak *= ((k - 0.5) / k) ** 2
        term = ak * (2.0 * k / (2.0 * k - 1.0)) * zp
        s += term
        if term <= 1e-17 * s * (1.0 - z):
            break
    return s


@njit(cache=True)
def gover(z):
    out = np.empty(z.shape[0])
    for i in range(z.shape[0]):
        out[i] = gover_s(z[i])
    return out


@njit(cache=True)
def flogpair(w, c_p, d_p, c_m, h_m):
    # log-region expansions about z=1 with w = 1-z; coefficient arrays are
    # precomputed in dswave.special
    n = w.shape[0]
    fp = np.empty(n)
    fm = np.empty(n)
    for i in range(n):
        wi = w[i]
        lw = math.log(wi)
        sp = 0.0
        sm = 0.0
        wp = 1.0
        for j in range(c_p.shape[0]):
            sp += c_p[j] * (d_p[j] - lw) * wp
            sm += c_m[j] * (lw + h_m[j]) * wp
            wp *= wi
        fp[i] = sp
        fm[i] = TWO_OVER_PI - wi * sm
    return fp, fm


@njit(cache=True)
def leapfrog_homogeneous(u0, u1, ts, dx):
    """March u_tt = e^{2t} u_xx from the two start levels to ts[-1].

    Three-level scheme on the (smoothly) nonuniform time grid ts, Dirichlet
    ends.  Returns the final level.
    """
    nx = u0.shape[0]
    up = u0.copy()
    uc = u1.copy()
    un = np.empty(nx)
    inv_dx2 = 1.0 / (dx * dx)
    for k in range(1, ts.shape[0] - 1):
        dtm = ts[k] - ts[k - 1]
        dtp = ts[k + 1] - ts[k]
        r = dtp / dtm
        h = 0.5 * dtp * (dtp + dtm) * math.exp(2.0 * ts[k]) * inv_dx2
        un[0] = 0.0
        un[nx - 1] = 0.0
        for i in range(1, nx - 1):
            lap = uc[i + 1] - 2.0 * uc[i] + uc[i - 1]
            un[i] = uc[i] + r * (uc[i] - up[i]) + h * lap
        tmp = up
        up = uc
        uc = un
        un = tmp
    return uc
