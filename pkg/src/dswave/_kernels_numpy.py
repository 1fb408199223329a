"""Pure-numpy reference implementations of the hot kernels.

These are the semantics of record; `_kernels_numba` must match them to
rounding.  Scalars go through the same vector code paths.
"""

import math

import numpy as np

TWO_OVER_PI = 2.0 / math.pi


def agm_s(a, b):
    for _ in range(40):
        if abs(a - b) <= 5e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def fhalf(z):
    """F(1/2,1/2;1;z) for z < 1 (negative z allowed) via the AGM."""
    a = np.ones_like(z)
    b = np.sqrt(1.0 - z)
    for _ in range(40):
        if np.all(np.abs(a - b) <= 5e-16 * a):
            break
        a, b = 0.5 * (a + b), np.sqrt(a * b)
    return 1.0 / (0.5 * (a + b))


def fpm(z):
    """(F(1/2,1/2;1;z), F(-1/2,1/2;1;z)) for 0 <= z < 1, AGM with sums."""
    a = np.ones_like(z)
    b = np.sqrt(1.0 - z)
    csum = 0.5 * z.copy()
    p = 0.5
    for _ in range(40):
        if np.all(np.abs(a - b) <= 1e-17 * a):
            break
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        p *= 2.0
        csum = csum + p * c * c
    fp = 1.0 / (0.5 * (a + b))
    return fp, fp * (1.0 - csum)


def fhalf_deriv(z):
    out = np.empty_like(z)
    small = z <= 1e-3
    if np.any(small):
        zs = z[small]
        ak = 1.0
        s = np.zeros_like(zs)
        zp = np.ones_like(zs)
        for k in range(1, 14):
            ak *= ((k - 0.5) / k) ** 2
            s += k * ak * zp
            zp = zp * zs
        out[small] = s
    if np.any(~small):
        zl = z[~small]
        fp, fm = fpm(zl)
        out[~small] = (fm / (1.0 - zl) - fp) / (2.0 * zl)
    return out


def faux_s(beta, z, rel_tol, n_cap):
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


def faux(beta, z, rel_tol, n_cap):
    term = np.ones_like(z)
    s = np.ones_like(z)
    tail = np.full_like(z, math.inf)
    k = 0
    while k < n_cap:
        ratio = z * ((k + 0.5) * (k + beta)) / ((k + 1.5) * (k + 1.0))
        term = term * ratio
        s += term
        k += 1
        if k >= 6:
            r = np.maximum(ratio, z)
            with np.errstate(divide="ignore", invalid="ignore"):
                tail = np.where(r < 1.0, term * r / (1.0 - r), math.inf)
            if np.all(tail <= rel_tol * np.abs(s)):
                break
    return s, tail


def gover(z):
    """(F(1/2,1/2;1;z) - F(-1/2,1/2;1;z)) / z, positive-term series, z < 3/4."""
    ak = 0.25
    s = np.full_like(z, 0.5)
    zp = np.ones_like(z)
    for k in range(2, 400):
        zp = zp * z
        ak *= ((k - 0.5) / k) ** 2
        term = ak * (2.0 * k / (2.0 * k - 1.0)) * zp
        s += term
        if np.all(term <= 1e-17 * s * (1.0 - z)):
            break
    return s


def flogpair(w, c_p, d_p, c_m, h_m):
    lw = np.log(w)
    sp = np.zeros_like(w)
    sm = np.zeros_like(w)
    wp = np.ones_like(w)
    for j in range(c_p.shape[0]):
        sp += c_p[j] * (d_p[j] - lw) * wp
        sm += c_m[j] * (lw + h_m[j]) * wp
        wp = wp * w
    return sp, TWO_OVER_PI - w * sm


def leapfrog_homogeneous(u0, u1, ts, dx):
    """Pure-numpy twin of the numba stepper; see that module."""
    up = u0.copy()
    uc = u1.copy()
    inv_dx2 = 1.0 / (dx * dx)
    for k in range(1, ts.shape[0] - 1):
        dtm = ts[k] - ts[k - 1]
        dtp = ts[k + 1] - ts[k]
        r = dtp / dtm
        h = 0.5 * dtp * (dtp + dtm) * math.exp(2.0 * ts[k]) * inv_dx2
        un = np.empty_like(uc)
        un[0] = 0.0
        un[-1] = 0.0
        un[1:-1] = uc[1:-1] + r * (uc[1:-1] - up[1:-1]) + h * (
            uc[2:] - 2.0 * uc[1:-1] + uc[:-2]
        )
        up, uc = uc, un
    return uc
