"""Spherical-means machinery and the n in {2,3} solution formulas.

The n-dimensional solution is assembled from flat-space wave solutions
evaluated at scaled radii and weighted by the 1D kernels:

    u(x,t) = e^{-t/2} v0(x, Z) + 2 int_0^Z v0(x,z) K0(z,t) dz
                               + 2 int_0^Z v1(x,z) K1(z,t) dz,   Z = e^t-1,

where v_phi(x,r) is the flat wave solution with displacement datum phi and
zero velocity, evaluated at time r: the classic sphere-mean derivative
form for n=3 and the weighted ball integral (method of descent) for n=2.
The source problem stacks the same kernel over source times b.
"""

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import quadrature as quad
from .errors import AccuracyError, DomainError, UnsupportedDimensionError
from .fields import RadialOperand
from .kernels import kernel_K0_values, kernel_K1_values, propagator_E_values
from .quadrature import QuadratureConfig
from .solver_1d import SolutionSample, _B_SPLIT

_MAX_ANGULAR = 1024


@dataclass(frozen=True)
class SphericalMeanCfg:
    """Angular resolutions for the sphere/ball rules.

    n_angular: azimuth count (full circle), even and >= 16;
    n_polar: Gauss nodes across the polar angle (n=3 sphere, n=2 ball);
    the angular grid is doubled until the result moves less than rel_tol.
    """

    n_angular: int = 64
    n_polar: int = 24
    rel_tol: float = 1e-10
    radial_rule: QuadratureConfig = dc_field(default_factory=QuadratureConfig)

    def __post_init__(self):
        if self.n_angular < 16 or self.n_angular % 2:
            raise DomainError("n_angular must be even and >= 16")
        if self.n_polar < 4:
            raise DomainError("n_polar must be >= 4")


def _circle_dirs(n):
    th = 2.0 * math.pi * np.arange(n) / n
    return np.stack([np.cos(th), np.sin(th)], axis=-1)


def _sphere_nodes(n_polar, n_azimuth):
    cu, wu = np.polynomial.legendre.leggauss(n_polar)
    th = 2.0 * math.pi * np.arange(n_azimuth) / n_azimuth
    su = np.sqrt(1.0 - cu**2)
    dirs = np.empty((n_polar, n_azimuth, 3))
    dirs[..., 0] = su[:, None] * np.cos(th)[None, :]
    dirs[..., 1] = su[:, None] * np.sin(th)[None, :]
    dirs[..., 2] = cu[:, None]
    w = (0.5 * wu)[:, None] / n_azimuth
    return dirs.reshape(-1, 3), np.broadcast_to(w, (n_polar, n_azimuth)).ravel()


def _mean_once(op, x, rs, n_polar, n_azimuth):
    x = np.asarray(x, dtype=float)
    rs = np.abs(np.asarray(rs, dtype=float))
    if op.n == 2:
        dirs = _circle_dirs(n_azimuth)
        w = np.full(n_azimuth, 1.0 / n_azimuth)
    else:
        dirs, w = _sphere_nodes(n_polar, n_azimuth)
    pts = x[None, None, :] + rs[:, None, None] * dirs[None, :, :]
    return np.dot(op.phi.value(pts), w)


def spherical_mean(op, x, r, cfg=None):
    """Average of the field over the sphere |y - x| = |r| (even in r)."""
    values = spherical_mean_many(op, x, np.atleast_1d(float(r)), cfg)
    return float(values[0])


def spherical_mean_many(op, x, rs, cfg=None):
    cfg = cfg or SphericalMeanCfg()
    n_pol, n_az = cfg.n_polar, cfg.n_angular
    prev = _mean_once(op, x, rs, n_pol, n_az)
    while n_az < _MAX_ANGULAR:
        n_pol, n_az = 2 * n_pol, 2 * n_az
        cur = _mean_once(op, x, rs, n_pol, n_az)
        if np.max(np.abs(cur - prev)) <= cfg.rel_tol * (np.max(np.abs(cur)) + 1e-30):
            return cur
        prev = cur
    return prev


def _kirchhoff_general(op, x, rs, n_polar, n_azimuth):
    """Flat wave solution v_phi(x, r) for each r, generic field path."""
    x = np.asarray(x, dtype=float)
    rs = np.asarray(rs, dtype=float)
    out = np.empty_like(rs)
    if op.n == 3:
        dirs, w = _sphere_nodes(n_polar, n_azimuth)
        for i0 in range(0, rs.size, 256):
            sl = slice(i0, min(i0 + 256, rs.size))
            pts = x[None, None, :] + rs[sl, None, None] * dirs[None, :, :]
            mean = np.dot(op.phi.value(pts), w)
            slope = np.dot(np.sum(op.phi.gradient(pts) * dirs[None, :, :], axis=-1), w)
            out[sl] = mean + rs[sl] * slope
        return out
    # n = 2: ball integral with |y| = sin(eta) substitution
    eta, weta = quad.gauss_nodes(0.0, 0.5 * math.pi, n_panels=1, n_nodes=n_polar)
    se = np.sin(eta)
    dirs = _circle_dirs(n_azimuth)
    for i0 in range(0, rs.size, 256):
        sl = slice(i0, min(i0 + 256, rs.size))
        y = se[:, None, None] * dirs[None, :, :]  # (eta, theta, 2)
        pts = x[None, None, None, :] + rs[sl, None, None, None] * y[None, ...]
        vals = op.phi.value(pts)
        grads = np.sum(op.phi.gradient(pts) * y[None, ...], axis=-1)
        wgt = (weta * se)[None, :, None] / n_azimuth
        mean = np.sum(vals * wgt, axis=(1, 2))
        slope = np.sum(grads * wgt, axis=(1, 2))
        out[sl] = mean + rs[sl] * slope
    return out


def _kirchhoff_radial(op, rho, rs, n_polar, n_azimuth):
    """Radial-profile fast path; rho and rs broadcast elementwise."""
    g, gp = op.phi.profile
    rho = np.asarray(rho, dtype=float)
    rs = np.asarray(rs, dtype=float)
    if op.n == 3:
        cu, wu = np.polynomial.legendre.leggauss(max(n_polar, 24))
        s2 = rho[..., None] ** 2 + rs[..., None] ** 2 + 2.0 * rho[..., None] * rs[..., None] * cu
        s = np.sqrt(np.maximum(s2, 0.0))
        mean = 0.5 * np.dot(g(s), wu)
        safe = np.where(s > 0.0, s, 1.0)
        proj = np.where(s > 0.0, (rho[..., None] * cu + rs[..., None]) / safe, 0.0)
        slope = 0.5 * np.dot(gp(s) * proj, wu)
        return mean + rs * slope
    # n=2: eta (Gauss) x theta (uniform) over the unit ball
    eta, weta = quad.gauss_nodes(0.0, 0.5 * math.pi, n_panels=1, n_nodes=n_polar)
    se = np.sin(eta)
    th = 2.0 * math.pi * np.arange(n_azimuth) / n_azimuth
    ct = np.cos(th)
    ell = rs[..., None] * se  # (..., eta)
    A = rho[..., None, None] ** 2 + ell[..., None] ** 2
    B = 2.0 * rho[..., None, None] * ell[..., None]
    s = np.sqrt(np.maximum(A + B * ct, 0.0))
    mean_th = np.mean(g(s), axis=-1)
    safe = np.where(s > 0.0, s, 1.0)
    proj = np.where(s > 0.0, (rho[..., None, None] * ct + ell[..., None]) / safe, 0.0)
    slope_th = np.mean(gp(s) * proj, axis=-1)
    mean = np.dot(mean_th * se, weta)
    slope = np.dot(slope_th * se**2, weta)
    return mean + rs * slope


def wave_kirchhoff_many(op, x, rs, cfg=None):
    """v_phi(x, r) for an array of radii, with angular doubling."""
    if op.n not in (2, 3):
        raise UnsupportedDimensionError("wave operators cover n in {2, 3}")
    cfg = cfg or SphericalMeanCfg()
    x = np.asarray(x, dtype=float)
    rs = np.abs(np.asarray(rs, dtype=float))
    radial = op.phi.profile is not None
    rho = float(np.linalg.norm(x))

    def once(n_pol, n_az):
        if radial:
            return _kirchhoff_radial(op, np.full_like(rs, rho), rs, n_pol, n_az)
        return _kirchhoff_general(op, x, rs, n_pol, n_az)

    n_pol, n_az = cfg.n_polar, cfg.n_angular
    prev = once(n_pol, n_az)
    while n_az < _MAX_ANGULAR:
        n_pol, n_az = 2 * n_pol, 2 * n_az
        cur = once(n_pol, n_az)
        if np.max(np.abs(cur - prev)) <= cfg.rel_tol * (np.max(np.abs(cur)) + 1e-30):
            return cur
        prev = cur
    return prev


def wave_kirchhoff(op, x, r, cfg=None):
    """Flat-space wave solution at time r with displacement datum op.phi."""
    return float(wave_kirchhoff_many(op, x, np.atleast_1d(float(r)), cfg)[0])


def wave_kirchhoff_pairs(op, rho, rs, cfg=None):
    """Radial fast path over paired (rho_i, r_i) arrays (profile required)."""
    if op.phi.profile is None:
        raise DomainError("pairs evaluation needs a radial profile")
    cfg = cfg or SphericalMeanCfg()
    return _kirchhoff_radial(
        op, np.asarray(rho, float), np.abs(np.asarray(rs, float)), cfg.n_polar, cfg.n_angular
    )


def _window(rho, radius, lo_cap, hi_cap):
    if not math.isfinite(radius):
        return lo_cap, hi_cap
    return max(lo_cap, rho - radius), min(hi_cap, rho + radius)


def solve_cauchy_nd(phi0, phi1, x, t, cfg=None, quad_cfg=None):
    """u(x,t) for initial data (phi0, phi1) given as RadialOperands."""
    if t <= 0.0:
        raise DomainError("solve_cauchy_nd needs t > 0")
    ops = [op for op in (phi0, phi1) if op is not None]
    if not ops:
        return SolutionSample(0.0, 0.0, t, 0.0)
    n = ops[0].n
    if any(op.n != n for op in ops):
        raise DomainError("data dimensions disagree")
    cfg = cfg or SphericalMeanCfg()
    quad_cfg = quad_cfg or cfg.radial_rule
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.size == 1 and n > 1:
        x = np.concatenate([x, np.zeros(n - 1)])
    rho = float(np.linalg.norm(x))
    Z = math.expm1(t)

    def evaluate(level):
        u = 0.0
        if phi0 is not None:
            if abs(Z - rho) <= phi0.support_radius:
                u += math.exp(-0.5 * t) * wave_kirchhoff(phi0, x, Z, cfg)
            lo, hi = _window(rho, phi0.support_radius, 0.0, Z)
            if hi > lo:
                z, w = quad.tanh_sinh_nodes(lo, hi, level=4 + level)
                v = wave_kirchhoff_many(phi0, x, z, cfg)
                u += 2.0 * float(np.dot(w, v * kernel_K0_values(z, t)))
        if phi1 is not None:
            lo, hi = _window(rho, phi1.support_radius, 0.0, Z)
            if hi > lo:
                z, w = quad.gauss_nodes(lo, hi, n_panels=6 * 2**level, n_nodes=12)
                v = wave_kirchhoff_many(phi1, x, z, cfg)
                u += 2.0 * float(np.dot(w, v * kernel_K1_values(z, t)))
        return u

    prev = evaluate(0)
    err = math.inf
    for level in range(1, quad_cfg.max_refinements + 1):
        cur = evaluate(level)
        err = abs(cur - prev)
        if err <= quad_cfg.tolerance(cur):
            return SolutionSample(u=cur, est_err=err, t=t, x=rho)
        prev = cur
    raise AccuracyError("radial quadrature did not converge", best=prev, est_err=err)


def solve_source_nd(f, x, t, cfg=None, quad_cfg=None):
    """u(x,t) for zero data and source f (SpaceTimeField, ndim in {2,3})."""
    if t <= 0.0:
        raise DomainError("solve_source_nd needs t > 0")
    if f.ndim not in (2, 3):
        raise UnsupportedDimensionError("solve_source_nd covers n in {2, 3}")
    cfg = cfg or SphericalMeanCfg()
    quad_cfg = quad_cfg or cfg.radial_rule
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.size == 1:
        x = np.concatenate([x, np.zeros(f.ndim - 1)])
    rho = float(np.linalg.norm(x))
    et = math.exp(t)
    split = max(t - _B_SPLIT, 0.0)

    def slab(b_nodes, b_weights, level):
        total = 0.0
        for b, wb in zip(b_nodes, b_weights):
            reach = et - math.exp(b)
            if reach <= 0.0:
                continue
            lo, hi = _window(rho, f.support_radius, 0.0, reach)
            if hi <= lo:
                continue
            r, wr = quad.gauss_nodes(lo, hi, n_panels=3 * 2**level, n_nodes=10)
            op = RadialOperand(phi=f.at_time(b), n=f.ndim)
            v = wave_kirchhoff_many(op, x, r, cfg)
            total += wb * float(np.dot(wr, v * propagator_E_values(r, t, b)))
        return total

    def evaluate(level):
        total = 0.0
        if split > 0.0:
            b, wb = quad.gauss_nodes(0.0, split, n_panels=4 * 2**level, n_nodes=10)
            total += slab(b, wb, level)
        b, wb = quad.tanh_sinh_nodes(split, t, level=3 + level)
        total += slab(b, wb, level)
        return 2.0 * total

    prev = evaluate(0)
    err = math.inf
    for level in range(1, quad_cfg.max_refinements + 1):
        cur = evaluate(level)
        err = abs(cur - prev)
        if err <= quad_cfg.tolerance(cur):
            return SolutionSample(u=cur, est_err=err, t=t, x=rho)
        prev = cur
    raise AccuracyError("source quadrature did not converge", best=prev, est_err=err)


@dataclass(frozen=True)
class HuygensRow:
    t: float
    u_desitter: float
    u_flat: float
    est_err: float


def huygens_tail_probe(phi1, t_grid, cfg=None, quad_cfg=None):
    """Tail of the solution at the origin after the forward front has left.

    The flat-space comparator is the Kirchhoff solution t * mean(phi1) at
    radius t, which vanishes identically once t exceeds the data support.
    """
    if phi1.n != 3:
        raise UnsupportedDimensionError("the sharp-front comparison needs n = 3")
    cfg = cfg or SphericalMeanCfg()
    rows = []
    for t in np.asarray(t_grid, dtype=float):
        sample = solve_cauchy_nd(None, phi1, np.zeros(3), float(t), cfg, quad_cfg)
        u_flat = float(t) * spherical_mean(phi1, np.zeros(3), float(t), cfg)
        rows.append(
            HuygensRow(
                t=float(t),
                u_desitter=sample.u,
                u_flat=u_flat,
                est_err=max(sample.est_err, 1e-14),
            )
        )
    return rows
