"""Quadrature building blocks used by the solvers and audits.

Two rules cover every integral in the package: composite Gauss-Legendre
for smooth integrands, and tanh-sinh (double-exponential) for integrands
with endpoint singularities or unknown endpoint behaviour.  Node
constructors are exposed so callers can sweep vectorised integrands over
many parameters at once; ``integrate`` is the plain adaptive driver.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AccuracyError, DomainError

GAUSS = "gauss_legendre"
TANH_SINH = "double_exponential"


@dataclass(frozen=True)
class QuadratureConfig:
    rule: str = GAUSS
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_refinements: int = 8

    def __post_init__(self):
        if self.rule not in (GAUSS, TANH_SINH):
            raise DomainError(f"unknown quadrature rule {self.rule!r}")
        if self.abs_tol <= 0.0 or self.rel_tol <= 0.0:
            raise DomainError("quadrature tolerances must be positive")
        if self.max_refinements < 1:
            raise DomainError("max_refinements must be >= 1")

    def tolerance(self, scale):
        return max(self.abs_tol, self.rel_tol * abs(scale))


@lru_cache(maxsize=64)
def _leggauss(n):
    return np.polynomial.legendre.leggauss(n)


def gauss_nodes(a, b, n_panels=8, n_nodes=12):
    """Composite Gauss-Legendre nodes/weights on [a, b]."""
    x0, w0 = _leggauss(n_nodes)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = (mid[:, None] + half[:, None] * x0[None, :]).ravel()
    w = (half[:, None] * w0[None, :]).ravel()
    return x, w


def graded_gauss_nodes(a, b, n_panels=8, n_nodes=12, grade=2.0, at="left"):
    """Gauss nodes with panel widths graded toward one endpoint."""
    s = np.linspace(0.0, 1.0, n_panels + 1) ** grade
    if at == "left":
        edges = a + (b - a) * s
    else:
        edges = b - (b - a) * s[::-1]
    x0, w0 = _leggauss(n_nodes)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = (mid[:, None] + half[:, None] * x0[None, :]).ravel()
    w = (half[:, None] * w0[None, :]).ravel()
    return x, w


def tanh_sinh_nodes(a, b, level=6):
    """Tanh-sinh nodes/weights on (a, b); endpoints are never touched.

    ``level`` halves the mesh each time it increases by one.
    """
    h = 1.0 / 2.0 ** (level - 2)
    # cut where the node gap to the endpoint underflows double precision
    t_max = math.asinh(2.0 / math.pi * math.log(4.0 / 1e-290))
    k = np.arange(-int(t_max / h), int(t_max / h) + 1)
    t = k * h
    st = np.sinh(t)
    arg = 0.5 * math.pi * np.abs(st)
    u = np.tanh(0.5 * math.pi * st)
    sech = 2.0 * np.exp(-arg) / (1.0 + np.exp(-2.0 * arg))
    w = 0.5 * math.pi * np.cosh(t) * sech**2 * h
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x = mid + half * u
    keep = (x > a) & (x < b)
    return x[keep], half * w[keep]


def _once(f, a, b, rule, refinement):
    if rule == GAUSS:
        x, w = gauss_nodes(a, b, n_panels=4 * 2**refinement, n_nodes=12)
    else:
        x, w = tanh_sinh_nodes(a, b, level=4 + refinement)
    return float(np.dot(w, f(x)))


def integrate(f, a, b, cfg=None):
    """Adaptive 1D integral of a vectorised integrand.

    Returns (value, est_err); raises AccuracyError (carrying the best
    estimate) when the refinement budget is exhausted.
    """
    cfg = cfg or QuadratureConfig()
    if a == b:
        return 0.0, 0.0
    prev = _once(f, a, b, cfg.rule, 0)
    for refinement in range(1, cfg.max_refinements + 1):
        cur = _once(f, a, b, cfg.rule, refinement)
        err = abs(cur - prev)
        if err <= cfg.tolerance(cur):
            return cur, err
        prev = cur
    raise AccuracyError(
        f"integral did not converge after {cfg.max_refinements} refinements",
        best=prev,
        est_err=err,
    )


def integrate_power_endpoint(g, power, upper, cfg=None):
    """Integral of r^power * g(r) over (0, upper) with power in (-1, 0].

    The substitution r = u^(1/(1+power)) absorbs the algebraic endpoint
    factor exactly, leaving a smooth integrand for the Gauss rule.
    """
    if not -1.0 < power <= 0.0:
        raise DomainError("power must lie in (-1, 0]")
    if upper <= 0.0:
        return 0.0, 0.0
    p1 = 1.0 + power
    top = upper**p1

    def h(u):
        r = u ** (1.0 / p1)
        return g(r) / p1

    return integrate(h, 0.0, top, cfg)
