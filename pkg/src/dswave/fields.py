"""Evaluable data fields and sampled solution fields.

The solvers consume *fields*: plain value/derivative callables vectorised
over numpy arrays, bundled with an effective support radius.  Named
families (gaussian:k, bump:R, constant) stand in for the smooth
compactly-supported data of the continuous problem.
"""

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional

import numpy as np

from .errors import CoverageError, DomainError

# Gaussians are cut off where they fall below ~1e-18; beyond this radius
# the fields are numerically indistinguishable from compactly supported.
_GAUSS_TAIL_LOG = 42.0


@dataclass(frozen=True)
class Field1D:
    """Scalar field on R: vectorised value and first derivative."""

    value: Callable
    derivative: Callable
    support_radius: float

    def __call__(self, x):
        return self.value(x)


@dataclass(frozen=True)
class FieldND:
    """Scalar field on R^n with gradient; points have shape (..., n).

    ``profile``, when present, gives (g, g') with value(x) = g(|x|), which
    solvers exploit to collapse angular quadratures.
    """

    ndim: int
    value: Callable
    gradient: Callable
    support_radius: float
    profile: Optional[tuple] = None

    def __call__(self, pts):
        return self.value(pts)


@dataclass(frozen=True)
class SpaceTimeField:
    """Source field f(x, t) with spatial gradient, on R^n x [0, T]."""

    ndim: int
    value: Callable  # (points, t) -> array
    gradient: Callable  # (points, t) -> array (..., n)
    support_radius: float

    def at_time(self, t):
        if self.ndim == 1:
            return Field1D(
                value=lambda x: self.value(x, t),
                derivative=lambda x: self.gradient(x, t),
                support_radius=self.support_radius,
            )
        return FieldND(
            ndim=self.ndim,
            value=lambda p: self.value(p, t),
            gradient=lambda p: self.gradient(p, t),
            support_radius=self.support_radius,
        )


@dataclass(frozen=True)
class CauchyData:
    """Initial displacement/velocity pair for the 1D Cauchy problem."""

    phi0: Optional[Field1D] = None
    phi1: Optional[Field1D] = None

    @property
    def support_radius(self):
        radii = [f.support_radius for f in (self.phi0, self.phi1) if f]
        return max(radii) if radii else 0.0


@dataclass(frozen=True)
class RadialOperand:
    """Field on R^n (n in {2,3}) wrapped for the spherical-means solvers."""

    phi: FieldND
    n: int

    def __post_init__(self):
        if self.n not in (2, 3):
            raise DomainError("RadialOperand covers n in {2, 3}")
        if self.phi.ndim != self.n:
            raise DomainError("field dimension does not match operand n")

    @property
    def support_radius(self):
        return self.phi.support_radius


def zero_1d():
    return Field1D(
        value=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        derivative=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        support_radius=0.0,
    )


def gaussian_1d(k=1.0):
    if k <= 0:
        raise DomainError("gaussian sharpness k must be positive")
    r = math.sqrt(_GAUSS_TAIL_LOG / k)
    return Field1D(
        value=lambda x: np.exp(-k * np.asarray(x, dtype=float) ** 2),
        derivative=lambda x: -2.0
        * k
        * np.asarray(x, dtype=float)
        * np.exp(-k * np.asarray(x, dtype=float) ** 2),
        support_radius=r,
    )


def gaussian_derivative_1d(k=1.0):
    """x * exp(-k x^2): odd, zero-mean member of the gaussian family."""
    if k <= 0:
        raise DomainError("gaussian sharpness k must be positive")
    r = math.sqrt(_GAUSS_TAIL_LOG / k)

    def val(x):
        x = np.asarray(x, dtype=float)
        return x * np.exp(-k * x**2)

    def der(x):
        x = np.asarray(x, dtype=float)
        return (1.0 - 2.0 * k * x**2) * np.exp(-k * x**2)

    return Field1D(value=val, derivative=der, support_radius=r)


def bump_1d(radius=1.0):
    """C-infinity bump exp(1 - 1/(1-(x/R)^2)) on |x| < R."""
    if radius <= 0:
        raise DomainError("bump radius must be positive")

    def val(x):
        x = np.asarray(x, dtype=float)
        s = (x / radius) ** 2
        out = np.zeros_like(x)
        inside = s < 1.0
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside]))
        return out

    def der(x):
        x = np.asarray(x, dtype=float)
        s = (x / radius) ** 2
        out = np.zeros_like(x)
        inside = s < 1.0
        si = s[inside]
        out[inside] = (
            np.exp(1.0 - 1.0 / (1.0 - si))
            * (-2.0 * x[inside] / radius**2)
            / (1.0 - si) ** 2
        )
        return out

    return Field1D(value=val, derivative=der, support_radius=radius)


def constant_1d(c=1.0, radius=math.inf):
    """Constant field, optionally hard-truncated at |x| > radius."""

    def val(x):
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, float(c))
        if math.isfinite(radius):
            out[np.abs(x) > radius] = 0.0
        return out

    return Field1D(
        value=val,
        derivative=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        support_radius=radius,
    )


def from_profile(n, g, gprime, support_radius):
    """Radial field on R^n from a scalar profile g(r)."""

    def val(pts):
        pts = np.asarray(pts, dtype=float)
        return g(np.sqrt(np.sum(pts**2, axis=-1)))

    def grad(pts):
        pts = np.asarray(pts, dtype=float)
        r = np.sqrt(np.sum(pts**2, axis=-1))
        safe = np.where(r > 0.0, r, 1.0)
        return pts * (np.where(r > 0.0, gprime(r) / safe, 0.0))[..., None]

    return FieldND(
        ndim=n,
        value=val,
        gradient=grad,
        support_radius=support_radius,
        profile=(g, gprime),
    )


def gaussian_nd(n, k=1.0):
    if k <= 0:
        raise DomainError("gaussian sharpness k must be positive")
    r = math.sqrt(_GAUSS_TAIL_LOG / k)
    return from_profile(
        n,
        lambda s: np.exp(-k * s**2),
        lambda s: -2.0 * k * s * np.exp(-k * s**2),
        r,
    )


def bump_nd(n, radius=1.0):
    b = bump_1d(radius)
    return from_profile(n, b.value, b.derivative, radius)


def constant_nd(n, c=1.0):
    return from_profile(
        n,
        lambda s: np.full_like(np.asarray(s, dtype=float), float(c)),
        lambda s: np.zeros_like(np.asarray(s, dtype=float)),
        math.inf,
    )


def parse_field_1d(spec):
    """Parse a CLI family name like gaussian:4, bump:0.5, constant:1."""
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    if name == "gaussian":
        return gaussian_1d(float(arg) if arg else 1.0)
    if name == "dgaussian":
        return gaussian_derivative_1d(float(arg) if arg else 1.0)
    if name == "bump":
        return bump_1d(float(arg) if arg else 1.0)
    if name == "constant":
        return constant_1d(float(arg) if arg else 1.0)
    if name in ("zero", "none", ""):
        return zero_1d()
    raise DomainError(f"unknown field family {spec!r}")


def parse_field_nd(n, spec):
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    if name == "gaussian":
        return gaussian_nd(n, float(arg) if arg else 1.0)
    if name == "bump":
        return bump_nd(n, float(arg) if arg else 1.0)
    if name == "constant":
        return constant_nd(n, float(arg) if arg else 1.0)
    raise DomainError(f"unknown field family {spec!r}")


def check_gradient_consistency(field, rng, n_probes=20, rel_tol=1e-6):
    """Verify the supplied derivative against central differences."""
    r = field.support_radius
    if not math.isfinite(r) or r == 0.0:
        r = 1.0
    h = 1e-6 * r
    if isinstance(field, Field1D):
        x = rng.uniform(-0.8 * r, 0.8 * r, size=n_probes)
        fd = (field.value(x + h) - field.value(x - h)) / (2.0 * h)
        an = field.derivative(x)
    else:
        x = rng.uniform(-0.6 * r, 0.6 * r, size=(n_probes, field.ndim))
        d = rng.normal(size=(n_probes, field.ndim))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        fd = (field.value(x + h * d) - field.value(x - h * d)) / (2.0 * h)
        an = np.sum(field.gradient(x) * d, axis=1)
    scale = np.max(np.abs(an)) + 1e-12
    err = np.max(np.abs(fd - an)) / scale
    if err > rel_tol:
        raise DomainError(f"gradient inconsistent with values (rel err {err:.2e})")
    return err


@dataclass
class SolutionField:
    """Solution samples u(x_i) at a fixed time, ready for norms.

    kind: 'cartesian' for a 1D line of samples, 'radial' for radii of an
    n-dimensional radial field.
    """

    x: np.ndarray
    u: np.ndarray
    t: float
    kind: str = "cartesian"
    ndim: int = 1
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.u = np.asarray(self.u, dtype=float)
        if self.x.shape != self.u.shape:
            raise DomainError("x and u must have matching shapes")
        if self.kind not in ("cartesian", "radial"):
            raise DomainError("kind must be 'cartesian' or 'radial'")
        if self.kind == "radial" and np.any(self.x < 0.0):
            raise DomainError("radial grids need nonnegative radii")

    def require_coverage(self, support_bound):
        lo, hi = self.x[0], self.x[-1]
        if self.kind == "radial":
            if hi < support_bound:
                raise CoverageError(
                    f"grid reaches {hi:.3g} < support bound {support_bound:.3g}"
                )
        elif hi < support_bound or lo > -support_bound:
            raise CoverageError(
                f"grid [{lo:.3g}, {hi:.3g}] misses support +-{support_bound:.3g}"
            )
