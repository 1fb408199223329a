"""Propagator kernel, characteristic-coordinate Riemann function, and the
two Cauchy kernels for u_tt = e^{2t} u_xx.

The propagator

    E(x,t;x0,t0) = F(1/2,1/2;1;zeta) / sqrt((e^t0+e^t)^2 - (x-x0)^2),
    zeta = ((e^t-e^t0)^2 - (x-x0)^2) / ((e^t+e^t0)^2 - (x-x0)^2),

lives on the solid light cone |x-x0| <= |e^t - e^t0|; zeta runs from 0 on
the cone surface to its maximum on the axis, approaching 1 only for large
|t-t0| where F has its logarithmic singularity.

K1(z,t) = E(z,t;0,0) propagates initial velocity; K0 propagates initial
displacement and combines F(+-1/2,...) in a bracket whose two terms cancel
to leading order near z = e^t-1.  K0 is evaluated through a subtracted
series there, so the kernel stays accurate up to the cone; the contract
still treats z >= e^t-1 as out of domain.

``identity_ledger`` numerically re-checks the closed-form identities the
solver formulas rest on (translation/evenness, boundary values, boundary
derivatives) and reports both sides per sample point.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import special
from ._backend import kernels as _K
from .errors import DomainError, SingularLocusError, SupportError

# regime switches: hand F(+-1/2) to the log-expansion route when
# 1 - zeta < ZETA_LOG; use the subtracted bracket for K0 when zeta < 1/2
ZETA_LOG = 1e-4
ZETA_CONE = 1e-4
_K0_SPLIT = 0.5

BOUNDARY_RTOL = 1e-14


class ConeClass(Enum):
    FORWARD = "forward"
    BACKWARD = "backward"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


class Regime(Enum):
    INTERIOR = "interior"
    NEAR_LIGHT_CONE = "near_light_cone"
    NEAR_SINGULAR_LOCUS = "near_singular_locus"


@dataclass(frozen=True)
class ConeQuery:
    """Observation point (x,t) against source point (x0,t0); x may be a
    scalar or an n-vector."""

    x: object
    t: float
    x0: object = 0.0
    t0: float = 0.0

    def separation(self):
        d = np.asarray(self.x, dtype=float) - np.asarray(self.x0, dtype=float)
        if d.ndim == 0:
            return abs(float(d))
        return float(np.linalg.norm(d))


@dataclass(frozen=True)
class CharCoords:
    """Characteristic coordinates l = x+e^t, m = x-e^t of an observation
    point, with the source written as (a, b_char) = (e^b, -e^b)."""

    l: float
    m: float
    a: float
    b_char: float

    @classmethod
    def from_spacetime(cls, x, t, b):
        eb = math.exp(b)
        return cls(l=x + math.exp(t), m=x - math.exp(t), a=eb, b_char=-eb)

    def to_spacetime(self):
        if self.l <= self.m:
            raise DomainError("need l > m for a spacetime point")
        return 0.5 * (self.l + self.m), math.log(0.5 * (self.l - self.m))


@dataclass(frozen=True)
class KernelValue:
    value: float
    regime: Regime
    est_err: float


def classify_cone(q):
    """Forward/Backward/Boundary/Outside for a source/observation pair."""
    et, et0 = math.exp(q.t), math.exp(q.t0)
    d = q.separation()
    reach = et - et0
    tol = BOUNDARY_RTOL * (et + et0)
    if abs(d - abs(reach)) <= tol:
        return ConeClass.BOUNDARY
    if d < abs(reach):
        return ConeClass.FORWARD if reach > 0.0 else ConeClass.BACKWARD
    return ConeClass.OUTSIDE


def _zeta_parts(d, t, t0):
    """(D, N, zeta) with D=(e^t-e^t0)^2-d^2, N=(e^t+e^t0)^2-d^2."""
    et, et0 = np.exp(t), np.exp(t0)
    reach = np.abs(et - et0)
    D = (reach - d) * (reach + d)
    N = (et + et0 - d) * (et + et0 + d)
    return D, N, D / N


def _fhalf_routed(zeta):
    """F(1/2,1/2;1;zeta) for zeta < 1, switching to the log expansion
    within ZETA_LOG of the singularity."""
    zeta = np.asarray(zeta, dtype=float)
    out = np.empty_like(zeta)
    w = 1.0 - zeta
    near = w < ZETA_LOG
    if np.any(near):
        out[near] = special.hyp_pair_near_one(w[near])[0]
    if np.any(~near):
        out[~near] = _K.fhalf(zeta[~near])
    return out


def _regime_of(zeta):
    if 1.0 - zeta < ZETA_LOG:
        return Regime.NEAR_SINGULAR_LOCUS
    if zeta < ZETA_CONE:
        return Regime.NEAR_LIGHT_CONE
    return Regime.INTERIOR


def raw_E(x, t, b):
    """E(x,t;0,b) evaluated from the closed form with no support check.

    Valid wherever zeta < 1, which includes a neighbourhood of the cone
    surface on both sides; used for difference stencils that straddle it.
    """
    x = np.asarray(x, dtype=float)
    D, N, zeta = _zeta_parts(np.abs(x), t, b)
    if np.any(zeta >= 1.0):
        raise DomainError("raw_E needs zeta < 1")
    return _fhalf_routed(zeta) / np.sqrt(N)


def propagator_E(q):
    """Propagator value on the solid cone; SupportError outside."""
    cls = classify_cone(q)
    if cls is ConeClass.OUTSIDE:
        raise SupportError(f"{q} lies outside both light cones")
    d = q.separation()
    D, N, zeta = _zeta_parts(d, q.t, q.t0)
    if cls is ConeClass.BOUNDARY:
        zeta = 0.0 if zeta < ZETA_CONE else zeta
    if not zeta < 1.0:
        raise DomainError("zeta >= 1 cannot occur on the solid cone")
    value = float(_fhalf_routed(np.atleast_1d(zeta))[0] / math.sqrt(N))
    return KernelValue(value, _regime_of(zeta), 5e-15 * abs(value))


def propagator_E_values(d, t, t0):
    """Vectorised E over separations d inside the cone of (.,t0)."""
    d = np.abs(np.asarray(d, dtype=float))
    reach = abs(math.exp(t) - math.exp(t0))
    if np.any(d > reach * (1.0 + 1e-12)):
        raise SupportError("separation outside the light cone")
    D, N, zeta = _zeta_parts(np.minimum(d, reach), t, t0)
    return _fhalf_routed(np.maximum(zeta, 0.0)) / np.sqrt(N)


def riemann_function(l, m, a, b):
    """Riemann function of the characteristic-form operator.

    R(l,m;a,b) = (l-m) (l-b)^(-1/2) (a-m)^(-1/2) F(1/2,1/2;1;arg) with
    arg = ((l-a)(m-b)) / ((l-b)(m-a)).
    """
    lb = l - b
    am = a - m
    if lb <= 0.0 or am <= 0.0:
        raise DomainError("riemann_function needs l > b and a > m")
    if l <= m or a <= b:
        raise DomainError("need l > m and a > b")
    arg = ((l - a) * (m - b)) / (lb * (m - a))
    if not arg < 1.0:
        raise DomainError("hypergeometric argument must stay below 1")
    f = float(_fhalf_routed(np.atleast_1d(arg))[0])
    return (l - m) / math.sqrt(lb * am) * f


def riemann_R(c):
    return riemann_function(c.l, c.m, c.a, c.b_char)


def kernel_K1_values(z, t):
    """Velocity kernel K1(z,t) = E(z,t;0,0) on 0 <= z <= e^t-1."""
    if t <= 0.0:
        raise DomainError("kernel_K1 needs t > 0")
    z = np.asarray(z, dtype=float)
    top = math.exp(t) - 1.0
    if np.any(z < 0.0) or np.any(z > top * (1.0 + 1e-12)):
        raise SupportError("K1 support is 0 <= z <= e^t - 1")
    D, N, zeta = _zeta_parts(np.minimum(z, top), t, 0.0)
    return _fhalf_routed(np.maximum(zeta, 0.0)) / np.sqrt(N)


def kernel_K1(z, t):
    value = float(kernel_K1_values(np.atleast_1d(float(z)), t)[0])
    _, _, zeta = _zeta_parts(float(z), t, 0.0)
    return KernelValue(value, _regime_of(max(zeta, 0.0)), 5e-15 * abs(value))


def kernel_K0_values(z, t):
    """Displacement kernel K0(z,t) on 0 <= z < e^t-1.

    K0 = -[(1-e^{2t}+z^2) F(-1/2,.;zeta) + 2(e^t-1) F(1/2,.;zeta)]
         / (2 ((e^t-1)^2-z^2) sqrt((e^t+1)^2-z^2)).

    For zeta < 1/2 the bracket is rewritten through the difference series
    (F(1/2)-F(-1/2))/zeta, which removes the leading cancellation; the
    kernel is then evaluable arbitrarily close to the cone.
    """
    if t <= 0.0:
        raise DomainError("kernel_K0 needs t > 0")
    z = np.asarray(z, dtype=float)
    top = math.exp(t) - 1.0
    if np.any(z < 0.0):
        raise SupportError("K0 needs z >= 0")
    if np.any(z >= top):
        raise SingularLocusError(
            "pointwise K0 undefined at z >= e^t - 1; integrate against it instead"
        )
    et = math.exp(t)
    D, N, zeta = _zeta_parts(z, t, 0.0)
    out = np.empty_like(z)
    small = zeta < _K0_SPLIT
    if np.any(small):
        zs = zeta[small]
        fm = _K.fpm(zs)[1]
        out[small] = fm / (2.0 * np.sqrt(N[small])) - (et - 1.0) * _K.gover(
            zs
        ) / N[small] ** 1.5
    if np.any(~small):
        zl = zeta[~small]
        w = 1.0 - zl
        fp = np.empty_like(zl)
        fm = np.empty_like(zl)
        near = w < ZETA_LOG
        if np.any(near):
            fp[near], fm[near] = special.hyp_pair_near_one(w[near])
        if np.any(~near):
            fp[~near], fm[~near] = _K.fpm(zl[~near])
        zz = z[~small]
        bracket = (1.0 - et * et + zz * zz) * fm + 2.0 * (et - 1.0) * fp
        out[~small] = -bracket / (2.0 * D[~small] * np.sqrt(N[~small]))
    return out


def kernel_K0(z, t):
    value = float(kernel_K0_values(np.atleast_1d(float(z)), t)[0])
    _, _, zeta = _zeta_parts(float(z), t, 0.0)
    return KernelValue(value, _regime_of(zeta), 2e-14 * abs(value))


# ---------------------------------------------------------------------------
# finite-difference helpers and the identity ledger


def _central_diff4(f, x0, h):
    """4th-order central first derivative of a scalar function."""
    return (
        -f(x0 + 2.0 * h) + 8.0 * f(x0 + h) - 8.0 * f(x0 - h) + f(x0 - 2.0 * h)
    ) / (12.0 * h)


def interior_residual(x, t, b, h):
    """Discrete (d_tt - e^{2t} d_xx) of E(.,.;0,b) with 4th-order stencils."""
    c = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
    off = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
    utt = np.dot(c, raw_E(np.full(5, x), t + off * h, b)) / h**2
    uxx = np.dot(c, raw_E(x + off * h, t, b)) / h**2
    return utt - math.exp(2.0 * t) * uxx


IDENTITY_IDS = (
    "translation",
    "evenness",
    "boundary_value",
    "boundary_flux",
    "boundary_flux_weighted",
    "edge_slope_left",
    "edge_slope_right",
    "edge_source_rate",
    "source_rate_interior",
)


@dataclass(frozen=True)
class LedgerRow:
    identity: str
    point: str
    lhs: float
    rhs: float

    @property
    def abs_err(self):
        return abs(self.lhs - self.rhs)


def _fd_step(scale):
    return 1e-5 * max(1.0, abs(scale))


def identity_ledger(t_samples, n_samples=50, seed=0):
    """Evaluate both sides of the closed-form propagator identities.

    Derivative-bearing identities use 4th-order central differences with
    step 1e-5 scaled by the local magnitude.  Returns a list of LedgerRow.
    """
    rng = np.random.default_rng(seed)
    rows = []
    t_samples = np.asarray(t_samples, dtype=float)
    for _ in range(n_samples):
        t = float(rng.choice(t_samples))
        b = float(rng.uniform(-1.0, t - 0.05))
        et, eb = math.exp(t), math.exp(b)
        reach = et - eb
        wfrac = float(rng.uniform(-0.9, 0.9))
        w = wfrac * reach
        y = float(rng.uniform(-2.0, 2.0))

        q4 = ConeQuery(x=y + w, t=t, x0=y, t0=b)
        rows.append(
            LedgerRow(
                "translation",
                f"x={y + w:.4g},y={y:.4g},t={t:.4g},b={b:.4g}",
                propagator_E(q4).value,
                propagator_E(ConeQuery(w, t, 0.0, b)).value,
            )
        )
        rows.append(
            LedgerRow(
                "evenness",
                f"x={w:.4g},t={t:.4g},b={b:.4g}",
                propagator_E(ConeQuery(w, t, 0.0, b)).value,
                propagator_E(ConeQuery(-w, t, 0.0, b)).value,
            )
        )

        # observation pinned on the cone surface of (0, ln(e^t - x))
        x_on = float(rng.uniform(0.05, 0.95)) * et
        b_on = math.log(et - x_on)
        rows.append(
            LedgerRow(
                "boundary_value",
                f"x={x_on:.4g},t={t:.4g}",
                propagator_E(ConeQuery(x_on, t, 0.0, b_on)).value,
                0.5 / math.sqrt(et * (et - x_on)),
            )
        )

        # rate of change of the propagator along its own cone surface
        h = _fd_step(b)
        rows.append(
            LedgerRow(
                "boundary_flux",
                f"t={t:.4g},b={b:.4g}",
                _central_diff4(
                    lambda bb: math.exp(bb)
                    * float(raw_E(math.exp(bb) - et, t, bb)),
                    b,
                    h,
                ),
                0.25 * math.exp(-0.5 * t) * math.exp(0.5 * b),
            )
        )
        rows.append(
            LedgerRow(
                "boundary_flux_weighted",
                f"t={t:.4g},b={b:.4g}",
                _central_diff4(
                    lambda bb: bb
                    * math.exp(bb)
                    * float(raw_E(math.exp(bb) - et, t, bb)),
                    b,
                    h,
                ),
                0.25 * math.exp(-0.5 * t) * math.exp(0.5 * b) * (2.0 + b),
            )
        )

        # spatial slope of E at the two cone edges
        pref = math.exp(-2.0 * (b + t)) * math.exp(0.5 * b) * math.exp(0.5 * t) / 16.0
        hw = _fd_step(reach)
        rows.append(
            LedgerRow(
                "edge_slope_left",
                f"t={t:.4g},b={b:.4g}",
                _central_diff4(lambda ww: float(raw_E(ww, t, b)), -reach, hw),
                pref * (eb - et),
            )
        )
        rows.append(
            LedgerRow(
                "edge_slope_right",
                f"t={t:.4g},b={b:.4g}",
                _central_diff4(lambda ww: float(raw_E(ww, t, b)), reach, hw),
                pref * (et - eb),
            )
        )

        # d/db E(x,t;0,b) evaluated where (x,t) sits on the cone of (0,b)
        rows.append(
            LedgerRow(
                "edge_source_rate",
                f"x={x_on:.4g},t={t:.4g}",
                _central_diff4(
                    lambda bb: float(raw_E(x_on, t, bb)), b_on, _fd_step(b_on)
                ),
                math.exp(-2.0 * t)
                * math.sqrt(et)
                * (x_on - 4.0 * et)
                / (16.0 * math.sqrt(et - x_on)),
            )
        )

        # d/db E(z,t;0,b) at b=0 against the closed bracket (equals -K0)
        z_in = float(rng.uniform(0.0, 0.9)) * (et - 1.0)
        rows.append(
            LedgerRow(
                "source_rate_interior",
                f"z={z_in:.4g},t={t:.4g}",
                _central_diff4(lambda bb: float(raw_E(z_in, t, bb)), 0.0, 1e-5),
                -kernel_K0(z_in, t).value,
            )
        )
    return rows


def ledger_summary(rows):
    """Max absolute discrepancy per identity."""
    worst = {}
    for row in rows:
        worst[row.identity] = max(worst.get(row.identity, 0.0), row.abs_err)
    return worst
