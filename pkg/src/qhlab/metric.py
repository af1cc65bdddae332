"""Closed-form comparison quantities for pairs of interior points.

Everything here depends on a pair only through (d_a, d_b, sep): the two
boundary distances and the Euclidean separation. The half-space model is
exact; for general domains these expressions serve as the reference value
(s), a always-valid lower bound (ghm), and a one-parameter family of
near-boundary upper bounds (na).

Array-valued cores (`s_value`, `ghm_value`, `na_value`) back the scalar
PairData wrappers so experiment sweeps stay vectorized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstantOutOfRange, NonpositiveDistance, PointOutsideDomain
from .geom.domains import Point, as_point
from .solver.curve import Curve


@dataclass(frozen=True)
class PairData:
    """Two interior points with boundary distances and separation.

    sep is recomputed from the points; passing it is a consistency check
    (1e-9 relative) for data read back from reports.
    """

    a: Point
    b: Point
    d_a: float
    d_b: float
    sep: float = field(default=math.nan)

    def __post_init__(self):
        a = as_point(self.a)
        b = as_point(self.b, a.shape[0])
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if self.d_a <= 0 or self.d_b <= 0:
            raise NonpositiveDistance(
                f"boundary distances must be positive, got ({self.d_a}, {self.d_b})")
        true_sep = float(np.linalg.norm(a - b))
        if math.isnan(self.sep):
            object.__setattr__(self, "sep", true_sep)
        elif abs(self.sep - true_sep) > 1e-9 * max(1.0, true_sep):
            raise ValueError(
                f"sep={self.sep} disagrees with |a-b|={true_sep}")


def s_value(sep, d_a, d_b):
    """2*asinh(sep / (2*sqrt(d_a*d_b))), vectorized."""
    sep = np.asarray(sep, dtype=float)
    return 2.0 * np.arcsinh(sep / (2.0 * np.sqrt(np.multiply(d_a, d_b))))


def ghm_value(sep, d_a, d_b):
    """2*log((d_a + d_b + sep) / (2*sqrt(d_a*d_b))), vectorized."""
    sep = np.asarray(sep, dtype=float)
    return 2.0 * np.log((d_a + d_b + sep) / (2.0 * np.sqrt(np.multiply(d_a, d_b))))


def na_value(sep, d_a, d_b, c):
    """2*log(1 + c*sep / sqrt(d_a*d_b)), vectorized; requires c > 1."""
    if not c > 1.0:
        raise ConstantOutOfRange(f"comparison constant must exceed 1, got {c}")
    sep = np.asarray(sep, dtype=float)
    return 2.0 * np.log1p(c * sep / np.sqrt(np.multiply(d_a, d_b)))


def s_metric(pair: PairData) -> float:
    """Half-space model distance of the pair's (d_a, d_b, sep) data."""
    return float(s_value(pair.sep, pair.d_a, pair.d_b))


def ghm_lower_bound(pair: PairData) -> float:
    """Lower bound for the quasi-hyperbolic distance in any domain."""
    return float(ghm_value(pair.sep, pair.d_a, pair.d_b))


def na_upper_bound(pair: PairData, c: float) -> float:
    """Near-boundary upper bound with comparison constant c > 1."""
    return float(na_value(pair.sep, pair.d_a, pair.d_b, c))


def _check_halfspace(a, b):
    a = as_point(a)
    b = as_point(b, a.shape[0])
    if a[0] <= 0 or b[0] <= 0:
        raise PointOutsideDomain("half-space points need positive first coordinate")
    return a, b


def halfspace_distance(a, b) -> float:
    """Exact quasi-hyperbolic distance in {x_0 > 0}."""
    a, b = _check_halfspace(a, b)
    return float(s_value(np.linalg.norm(a - b), a[0], b[0]))


def halfspace_geodesic(a, b, m: int = 129) -> Curve:
    """The geodesic in {x_0 > 0}: a circular arc centered on the boundary
    (a vertical segment when a and b share their tangential coordinates),
    sampled at m points.
    """
    a, b = _check_halfspace(a, b)
    if m < 2:
        raise ValueError("need at least two sample points")
    a0, b0 = float(a[0]), float(b[0])
    t_vec = b - a
    t_vec[0] = 0.0
    xi = float(np.linalg.norm(t_vec))
    if xi < 1e-14 * max(a0, b0):
        # Vertical segment; geometric heights give uniform metric spacing.
        heights = a0 * (b0 / a0) ** np.linspace(0.0, 1.0, m)
        pts = np.tile(a, (m, 1))
        pts[:, 0] = heights
        return Curve(pts)
    u = t_vec / xi
    # Circle center (on the boundary) and radius in the (e0, u) plane.
    xi_c = (b0 * b0 + xi * xi - a0 * a0) / (2.0 * xi)
    radius = math.hypot(a0, xi_c)
    phi_a = math.atan2(a0, -xi_c)
    phi_b = math.atan2(b0, xi - xi_c)
    phi = np.linspace(phi_a, phi_b, m)
    heights = radius * np.sin(phi)
    along = xi_c + radius * np.cos(phi)
    foot = a.copy()
    foot[0] = 0.0
    e0 = np.zeros_like(a)
    e0[0] = 1.0
    pts = foot + heights[:, None] * e0 + along[:, None] * u
    pts[0] = a
    pts[-1] = b
    return Curve(pts)


def pair_from_points(domain, a, b) -> PairData:
    """PairData with boundary distances measured in the given domain."""
    from .geom.contact import distance_field

    a = as_point(a, domain.dim)
    b = as_point(b, domain.dim)
    d = distance_field(domain, np.stack([a, b]))
    if d[0] <= 0 or d[1] <= 0:
        raise PointOutsideDomain("pair points must be interior")
    return PairData(a=a, b=b, d_a=float(d[0]), d_b=float(d[1]))


# Margins of the four scalar inequalities behind the upper-bound
# constants. Each is positive on the stated range; everything is written
# in log1p/expm1/asinh form so the margins survive t near 0.

def asinh_vs_log_margin(t):
    """log(1+t) - asinh(t/2); positive for t > 0."""
    t = np.asarray(t, dtype=float)
    return np.log1p(t) - np.arcsinh(t / 2.0)


def power_vs_linear_margin(t, c_prime):
    """(1 + ct) - (1+t)^c' with c = 2c' - 1; positive for 0 < t < 1,
    1 < c' <= 2."""
    t = np.asarray(t, dtype=float)
    c = 2.0 * np.asarray(c_prime, dtype=float) - 1.0
    return c * t - np.expm1(c_prime * np.log1p(t))


def linear_factor_margin(t, c_prime):
    """(1 + ct) - c'(1+t) with c = 2c' - 1; positive for t > 1, c' > 1.

    Algebraically (c' - 1)(t - 1), kept in that form.
    """
    t = np.asarray(t, dtype=float)
    return (np.asarray(c_prime, dtype=float) - 1.0) * (t - 1.0)


def asinh_scaling_margin(t, q):
    """log(q) + asinh(t) - asinh(q*t); positive for q > 1, t > 0."""
    t = np.asarray(t, dtype=float)
    q = np.asarray(q, dtype=float)
    return np.log(q) + np.arcsinh(t) - np.arcsinh(q * t)
