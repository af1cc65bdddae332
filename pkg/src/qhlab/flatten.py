"""Boundary-flattening maps and their quantitative distortion checks.

Three charts between the upper half-space model and a graph domain:

* ``normal_flatten`` walks from the boundary graph point along the inward
  unit normal, so the half-space height coordinate becomes the exact
  boundary distance (below the reach).
* ``planar_flatten`` subtracts the profile, the cheap bilipschitz chart.
* ``sigma_flatten`` reparametrizes the boundary by arc length from one
  point's foot before walking the normal, which makes a designated pair
  of half-space points land exactly on a given interior pair.

``jacobian_bounds`` and ``curve_pushforward_check`` measure how far any
of these maps is from an isometry: singular values of the differential
must sit inside [1 - C*x_0, 1 + C*x_0] up to tolerance, and pushed-forward
weighted curve length must not fall below the flat length minus the
curvature correction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (ExceedsReach, FeetNotUnique, PointOutsideDomain,
                     StepUnderflow)
from .geom.contact import reach_estimate
from .geom.domains import Domain, GraphDomain, HalfSpace, Point, as_point
from .solver.curve import Curve
from .solver.qh import MIN_NODE_DISTANCE

_JACOBIAN_SLACK = 1e-4

_WEIGHTS = ("unit", "inv_distance")


def _cached_reach(domain: Domain) -> float:
    # Two-ball sampling costs ~0.5 s, so stash it on the instance.
    value = getattr(domain, "_reach_memo", None)
    if value is None:
        value = reach_estimate(domain)
        domain._reach_memo = value
    return value


def _check_window(domain: GraphDomain, t: np.ndarray) -> None:
    lo, hi = domain.window
    if np.any(t < lo) or np.any(t > hi):
        raise PointOutsideDomain(
            f"graph parameter outside window [{lo:.6g}, {hi:.6g}]")


def _flatten_many(domain, xbars: np.ndarray) -> np.ndarray:
    """Vectorized normal flattening; callers validated heights already."""
    if isinstance(domain, HalfSpace):
        return xbars.copy()
    x0 = xbars[:, 0]
    if domain.dim == 2:
        t = xbars[:, 1]
        _check_window(domain, t)
        return domain.graph_point(t) + x0[:, None] * domain.graph_normal(t)
    lateral = xbars[:, 1:]
    r = np.linalg.norm(lateral, axis=1)
    _check_window(domain, r)
    fp = domain.profile.fp(r)
    w = np.sqrt(1.0 + fp * fp)
    safe = np.maximum(r, 1e-300)[:, None]
    out = np.empty_like(xbars)
    out[:, 0] = domain.profile.f(r) + x0 / w
    out[:, 1:] = lateral + (x0 * (-fp / w))[:, None] * (lateral / safe)
    return out


def _check_heights(domain, x0: np.ndarray) -> None:
    if np.any(x0 < 0.0):
        raise PointOutsideDomain("height coordinate must be nonnegative")
    top = float(np.max(x0, initial=0.0))
    reach = math.inf if isinstance(domain, HalfSpace) else _cached_reach(domain)
    if top >= reach:
        raise ExceedsReach(
            f"height {top:.6g} at or beyond the reach estimate {reach:.6g}")


def normal_flatten(domain, xbar) -> Point:
    """Map a half-space point (x_0, x) to the domain point x_0 along the
    inward normal from the boundary point over x.

    Below the reach this is injective and the image's boundary distance
    is exactly x_0 with foot over x.
    """
    if not isinstance(domain, (GraphDomain, HalfSpace)):
        raise TypeError("normal flattening needs a graph or half-space domain")
    xbar = as_point(xbar, domain.dim)
    _check_heights(domain, xbar[:1])
    return _flatten_many(domain, xbar[None, :])[0]


def planar_flatten(domain, x) -> Point:
    """Subtract the profile: (x_0, x') -> (x_0 - f(x'), x'). 2-d only."""
    if isinstance(domain, HalfSpace):
        return as_point(x, domain.dim).copy()
    if not isinstance(domain, GraphDomain) or domain.dim != 2:
        raise TypeError("planar flattening needs a 2-d graph domain")
    x = as_point(x, 2)
    _check_window(domain, x[1:2])
    f = float(domain.profile.f(np.array([x[1]]))[0])
    return np.array([x[0] - f, x[1]])


@dataclass(frozen=True)
class SigmaFrame:
    """Arc-length boundary chart anchored at a pair of interior points.

    ``s = 0`` is a's foot and ``s = length`` is b's foot; ``map`` sends
    (x_0, s) to the domain point x_0 along the inward normal at sigma(s).
    By construction map((d_a, 0)) == a and map((d_b, length)) == b.
    """

    domain: GraphDomain
    t_a: float
    t_b: float
    d_a: float
    d_b: float
    direction: float
    length: float

    def boundary_param(self, s: float) -> float:
        return self.domain.param_at_arc(self.t_a, self.direction * s)

    def map(self, xbar) -> Point:
        xbar = as_point(xbar, 2)
        _check_heights(self.domain, xbar[:1])
        t = self.boundary_param(float(xbar[1]))
        ts = np.array([t])
        return (self.domain.graph_point(ts)
                + xbar[0] * self.domain.graph_normal(ts))[0]


def sigma_frame(domain: GraphDomain, a, b) -> SigmaFrame:
    if not isinstance(domain, GraphDomain) or domain.dim != 2:
        raise TypeError("arc-length flattening needs a 2-d graph domain")
    ca = domain.contact(as_point(a, 2))
    cb = domain.contact(as_point(b, 2))
    for label, c in (("a", ca), ("b", cb)):
        if not c.unique:
            raise FeetNotUnique(f"nearest boundary point of {label} is not unique")
    t_a, t_b = float(ca.foot[1]), float(cb.foot[1])
    direction = 1.0 if t_b >= t_a else -1.0
    length = abs(domain.arc_length(t_a, t_b))
    return SigmaFrame(domain, t_a, t_b, ca.distance, cb.distance,
                      direction, length)


def sigma_flatten(domain: GraphDomain, a, b, xbar) -> Point:
    """Arc-length variant of the normal flattening; see SigmaFrame."""
    return sigma_frame(domain, a, b).map(xbar)


@dataclass(frozen=True)
class JacobianBoundReport:
    point: Point
    sigma_min: float
    sigma_max: float
    predicted_lower: float
    predicted_upper: float
    C_used: float

    @property
    def lower_ok(self) -> bool:
        return self.sigma_min >= self.predicted_lower - _JACOBIAN_SLACK

    @property
    def upper_ok(self) -> bool:
        return self.sigma_max <= self.predicted_upper + _JACOBIAN_SLACK

    @property
    def passed(self) -> bool:
        return self.lower_ok and self.upper_ok


def jacobian_bounds(map_fn: Callable, domain, point, C: float,
                    ) -> JacobianBoundReport:
    """Singular-value sandwich of a flattening differential at one point.

    map_fn is called as map_fn(domain, xbar); pass a closure for charts
    with extra anchors. The Jacobian is central finite differences with
    step 1e-5 (shrunk near the boundary), so x_0 must leave room:
    heights under 1e-4 raise StepUnderflow.
    """
    point = np.asarray(point, dtype=float)
    x0 = float(point[0])
    if x0 < 1e-4:
        raise StepUnderflow(
            f"height {x0:.3e} too small for finite-difference steps")
    span = domain.scale
    h = min(1e-5, x0 / 10.0, span / 10.0)
    dim = point.size
    cols = []
    for ax in range(dim):
        e = np.zeros(dim)
        e[ax] = h
        cols.append((np.asarray(map_fn(domain, point + e), dtype=float)
                     - np.asarray(map_fn(domain, point - e), dtype=float))
                    / (2.0 * h))
    jac = np.stack(cols, axis=1)
    svals = np.linalg.svd(jac, compute_uv=False)
    return JacobianBoundReport(
        point=point.copy(),
        sigma_min=float(svals[-1]),
        sigma_max=float(svals[0]),
        predicted_lower=1.0 - C * x0,
        predicted_upper=1.0 + C * x0,
        C_used=float(C),
    )


def _refine_params(k: int, pieces: int) -> np.ndarray:
    # vertex index as the curve parameter, 'pieces' subintervals per edge
    return np.linspace(0.0, k - 1.0, (k - 1) * pieces + 1)


def curve_pushforward_check(domain, curve: Curve, weight: str = "unit",
                            C: float = 1.0) -> float:
    """Margin of the pushforward length inequality for one curve.

    The curve lives in half-space coordinates; its image under the normal
    flattening must satisfy

        integral F |d(image)|  >=  integral F |d(curve)|
                                   - C * integral F x_0 |d(curve)|

    with F constant 1 ('unit') or 1/x_0 ('inv_distance'). Returns
    lhs - rhs, so anything >= -1e-6 counts as respecting the bound.
    Integrals are chord sums refined until stable to 1e-9.
    """
    if weight not in _WEIGHTS:
        raise ValueError(f"weight must be one of {_WEIGHTS}")
    pts = curve.points
    k = pts.shape[0]
    if np.any(pts[:, 0] < MIN_NODE_DISTANCE):
        from .errors import CurveTouchesBoundary
        raise CurveTouchesBoundary("curve height vanishes")
    _check_heights(domain, pts[:, 0])

    base_u = np.arange(k, dtype=float)
    margin_prev = None
    pieces = 8
    for _ in range(10):
        u = _refine_params(k, pieces)
        gamma = np.stack([np.interp(u, base_u, pts[:, c])
                          for c in range(pts.shape[1])], axis=1)
        image = _flatten_many(domain, gamma)
        dl = np.linalg.norm(np.diff(gamma, axis=0), axis=1)
        dl_img = np.linalg.norm(np.diff(image, axis=0), axis=1)
        x0_mid = 0.5 * (gamma[:-1, 0] + gamma[1:, 0])
        f_vals = np.ones_like(x0_mid) if weight == "unit" else 1.0 / x0_mid
        lhs = float(np.sum(f_vals * dl_img))
        rhs = float(np.sum(f_vals * dl)) - C * float(np.sum(f_vals * x0_mid * dl))
        margin = lhs - rhs
        if margin_prev is not None and \
                abs(margin - margin_prev) <= 1e-9 * (1.0 + abs(margin)):
            break
        margin_prev = margin
        pieces *= 2
    return margin
