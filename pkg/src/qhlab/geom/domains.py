"""Domain geometry.

A :class:`Domain` is an open subset of R^2 or R^3 with enough structure to
drive the metric solver: a signed distance field (positive inside,
negative outside), nearest-boundary-point queries with inward normals,
boundary sampling, and (in 2-d) arc-length walks along the boundary.

Families implemented here:

* ``HalfSpace``      -- {x_0 > 0}, dims 2 and 3
* ``Ball``           -- round ball, dims 2 and 3 ("disc" in the plane)
* ``GraphDomain``    -- {x_0 > f(x)} over a window, with profiles
                        Paraboloid, CosineBump, OddParabola; dim 3 is
                        supported for the rotationally symmetric profile
* ``EllipseDomain``, ``SuperellipseDomain`` -- smooth convex 2-d level sets

Nearest-point searches on parametric boundaries run damped Newton from
multiple starts, vectorized over query points.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ..errors import PointOutsideDomain, ProjectionNotConverged
from .quadrature import gl_adaptive

Point = np.ndarray

# Relative gap below which two nearest-point candidates count as tied.
_UNIQUE_VALUE_RTOL = 1e-9
# Spatial separation (relative to scale) above which tied feet are distinct.
_FOOT_SEP_RTOL = 1e-5


def as_point(x, dim: int | None = None) -> Point:
    p = np.asarray(x, dtype=float)
    if p.ndim != 1:
        raise ValueError(f"point must be one-dimensional, got shape {p.shape}")
    if dim is not None and p.shape[0] != dim:
        raise ValueError(f"expected {dim} coordinates, got {p.shape[0]}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point has non-finite coordinates")
    return p.copy()


@dataclass(frozen=True)
class BoundaryContact:
    """Nearest-boundary data for an interior point.

    ``normal`` is the unit inward normal at ``foot``. ``unique`` is False
    when a second nearest point exists at the same distance (up to 1e-9
    relative) but a materially different location.
    """

    distance: float
    foot: Point
    normal: Point
    unique: bool


class Domain(ABC):
    dim: int

    @abstractmethod
    def signed_distance(self, pts: np.ndarray) -> np.ndarray:
        """Boundary distance for an (m, dim) array, positive inside."""

    @abstractmethod
    def contact(self, x: Point) -> BoundaryContact:
        """Nearest boundary point of an interior x."""

    @abstractmethod
    def describe(self) -> str:
        """Deterministic one-line description for report metadata."""

    @abstractmethod
    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        """Default (lo, hi) box enclosing the working region."""

    @property
    @abstractmethod
    def scale(self) -> float:
        """Characteristic length used for relative tolerances."""

    def contains(self, x) -> bool:
        p = as_point(x, self.dim)
        return float(self.signed_distance(p[None, :])[0]) > 0.0

    def distance(self, x) -> float:
        p = as_point(x, self.dim)
        return float(self.signed_distance(p[None, :])[0])

    def _require_inside(self, x: Point) -> Point:
        p = as_point(x, self.dim)
        if float(self.signed_distance(p[None, :])[0]) <= 0.0:
            raise PointOutsideDomain(f"point {p.tolist()} is not interior")
        return p

    # 2-d extras; dim-3 domains that cannot support them raise.
    def boundary_walk(self, zeta: Point, s: float) -> Point:
        raise NotImplementedError(f"{type(self).__name__} has no boundary walk")

    def inward_normal(self, zeta: Point) -> Point:
        raise NotImplementedError

    def boundary_samples(self, n: int, region=None):
        """(points, normals) on the boundary, clipped to a (lo, hi) region."""
        raise NotImplementedError


def _clip_region(pts: np.ndarray, normals: np.ndarray, region):
    if region is None:
        return pts, normals
    lo, hi = (np.asarray(r, dtype=float) for r in region)
    mask = np.all((pts >= lo) & (pts <= hi), axis=1)
    return pts[mask], normals[mask]


class HalfSpace(Domain):
    """The set {x_0 > 0}; distances and normals are exact."""

    def __init__(self, dim: int = 2):
        if dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")
        self.dim = dim

    @property
    def scale(self) -> float:
        return 1.0

    def describe(self) -> str:
        return f"halfspace(dim={self.dim})"

    def bounding_box(self):
        lo = np.full(self.dim, -4.0)
        hi = np.full(self.dim, 4.0)
        lo[0] = 0.0
        return lo, hi

    def signed_distance(self, pts):
        return np.asarray(pts, dtype=float)[:, 0].copy()

    def contact(self, x):
        p = self._require_inside(x)
        foot = p.copy()
        foot[0] = 0.0
        n = np.zeros(self.dim)
        n[0] = 1.0
        return BoundaryContact(float(p[0]), foot, n, True)

    def boundary_walk(self, zeta, s):
        if self.dim != 2:
            raise NotImplementedError("boundary walks are 2-d only")
        z = as_point(zeta, 2)
        return np.array([z[0], z[1] + s])

    def inward_normal(self, zeta):
        n = np.zeros(self.dim)
        n[0] = 1.0
        return n

    def boundary_samples(self, n, region=None):
        lo, hi = region if region is not None else self.bounding_box()
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        if self.dim == 2:
            ys = np.linspace(lo[1], hi[1], n)
            pts = np.column_stack([np.zeros_like(ys), ys])
        else:
            side = max(2, int(math.isqrt(n)))
            ys, zs = np.meshgrid(np.linspace(lo[1], hi[1], side),
                                 np.linspace(lo[2], hi[2], side))
            pts = np.column_stack([np.zeros(ys.size), ys.ravel(), zs.ravel()])
        normals = np.zeros_like(pts)
        normals[:, 0] = 1.0
        return _clip_region(pts, normals, region)


class Ball(Domain):
    def __init__(self, radius: float = 1.0, center=None, dim: int = 2):
        if dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.dim = dim
        self.radius = float(radius)
        self.center = (np.zeros(dim) if center is None
                       else as_point(center, dim))

    @property
    def scale(self) -> float:
        return self.radius

    def describe(self) -> str:
        c = ",".join(f"{v:.6g}" for v in self.center)
        return f"ball(radius={self.radius:.6g}, center=({c}), dim={self.dim})"

    def bounding_box(self):
        return self.center - self.radius, self.center + self.radius

    def signed_distance(self, pts):
        v = np.asarray(pts, dtype=float) - self.center
        return self.radius - np.sqrt(np.sum(v * v, axis=1))

    def contact(self, x):
        p = self._require_inside(x)
        v = p - self.center
        r = float(np.linalg.norm(v))
        if r < 1e-12 * self.radius:
            # Center: every direction is nearest; report a canonical foot.
            u = np.zeros(self.dim)
            u[0] = 1.0
            return BoundaryContact(self.radius, self.center + self.radius * u,
                                   -u, False)
        u = v / r
        foot = self.center + self.radius * u
        return BoundaryContact(self.radius - r, foot, -u, True)

    def boundary_walk(self, zeta, s):
        if self.dim != 2:
            raise NotImplementedError("boundary walks are 2-d only")
        z = as_point(zeta, 2) - self.center
        phi = math.atan2(z[1], z[0]) + s / self.radius
        return self.center + self.radius * np.array([math.cos(phi), math.sin(phi)])

    def inward_normal(self, zeta):
        z = as_point(zeta, self.dim)
        return (self.center - z) / self.radius

    def boundary_samples(self, n, region=None):
        if self.dim == 2:
            th = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
            u = np.column_stack([np.cos(th), np.sin(th)])
        else:
            # Fibonacci sphere: even deterministic coverage.
            k = np.arange(n) + 0.5
            phi = np.arccos(1.0 - 2.0 * k / n)
            th = math.pi * (1.0 + math.sqrt(5.0)) * k
            u = np.column_stack([np.sin(phi) * np.cos(th),
                                 np.sin(phi) * np.sin(th),
                                 np.cos(phi)])
        pts = self.center + self.radius * u
        return _clip_region(pts, -u, region)


class Profile(ABC):
    """Scalar profile f for graph domains {x_0 > f(x)}."""

    @abstractmethod
    def f(self, x): ...

    @abstractmethod
    def fp(self, x): ...

    @abstractmethod
    def fpp(self, x): ...

    @property
    @abstractmethod
    def grad_lipschitz(self) -> float:
        """Lipschitz constant of f'; also a sup bound for |f''|."""

    @property
    def nonsmooth_params(self) -> tuple[float, ...]:
        """Parameters where f'' jumps; point samplers keep clear of these."""
        return ()

    @abstractmethod
    def describe(self) -> str: ...


@dataclass(frozen=True)
class Paraboloid(Profile):
    kappa: float = 1.0

    def f(self, x):
        return 0.5 * self.kappa * np.square(x)

    def fp(self, x):
        return self.kappa * np.asarray(x, dtype=float)

    def fpp(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.kappa)

    @property
    def grad_lipschitz(self):
        return abs(self.kappa)

    def describe(self):
        return f"paraboloid(kappa={self.kappa:.6g})"


@dataclass(frozen=True)
class CosineBump(Profile):
    amp: float = 0.1
    freq: float = 1.0

    def f(self, x):
        return self.amp * (1.0 - np.cos(self.freq * np.asarray(x, dtype=float)))

    def fp(self, x):
        return self.amp * self.freq * np.sin(self.freq * np.asarray(x, dtype=float))

    def fpp(self, x):
        return self.amp * self.freq ** 2 * np.cos(self.freq * np.asarray(x, dtype=float))

    @property
    def grad_lipschitz(self):
        return abs(self.amp) * self.freq ** 2

    def describe(self):
        return f"cosine_bump(amp={self.amp:.6g}, freq={self.freq:.6g})"


@dataclass(frozen=True)
class OddParabola(Profile):
    """f(x) = kappa*x*|x|/2: gradient is Lipschitz, curvature flips sign at 0.

    The boundary is C^{1,1} but not C^2 at the window center, which is the
    point the asymptotics ladders probe.
    """

    kappa: float = 1.0

    def f(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * self.kappa * x * np.abs(x)

    def fp(self, x):
        return self.kappa * np.abs(np.asarray(x, dtype=float))

    def fpp(self, x):
        return self.kappa * np.sign(np.asarray(x, dtype=float))

    @property
    def grad_lipschitz(self):
        return abs(self.kappa)

    @property
    def nonsmooth_params(self):
        return (0.0,)

    def describe(self):
        return f"odd_parabola(kappa={self.kappa:.6g})"


def _project_graph(profile: Profile, p0, px, lo: float, hi: float,
                   n_starts: int = 11, want_unique: bool = False):
    """Nearest point on the graph {(f(t), t)} for query points (p0, px).

    Damped Newton on g(t) = (t-px)^2 + (f(t)-p0)^2 from n_starts+1 starts
    (a uniform sweep of [lo, hi] plus the query abscissa). Vectorized over
    queries. Returns (t_best, dist, unique); dist is unsigned.
    """
    p0 = np.asarray(p0, dtype=float)
    px = np.asarray(px, dtype=float)
    m = p0.shape[0]
    span = hi - lo
    base = np.linspace(lo, hi, n_starts)
    t = np.empty((n_starts + 1, m))
    t[:n_starts] = base[:, None]
    t[n_starts] = np.clip(px, lo, hi)

    for _ in range(30):
        f = profile.f(t)
        fp = profile.fp(t)
        fpp = profile.fpp(t)
        r0 = f - p0
        rx = t - px
        g1 = 2.0 * (rx + r0 * fp)
        g2 = 2.0 * (1.0 + fp * fp + r0 * fpp)
        newton = -g1 / np.where(np.abs(g2) > 1e-30, g2, 1.0)
        # Concave stretches (g2 <= 0) get a fixed-fraction gradient push.
        step = np.where(g2 > 1e-30, newton, -np.sign(g1) * 0.05 * span)
        np.clip(step, -0.25 * span, 0.25 * span, out=step)
        t_new = np.clip(t + step, lo, hi)
        moved = float(np.max(np.abs(t_new - t)))
        t = t_new
        if moved < 1e-13 * span:
            break

    f = profile.f(t)
    d2 = np.square(t - px) + np.square(f - p0)
    order = np.argmin(d2, axis=0)
    cols = np.arange(m)
    t_best = t[order, cols]
    dist = np.sqrt(d2[order, cols])

    fp_b = profile.fp(t_best)
    g1_b = 2.0 * ((t_best - px) + (profile.f(t_best) - p0) * fp_b)
    at_edge = (np.abs(t_best - lo) < 1e-12 * span) | (np.abs(t_best - hi) < 1e-12 * span)
    tol = 1e-7 * (1.0 + dist * (1.0 + np.abs(fp_b)))
    bad = ~at_edge & (np.abs(g1_b) > tol)
    if np.any(bad):
        raise ProjectionNotConverged(
            f"graph projection failed for {int(np.sum(bad))} of {m} points")

    if not want_unique:
        return t_best, dist, None

    close = (np.sqrt(d2) - dist) <= _UNIQUE_VALUE_RTOL * np.maximum(dist, 1e-30)
    apart = np.abs(t - t_best) > _FOOT_SEP_RTOL * max(span, 1.0)
    unique = ~np.any(close & apart, axis=0)
    return t_best, dist, unique


class GraphDomain(Domain):
    """Region above a profile graph, {x_0 > f(x)}, over a parameter window.

    Nearest-point searches are restricted to the window, so the boundary
    is effectively the graph patch over it. In dim 3 the profile is
    applied to the distance from the x_0 axis (rotationally symmetric
    surface); the window must then be symmetric.
    """

    def __init__(self, profile: Profile, window=(-2.0, 2.0), dim: int = 2):
        if dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")
        lo, hi = float(window[0]), float(window[1])
        if not lo < hi:
            raise ValueError("window must satisfy lo < hi")
        if dim == 3 and abs(lo + hi) > 1e-12 * (hi - lo):
            raise ValueError("dim-3 graph domains need a symmetric window")
        self.profile = profile
        self.window = (lo, hi)
        self.dim = dim

    @property
    def scale(self) -> float:
        return self.window[1] - self.window[0]

    def describe(self) -> str:
        return (f"graph({self.profile.describe()}, "
                f"window=({self.window[0]:.6g},{self.window[1]:.6g}), dim={self.dim})")

    def bounding_box(self):
        lo, hi = self.window
        ts = np.linspace(lo, hi, 1025)
        f_min = float(np.min(self.profile.f(ts)))
        span = hi - lo
        if self.dim == 2:
            return (np.array([f_min, lo]), np.array([f_min + span, hi]))
        return (np.array([f_min, lo, lo]), np.array([f_min + span, hi, hi]))

    def _radial(self, pts):
        """(p0, rho, unit azimuth) split for dim-3 points."""
        pts = np.asarray(pts, dtype=float)
        rho = np.hypot(pts[:, 1], pts[:, 2])
        safe = np.maximum(rho, 1e-300)
        u = pts[:, 1:] / safe[:, None]
        u[rho < 1e-300] = (1.0, 0.0)
        return pts[:, 0], rho, u

    def _param_range(self):
        lo, hi = self.window
        return (0.0, hi) if self.dim == 3 else (lo, hi)

    def signed_distance(self, pts):
        pts = np.asarray(pts, dtype=float)
        if self.dim == 2:
            p0, px = pts[:, 0], pts[:, 1]
        else:
            p0, px, _ = self._radial(pts)
        lo, hi = self._param_range()
        _, dist, _ = _project_graph(self.profile, p0, px, lo, hi)
        sign = np.where(p0 > self.profile.f(px), 1.0, -1.0)
        return sign * dist

    def contact(self, x):
        p = self._require_inside(x)
        lo, hi = self._param_range()
        if self.dim == 2:
            p0, px = p[0], p[1]
        else:
            p0, rho, u = self._radial(p[None, :])
            p0, px, u = p0[0], rho[0], u[0]
        t_b, dist, unique = _project_graph(
            self.profile, np.array([p0]), np.array([px]), lo, hi,
            want_unique=True)
        t = float(t_b[0])
        d = float(dist[0])
        uniq = bool(unique[0])
        fp = float(self.profile.fp(np.array([t]))[0])
        w = math.hypot(1.0, fp)
        fval = float(self.profile.f(np.array([t]))[0])
        if self.dim == 2:
            foot = np.array([fval, t])
            normal = np.array([1.0, -fp]) / w
        else:
            foot = np.array([fval, t * u[0], t * u[1]])
            normal = np.array([1.0, -fp * u[0], -fp * u[1]]) / w
            # Off-axis foot for an on-axis point: a whole ring is nearest.
            if px < 1e-12 * self.scale and t > _FOOT_SEP_RTOL * self.scale:
                uniq = False
        return BoundaryContact(d, foot, normal, uniq)

    # Graph-parametrized boundary helpers (2-d), used by the flattening maps.

    def graph_point(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack([self.profile.f(t), t], axis=-1)

    def graph_normal(self, t):
        t = np.asarray(t, dtype=float)
        fp = self.profile.fp(t)
        w = np.sqrt(1.0 + fp * fp)
        return np.stack([1.0 / w, -fp / w], axis=-1)

    def graph_curvature(self, t):
        """Signed curvature of the boundary wrt the inward normal."""
        t = np.asarray(t, dtype=float)
        fp = self.profile.fp(t)
        return self.profile.fpp(t) / (1.0 + fp * fp) ** 1.5

    def _speed(self, t):
        fp = self.profile.fp(np.asarray(t, dtype=float))
        return np.sqrt(1.0 + fp * fp)

    def arc_length(self, t0: float, t1: float) -> float:
        return gl_adaptive(self._speed, t0, t1)

    def param_at_arc(self, t0: float, s: float) -> float:
        """Parameter t with signed arc length s from t0 along the graph."""
        lo, hi = self.window
        if s == 0.0:
            return float(t0)
        target = lambda t: self.arc_length(t0, t) - s
        a, b = (t0, hi) if s > 0 else (lo, t0)
        fa, fb = target(a), target(b)
        if fa * fb > 0:
            raise ValueError("arc-length walk leaves the window")
        return float(brentq(target, a, b, xtol=1e-14, rtol=1e-14))

    def boundary_walk(self, zeta, s):
        if self.dim != 2:
            raise NotImplementedError("boundary walks are 2-d only")
        z = as_point(zeta, 2)
        t = self.param_at_arc(float(z[1]), float(s))
        return self.graph_point(t)

    def inward_normal(self, zeta):
        if self.dim == 2:
            return self.graph_normal(float(as_point(zeta, 2)[1]))
        z = as_point(zeta, 3)
        rho = math.hypot(z[1], z[2])
        u = (np.array([1.0, 0.0]) if rho < 1e-300
             else np.array([z[1], z[2]]) / rho)
        fp = float(self.profile.fp(np.array([rho]))[0])
        w = math.hypot(1.0, fp)
        return np.array([1.0, -fp * u[0], -fp * u[1]]) / w

    def boundary_samples(self, n, region=None):
        lo, hi = self.window
        if self.dim == 2:
            ts = np.linspace(lo, hi, n)
            pts = self.graph_point(ts)
            normals = self.graph_normal(ts)
        else:
            side = max(2, int(math.isqrt(n)))
            xs, ys = np.meshgrid(np.linspace(lo, hi, side),
                                 np.linspace(lo, hi, side))
            xs, ys = xs.ravel(), ys.ravel()
            rho = np.hypot(xs, ys)
            inside = rho <= hi
            xs, ys, rho = xs[inside], ys[inside], rho[inside]
            fval = self.profile.f(rho)
            fp = self.profile.fp(rho)
            w = np.sqrt(1.0 + fp * fp)
            safe = np.maximum(rho, 1e-300)
            pts = np.column_stack([fval, xs, ys])
            normals = np.column_stack([1.0 / w, -fp * xs / (safe * w),
                                       -fp * ys / (safe * w)])
        return _clip_region(pts, normals, region)


def _project_periodic(curve, dcurve, ddcurve, pts, scale: float,
                      n_starts: int = 16, want_unique: bool = False):
    """Nearest point on a closed 2-d curve, Newton in the angle."""
    pts = np.asarray(pts, dtype=float)
    m = pts.shape[0]
    th = np.broadcast_to(
        np.linspace(0.0, 2.0 * math.pi, n_starts, endpoint=False)[:, None],
        (n_starts, m)).copy()
    cap = 2.0 * math.pi / n_starts

    for _ in range(40):
        g = curve(th)
        dg = dcurve(th)
        ddg = ddcurve(th)
        r = g - pts
        g1 = 2.0 * np.sum(r * dg, axis=-1)
        g2 = 2.0 * (np.sum(dg * dg, axis=-1) + np.sum(r * ddg, axis=-1))
        newton = -g1 / np.where(np.abs(g2) > 1e-30, g2, 1.0)
        step = np.where(g2 > 1e-30, newton, -np.sign(g1) * 0.25 * cap)
        np.clip(step, -cap, cap, out=step)
        th = th + step
        if float(np.max(np.abs(step))) < 1e-14:
            break

    g = curve(th)
    d2 = np.sum(np.square(g - pts), axis=-1)
    order = np.argmin(d2, axis=0)
    cols = np.arange(m)
    th_best = th[order, cols]
    dist = np.sqrt(d2[order, cols])

    r_b = curve(th_best) - pts
    g1_b = 2.0 * np.sum(r_b * dcurve(th_best), axis=-1)
    if np.any(np.abs(g1_b) > 1e-6 * scale * (1.0 + dist)):
        raise ProjectionNotConverged("closed-curve projection failed")

    if not want_unique:
        return th_best, dist, None

    feet = curve(th)
    best_feet = curve(th_best)
    close = (np.sqrt(d2) - dist) <= _UNIQUE_VALUE_RTOL * np.maximum(dist, 1e-30)
    sep = np.linalg.norm(feet - best_feet, axis=-1) > _FOOT_SEP_RTOL * scale
    unique = ~np.any(close & sep, axis=0)
    return th_best, dist, unique


class _ClosedCurveDomain(Domain):
    """Shared projection/walk machinery for smooth closed 2-d boundaries."""

    dim = 2

    def _curve(self, th): ...

    def _dcurve(self, th): ...

    def _ddcurve(self, th): ...

    def _inside_sign(self, pts) -> np.ndarray:
        """+1 strictly inside, -1 outside, via the defining level set."""
        raise NotImplementedError

    def signed_distance(self, pts):
        pts = np.asarray(pts, dtype=float)
        _, dist, _ = _project_periodic(self._curve, self._dcurve,
                                       self._ddcurve, pts, self.scale)
        return self._inside_sign(pts) * dist

    def contact(self, x):
        p = self._require_inside(x)
        th, dist, unique = _project_periodic(
            self._curve, self._dcurve, self._ddcurve, p[None, :],
            self.scale, want_unique=True)
        foot = self._curve(np.array([th[0]]))[0]
        return BoundaryContact(float(dist[0]), foot,
                               self.inward_normal(foot), bool(unique[0]))

    def _speed(self, th):
        d = self._dcurve(np.asarray(th, dtype=float))
        return np.linalg.norm(d, axis=-1)

    def boundary_walk(self, zeta, s):
        z = as_point(zeta, 2)
        th0 = self._angle_of(z)
        total = gl_adaptive(self._speed, 0.0, 2.0 * math.pi)
        s = float(s) % total
        target = lambda th: gl_adaptive(self._speed, th0, th) - s
        th1 = brentq(target, th0, th0 + 2.0 * math.pi, xtol=1e-14, rtol=1e-14)
        return self._curve(np.array([th1]))[0]

    def _angle_of(self, z) -> float:
        raise NotImplementedError

    def boundary_samples(self, n, region=None):
        th = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
        pts = self._curve(th)
        normals = np.stack([self.inward_normal(p) for p in pts])
        return _clip_region(pts, normals, region)


class EllipseDomain(_ClosedCurveDomain):
    def __init__(self, a: float = 2.0, b: float = 1.0, center=(0.0, 0.0)):
        if a <= 0 or b <= 0:
            raise ValueError("semi-axes must be positive")
        self.a = float(a)
        self.b = float(b)
        self.center = as_point(center, 2)

    @property
    def scale(self):
        return max(self.a, self.b)

    def describe(self):
        c = ",".join(f"{v:.6g}" for v in self.center)
        return f"ellipse(a={self.a:.6g}, b={self.b:.6g}, center=({c}))"

    def bounding_box(self):
        r = np.array([self.a, self.b])
        return self.center - r, self.center + r

    def _curve(self, th):
        th = np.asarray(th, dtype=float)
        return self.center + np.stack([self.a * np.cos(th),
                                       self.b * np.sin(th)], axis=-1)

    def _dcurve(self, th):
        th = np.asarray(th, dtype=float)
        return np.stack([-self.a * np.sin(th), self.b * np.cos(th)], axis=-1)

    def _ddcurve(self, th):
        th = np.asarray(th, dtype=float)
        return np.stack([-self.a * np.cos(th), -self.b * np.sin(th)], axis=-1)

    def _inside_sign(self, pts):
        v = (np.asarray(pts, dtype=float) - self.center) / (self.a, self.b)
        return np.where(np.sum(v * v, axis=-1) < 1.0, 1.0, -1.0)

    def _angle_of(self, z):
        v = z - self.center
        return math.atan2(v[1] / self.b, v[0] / self.a)

    def inward_normal(self, zeta):
        z = as_point(zeta, 2) - self.center
        g = np.array([z[0] / self.a ** 2, z[1] / self.b ** 2])
        return -g / np.linalg.norm(g)


class SuperellipseDomain(_ClosedCurveDomain):
    """|x/a|^p + |y/b|^p < 1 with p >= 2, radially parametrized."""

    def __init__(self, a: float = 1.0, b: float = 1.0, power: float = 4.0,
                 center=(0.0, 0.0)):
        if a <= 0 or b <= 0:
            raise ValueError("semi-axes must be positive")
        if power < 2:
            raise ValueError("power must be >= 2")
        self.a = float(a)
        self.b = float(b)
        self.power = float(power)
        self.center = as_point(center, 2)

    @property
    def scale(self):
        return max(self.a, self.b)

    def describe(self):
        c = ",".join(f"{v:.6g}" for v in self.center)
        return (f"superellipse(a={self.a:.6g}, b={self.b:.6g}, "
                f"power={self.power:.6g}, center=({c}))")

    def bounding_box(self):
        r = np.array([self.a, self.b])
        return self.center - r, self.center + r

    def _radius(self, th):
        """r(th) with first and second angle derivatives."""
        p = self.power
        c, s = np.cos(th), np.sin(th)
        ca = np.abs(c) / self.a
        sb = np.abs(s) / self.b
        q = ca ** p + sb ** p
        # dq and ddq stay finite for p >= 2.
        dq = p * (-s * np.sign(c) * ca ** (p - 1) / self.a
                  + c * np.sign(s) * sb ** (p - 1) / self.b)
        ddq = p * ((p - 1) * (s ** 2 / self.a ** 2) * ca ** (p - 2) - ca ** p
                   + (p - 1) * (c ** 2 / self.b ** 2) * sb ** (p - 2) - sb ** p)
        r = q ** (-1.0 / p)
        dr = -(1.0 / p) * r * dq / q
        ddr = -(1.0 / p) * (dr * dq / q + r * ddq / q - r * (dq / q) ** 2)
        return r, dr, ddr

    def _curve(self, th):
        th = np.asarray(th, dtype=float)
        r, _, _ = self._radius(th)
        return self.center + np.stack([r * np.cos(th), r * np.sin(th)], axis=-1)

    def _dcurve(self, th):
        th = np.asarray(th, dtype=float)
        r, dr, _ = self._radius(th)
        c, s = np.cos(th), np.sin(th)
        return np.stack([dr * c - r * s, dr * s + r * c], axis=-1)

    def _ddcurve(self, th):
        th = np.asarray(th, dtype=float)
        r, dr, ddr = self._radius(th)
        c, s = np.cos(th), np.sin(th)
        return np.stack([(ddr - r) * c - 2.0 * dr * s,
                         (ddr - r) * s + 2.0 * dr * c], axis=-1)

    def _inside_sign(self, pts):
        v = np.abs((np.asarray(pts, dtype=float) - self.center)) / (self.a, self.b)
        level = np.sum(v ** self.power, axis=-1)
        return np.where(level < 1.0, 1.0, -1.0)

    def _angle_of(self, z):
        v = z - self.center
        return math.atan2(v[1], v[0])

    def inward_normal(self, zeta):
        z = as_point(zeta, 2) - self.center
        p = self.power
        g = np.array([
            p * np.sign(z[0]) * (abs(z[0]) / self.a) ** (p - 1) / self.a,
            p * np.sign(z[1]) * (abs(z[1]) / self.b) ** (p - 1) / self.b,
        ])
        return -g / np.linalg.norm(g)


_FAMILIES = ("halfplane", "halfspace", "disc", "ball", "paraboloid",
             "cosine_bump", "odd_parabola", "ellipse", "superellipse")


def make_domain(kind: str, **params) -> Domain:
    """Build a domain from a family name and keyword parameters."""
    kind = kind.lower().replace("-", "_")
    if kind == "disk":
        kind = "disc"
    window = params.pop("window", None)
    dim = params.pop("dim", None)
    try:
        if kind == "halfplane":
            return HalfSpace(dim=2)
        if kind == "halfspace":
            return HalfSpace(dim=int(dim) if dim else 3)
        if kind == "disc":
            return Ball(radius=params.pop("radius", 1.0),
                        center=params.pop("center", None), dim=2, **params)
        if kind == "ball":
            return Ball(radius=params.pop("radius", 1.0),
                        center=params.pop("center", None),
                        dim=int(dim) if dim else 3, **params)
        if kind in ("paraboloid", "cosine_bump", "odd_parabola"):
            if kind == "paraboloid":
                prof = Paraboloid(kappa=float(params.pop("kappa", 1.0)))
            elif kind == "cosine_bump":
                prof = CosineBump(amp=float(params.pop("amp", 0.1)),
                                  freq=float(params.pop("freq", 1.0)))
            else:
                prof = OddParabola(kappa=float(params.pop("kappa", 1.0)))
            if params:
                raise ValueError(f"unknown parameters {sorted(params)}")
            return GraphDomain(prof, window=window or (-2.0, 2.0),
                               dim=int(dim) if dim else 2)
        if kind == "ellipse":
            return EllipseDomain(**params)
        if kind == "superellipse":
            return SuperellipseDomain(**params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for domain {kind!r}: {exc}") from None
    raise ValueError(f"unknown domain kind {kind!r}; choose from {_FAMILIES}")
