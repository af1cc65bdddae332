"""Boundary contact operations: distance fields, feet, normals, reach.

These are thin, domain-polymorphic entry points over the projection
machinery in :mod:`qhlab.geom.domains`, plus a two-ball reach estimator.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import RegionMissesBoundary
from .domains import BoundaryContact, Domain, Point, as_point


def distance_field(domain: Domain, pts) -> np.ndarray:
    """Signed boundary distance for an (m, dim) array of points.

    Positive inside the domain, negative outside; the solver uses the sign
    to mask grid nodes, so no point here is an error.
    """
    pts = np.asarray(pts, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.shape[1] != domain.dim:
        raise ValueError(f"points have dim {pts.shape[1]}, domain has {domain.dim}")
    return domain.signed_distance(pts)


def boundary_contact(domain: Domain, x) -> BoundaryContact:
    """Nearest boundary point, inward normal, and uniqueness flag for x.

    Raises PointOutsideDomain unless x is strictly interior.
    """
    return domain.contact(as_point(x, domain.dim))


def inward_normal(domain: Domain, zeta) -> Point:
    return domain.inward_normal(as_point(zeta, domain.dim))


def on_boundary(domain: Domain, zeta, tol: float = 1e-7) -> bool:
    d = float(distance_field(domain, as_point(zeta, domain.dim))[0])
    return abs(d) <= tol * domain.scale


def boundary_walk(domain: Domain, zeta, s: float) -> Point:
    """Point at signed arc length s from the boundary point zeta (2-d)."""
    z = as_point(zeta, domain.dim)
    if not on_boundary(domain, z):
        raise ValueError(f"walk start {z.tolist()} is not on the boundary")
    return domain.boundary_walk(z, float(s))


def reach_estimate(domain: Domain, region=None, n_centers: int = 256,
                   n_witnesses: int = 2048, bisect_steps: int = 20) -> float:
    """Positive-reach estimate over a region, via the two-ball test.

    For each sampled boundary point p with inward normal n, the balls of
    radius R centered at p + R*n and p - R*n must avoid the rest of the
    boundary; the largest R passing the test (bisected) estimates the
    reach. Witness points sample the whole boundary, not just the region,
    since far-away boundary can be the binding constraint. Returns
    math.inf when the largest tested radius passes (flat boundary).
    """
    if region is None:
        region = domain.bounding_box()
    centers, normals = domain.boundary_samples(n_centers, region=region)
    if len(centers) == 0:
        raise RegionMissesBoundary("no boundary points in the region")
    witnesses, _ = domain.boundary_samples(n_witnesses, region=None)

    def passes(radius: float) -> bool:
        ball_centers = np.concatenate([centers + radius * normals,
                                       centers - radius * normals])
        diff = witnesses[None, :, :] - ball_centers[:, None, :]
        d_min = np.min(np.sqrt(np.sum(diff * diff, axis=2)), axis=1)
        return bool(np.all(d_min >= radius * (1.0 - 1e-12)))

    hi = 4.0 * domain.scale
    if passes(hi):
        return math.inf
    lo = 0.0
    for _ in range(bisect_steps):
        mid = 0.5 * (lo + hi)
        if passes(mid):
            lo = mid
        else:
            hi = mid
    return lo
