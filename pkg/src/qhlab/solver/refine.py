"""Curve-shortening descent for the reciprocal-distance energy.

Polishes a polyline (typically a grid shortest path) toward a geodesic:
interior vertices move against the finite-difference gradient of their
local discrete Simpson energy, endpoints stay fixed. Vertices are swept
in red-black order so same-color local energies are disjoint and a
half-sweep's accepted decreases add up exactly.

Two details matter for convergence:

* The gradient is projected perpendicular to the local curve tangent.
  The tangential component only slides the parametrization along the
  curve, and removing it makes exact geodesics genuine fixed points at
  machine precision instead of drifting targets.
* Sweeps relax locally, so information crosses the curve one vertex per
  sweep and a far-from-geodesic input (a straight chord, say) would crawl.
  The descent therefore runs coarse-to-fine over index-decimated copies,
  prolongating vertex displacements linearly between levels. A stationary
  input produces zero displacement at every level and comes back bitwise
  unchanged.
"""

from __future__ import annotations

import numpy as np

from ..errors import CurveTouchesBoundary
from ..geom.contact import distance_field
from ..geom.domains import Domain
from .curve import Curve
from .qh import qh_length, segment_weight

_MIN_VERTEX_DISTANCE = 1e-6
_BACKTRACKS = 5
_LEVEL_STRIDES = (16, 8, 4, 2)


def _local_energy(domain, prev_pts, mids, next_pts):
    """Sum of the two Simpson segment weights around each moved vertex."""
    return (segment_weight(domain, prev_pts, mids)
            + segment_weight(domain, mids, next_pts))


def _descend(domain: Domain, pts: np.ndarray, max_sweeps: int,
             rel_tol: float, scale: float) -> np.ndarray:
    """Red-black local descent at a fixed discretization. Mutates a copy."""
    pts = pts.copy()
    k, dim = pts.shape
    if k < 3:
        return pts

    d = distance_field(domain, pts)
    if np.any(d < _MIN_VERTEX_DISTANCE):
        raise CurveTouchesBoundary("refinement vertex too close to boundary")
    seg_scale = float(np.median(np.linalg.norm(np.diff(pts, axis=0), axis=1)))
    steps = np.minimum(d / 8.0, seg_scale + 1e-300)
    step_floor = 1e-12 * scale

    colors = [np.arange(1, k - 1, 2), np.arange(2, k - 1, 2)]

    def total_energy():
        return float(np.sum(segment_weight(domain, pts[:-1], pts[1:])))

    energy = total_energy()
    stalls = 0
    for _ in range(max_sweeps):
        for idx in colors:
            if idx.size == 0:
                continue
            prev_pts = pts[idx - 1]
            next_pts = pts[idx + 1]
            center = pts[idx]

            base = _local_energy(domain, prev_pts, center, next_pts)

            # Central differences along each axis, one batched call.
            delta = np.maximum(1e-4 * np.minimum(
                d[idx], np.linalg.norm(next_pts - prev_pts, axis=1) + 1e-30), 1e-12)
            trials = []
            for ax in range(dim):
                for sign in (1.0, -1.0):
                    shifted = center.copy()
                    shifted[:, ax] += sign * delta
                    trials.append(shifted)
            trial_e = _local_energy(
                domain,
                np.tile(prev_pts, (2 * dim, 1)),
                np.concatenate(trials),
                np.tile(next_pts, (2 * dim, 1)),
            ).reshape(2 * dim, idx.size)
            grad = np.stack(
                [(trial_e[2 * ax] - trial_e[2 * ax + 1]) / (2.0 * delta)
                 for ax in range(dim)], axis=1)

            tangent = next_pts - prev_pts
            t_norm = np.linalg.norm(tangent, axis=1, keepdims=True)
            tangent = tangent / np.maximum(t_norm, 1e-30)
            grad -= np.sum(grad * tangent, axis=1, keepdims=True) * tangent

            g_norm = np.linalg.norm(grad, axis=1)
            movable = g_norm * delta > 1e-13 * (1.0 + np.abs(base))
            if not np.any(movable):
                continue

            # Backtracking: halve strides of still-rejected vertices and
            # retry, so one oversized first guess cannot stall the sweep.
            sub = idx[movable]
            direction = -grad[movable] / g_norm[movable][:, None]
            stride = np.minimum(steps[sub], d[sub] / 4.0)
            base_sub = base[movable]
            prev_sub = prev_pts[movable]
            next_sub = next_pts[movable]
            open_mask = np.ones(sub.size, dtype=bool)
            for _bt in range(_BACKTRACKS):
                if not np.any(open_mask):
                    break
                trial_pts = pts[sub[open_mask]] + \
                    stride[open_mask, None] * direction[open_mask]
                d_new = distance_field(domain, trial_pts)
                if np.any(d_new < _MIN_VERTEX_DISTANCE):
                    raise CurveTouchesBoundary(
                        "refinement step would graze the boundary")
                new_e = _local_energy(domain, prev_sub[open_mask], trial_pts,
                                      next_sub[open_mask])
                accept = new_e < base_sub[open_mask]
                ids = np.flatnonzero(open_mask)
                acc_ids = ids[accept]
                verts = sub[acc_ids]
                pts[verts] = trial_pts[accept]
                d[verts] = d_new[accept]
                steps[verts] = np.minimum(stride[acc_ids] * 1.3, d[verts] / 4.0)
                open_mask[acc_ids] = False
                stride[open_mask] *= 0.5
            rejected = sub[open_mask]
            steps[rejected] = np.maximum(stride[open_mask], step_floor)

        new_energy = total_energy()
        decrease = energy - new_energy
        energy = new_energy
        # A stalled sweep may just mean oversized steps (they halve on
        # rejection), so stop only after two stalls in a row.
        stalls = stalls + 1 if decrease < rel_tol * max(abs(new_energy), 1e-300) else 0
        if stalls >= 2:
            break
    return pts


def refine_geodesic(domain: Domain, curve: Curve, max_sweeps: int = 500,
                    rel_tol: float = 1e-7) -> Curve:
    """Descend the discrete energy; returns a curve no longer than the input.

    If the polished curve measures longer under adaptive quadrature
    (possible, since the discrete energy is only an approximation), the
    input comes back unchanged.
    """
    pts = curve.points.copy()
    k = pts.shape[0]
    if k < 3:
        return Curve(pts)

    for stride in _LEVEL_STRIDES:
        if k - 1 < 2 * stride:
            continue
        idx = np.unique(np.concatenate([np.arange(0, k - 1, stride), [k - 1]]))
        moved = _descend(domain, pts[idx], max_sweeps, rel_tol, domain.scale)
        disp = moved - pts[idx]
        if not np.any(disp):
            continue
        full = np.stack([np.interp(np.arange(k), idx, disp[:, c])
                         for c in range(pts.shape[1])], axis=1)
        candidate = pts + full
        # Prolongated vertices are only interpolated; fall back to the
        # coarse updates alone if any of them landed too close.
        if np.min(distance_field(domain, candidate)) >= _MIN_VERTEX_DISTANCE:
            pts = candidate
        else:
            pts[idx] = moved

    pts = _descend(domain, pts, max_sweeps, rel_tol, domain.scale)
    refined = Curve(pts)
    if qh_length(domain, refined) > qh_length(domain, curve):
        return curve
    return refined
