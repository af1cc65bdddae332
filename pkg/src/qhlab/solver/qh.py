"""Curve integrals of the reciprocal-distance density.

qh_length integrates |dx| / d_D(x) along a polyline with an adaptive
Simpson rule, batched across every active subinterval so the distance
field is always evaluated on whole arrays.
"""

from __future__ import annotations

import numpy as np

from ..errors import CurveTouchesBoundary
from ..geom.contact import distance_field
from ..geom.domains import Domain
from .curve import Curve

# Curves must stay at least this far inside at every quadrature node.
MIN_NODE_DISTANCE = 1e-9


def _inv_distance(domain: Domain, pts: np.ndarray) -> np.ndarray:
    d = distance_field(domain, pts)
    if np.any(d < MIN_NODE_DISTANCE):
        raise CurveTouchesBoundary(
            f"curve reaches d={float(np.min(d)):.3e} at a quadrature node")
    return 1.0 / d


def segment_weight(domain: Domain, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Three-point Simpson estimate of the density integral p -> q.

    Vectorized over leading axes; this is also the edge weight the grid
    graph uses, so refined curves and grid paths measure length the same
    way at coarse order.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    length = np.linalg.norm(q - p, axis=-1)
    flat_p = p.reshape(-1, p.shape[-1])
    flat_q = q.reshape(-1, q.shape[-1])
    stacked = np.concatenate([flat_p, 0.5 * (flat_p + flat_q), flat_q])
    inv = _inv_distance(domain, stacked)
    n = flat_p.shape[0]
    f = (inv[:n] + 4.0 * inv[n:2 * n] + inv[2 * n:]) / 6.0
    return length * f.reshape(length.shape)


def qh_length(domain: Domain, curve: Curve, rtol: float = 1e-8,
              max_depth: int = 36) -> float:
    """Adaptive-Simpson length of a curve in the 1/d_D density.

    Each segment is bisected until its local estimate changes by less
    than rtol relative. Zero-length segments contribute nothing; a curve
    made only of them has length 0.
    """
    pts = curve.points
    vecs = np.diff(pts, axis=0)
    lengths = np.linalg.norm(vecs, axis=1)
    keep = lengths > 0.0
    if not np.any(keep):
        return 0.0
    base = pts[:-1][keep]
    direction = vecs[keep]
    seg_len = lengths[keep]
    n = base.shape[0]

    def coords(si, t):
        return base[si] + t[:, None] * direction[si]

    si = np.arange(n)
    t0 = np.zeros(n)
    t1 = np.ones(n)
    inv = _inv_distance(
        domain, np.concatenate([coords(si, t0), coords(si, 0.5 * (t0 + t1)),
                                coords(si, t1)]))
    f0, fm, f1 = inv[:n], inv[n:2 * n], inv[2 * n:]

    total = 0.0
    depth = 0
    while si.size:
        h = t1 - t0
        mid = 0.5 * (t0 + t1)
        tl = 0.5 * (t0 + mid)
        tr = 0.5 * (mid + t1)
        inv = _inv_distance(
            domain, np.concatenate([coords(si, tl), coords(si, tr)]))
        fl, fr = inv[:si.size], inv[si.size:]
        scale = seg_len[si]
        whole = scale * h * (f0 + 4.0 * fm + f1) / 6.0
        left = scale * (h / 2.0) * (f0 + 4.0 * fl + fm) / 6.0
        right = scale * (h / 2.0) * (fm + 4.0 * fr + f1) / 6.0
        refined = left + right
        done = (np.abs(refined - whole) <= rtol * np.abs(refined)) | (depth >= max_depth)
        total += float(np.sum(refined[done]))

        live = ~done
        fm_live = fm[live]
        si = np.concatenate([si[live], si[live]])
        t0 = np.concatenate([t0[live], mid[live]])
        t1 = np.concatenate([mid[live], t1[live]])
        f0 = np.concatenate([f0[live], fm_live])
        f1 = np.concatenate([fm_live, f1[live]])
        fm = np.concatenate([fl[live], fr[live]])
        depth += 1
    return total
