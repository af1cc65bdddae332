"""Grid shortest-path solver for quasi-hyperbolic distances.

Pipeline per query: lay a lattice over a box around the pair, keep nodes
at least `margin` spacings inside the domain, connect them with a fixed
stencil weighted by three-point Simpson estimates of the density
integral, run Dijkstra, polish the extracted path with the descent
refiner, and measure it with adaptive quadrature. The whole thing repeats
at half the spacing; the reported value is the linear Richardson
extrapolation of the two refined lengths and the error estimate their
gap.

Boxes are chosen from the pair's own geometry (endpoints, boundary feet,
and the half-space geodesic's apex height) and enlarged with retries if
the path is cut off or grazes a box face.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

from ..errors import Disconnected, PointOutsideDomain, PointTooCloseToBoundary
from ..geom.contact import boundary_contact, distance_field
from ..geom.domains import Domain, as_point
from .curve import Curve
from .qh import qh_length, segment_weight
from .refine import refine_geodesic

_CHUNK = 250_000
_MAX_NODES = 8_000_000

# Half stencils: one offset per +/- pair; the graph is used undirected.
_STENCILS = {
    (2, 8): ((1, 0), (0, 1), (1, 1), (1, -1)),
    (2, 16): ((1, 0), (0, 1), (1, 1), (1, -1),
              (1, 2), (1, -2), (2, 1), (2, -1)),
    (3, 6): ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    (3, 18): ((1, 0, 0), (0, 1, 0), (0, 0, 1),
              (1, 1, 0), (1, -1, 0), (1, 0, 1), (1, 0, -1),
              (0, 1, 1), (0, 1, -1)),
    (3, 26): ((1, 0, 0), (0, 1, 0), (0, 0, 1),
              (1, 1, 0), (1, -1, 0), (1, 0, 1), (1, 0, -1),
              (0, 1, 1), (0, 1, -1),
              (1, 1, 1), (1, -1, 1), (1, 1, -1), (1, -1, -1)),
}


@dataclass(frozen=True)
class GridSpec:
    """Lattice parameters for the shortest-path solver.

    margin is measured in units of spacing: nodes closer to the boundary
    than margin*spacing are dropped. stencil=0 picks the dimension
    default (16 neighbors in 2-d, 26 in 3-d).
    """

    spacing: float
    box: tuple | None = None
    margin: float = 4.0
    stencil: int = 0

    def __post_init__(self):
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")
        if self.margin < 2.0:
            raise ValueError("margin below 2 lets edges graze the boundary")
        if self.box is not None:
            lo, hi = (np.asarray(side, dtype=float) for side in self.box)
            if lo.shape != hi.shape or np.any(lo >= hi):
                raise ValueError("box must satisfy lo < hi componentwise")

    def offsets(self, dim: int):
        code = self.stencil if self.stencil else (16 if dim == 2 else 26)
        try:
            return _STENCILS[(dim, code)]
        except KeyError:
            valid = sorted(c for d, c in _STENCILS if d == dim)
            raise ValueError(f"stencil {code} invalid in {dim}-d; "
                             f"choose from {valid}") from None


def _chunked_distance(domain: Domain, pts: np.ndarray) -> np.ndarray:
    out = np.empty(pts.shape[0])
    for start in range(0, pts.shape[0], _CHUNK):
        stop = start + _CHUNK
        out[start:stop] = distance_field(domain, pts[start:stop])
    return out


class GridSolver:
    """A grid graph at one resolution, with query points wired in.

    Building the graph dominates the cost, so one solver instance serves
    many shortest-path queries between its registered endpoints (batch
    experiments register every pair up front). Endpoint nodes carry exact
    Simpson-weighted connector edges to the active lattice nodes around
    them.
    """

    def __init__(self, domain: Domain, spec: GridSpec, box, endpoints):
        self.domain = domain
        self.spec = spec
        h = spec.spacing
        lo, hi = (np.asarray(side, dtype=float) for side in box)
        dim = domain.dim
        if lo.shape != (dim,):
            raise ValueError(f"box has dim {lo.shape}, domain wants ({dim},)")

        counts = np.floor((hi - lo) / h + 1e-9).astype(int) + 1
        total = int(np.prod(counts))
        if total > _MAX_NODES:
            raise ValueError(
                f"grid would need {total} nodes; enlarge spacing or shrink the box")
        axes = [lo[i] + h * np.arange(counts[i]) for i in range(dim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        coords = np.stack([m.ravel() for m in mesh], axis=-1)
        dist = _chunked_distance(domain, coords)
        active = dist >= spec.margin * h

        n_active = int(np.count_nonzero(active))
        if n_active == 0:
            raise Disconnected("no grid nodes clear the boundary margin")
        ids = np.full(total, -1, dtype=np.int64)
        ids[active] = np.arange(n_active)
        self.coords = coords[active]
        self._h = h
        self._ids_grid = ids.reshape(tuple(counts))
        self._axes_lo = lo
        self._counts = counts
        inv = np.zeros(total)
        inv[active] = 1.0 / dist[active]

        rows, cols, weights = [], [], []
        id_grid = self._ids_grid
        inv_grid = inv.reshape(tuple(counts))
        coord_grid = coords.reshape(tuple(counts) + (dim,))
        for off in spec.offsets(dim):
            src_slc = tuple(slice(max(0, -o), counts[i] - max(0, o))
                            for i, o in enumerate(off))
            dst_slc = tuple(slice(max(0, o), counts[i] - max(0, -o))
                            for i, o in enumerate(off))
            src_ids = id_grid[src_slc].ravel()
            dst_ids = id_grid[dst_slc].ravel()
            ok = (src_ids >= 0) & (dst_ids >= 0)
            if not np.any(ok):
                continue
            src_ids = src_ids[ok]
            dst_ids = dst_ids[ok]
            mids = 0.5 * (coord_grid[src_slc].reshape(-1, dim)[ok]
                          + coord_grid[dst_slc].reshape(-1, dim)[ok])
            d_mid = _chunked_distance(domain, mids)
            inv_src = inv_grid[src_slc].ravel()[ok]
            inv_dst = inv_grid[dst_slc].ravel()[ok]
            good = d_mid > 0
            length = h * math.hypot(*off) if dim == 2 else h * math.sqrt(sum(o * o for o in off))
            w = length * (inv_src + 4.0 / np.where(good, d_mid, 1.0) + inv_dst) / 6.0
            rows.append(src_ids[good])
            cols.append(dst_ids[good])
            weights.append(w[good])

        self.endpoints = np.asarray(endpoints, dtype=float).reshape(-1, dim)
        n_total = n_active + self.endpoints.shape[0]
        for k, p in enumerate(self.endpoints):
            nbr_ids, nbr_w = self._connectors(p)
            rows.append(np.full(nbr_ids.shape, n_active + k, dtype=np.int64))
            cols.append(nbr_ids)
            weights.append(nbr_w)

        self.n_active = n_active
        self.graph = csr_matrix(
            (np.concatenate(weights),
             (np.concatenate(rows), np.concatenate(cols))),
            shape=(n_total, n_total))

    def _connectors(self, p: np.ndarray):
        """Active nodes within a 2-cell window of p, with edge weights."""
        h = self._h
        lo_idx = np.maximum(np.ceil((p - self._axes_lo) / h - 2.001).astype(int), 0)
        hi_idx = np.minimum(np.floor((p - self._axes_lo) / h + 2.001).astype(int),
                            self._counts - 1)
        if np.any(lo_idx > hi_idx):
            raise Disconnected("query point falls outside the grid box")
        window = tuple(slice(lo_idx[i], hi_idx[i] + 1) for i in range(len(p)))
        ids = self._ids_grid[window].ravel()
        ids = ids[ids >= 0]
        if ids.size == 0:
            raise Disconnected("no active grid nodes near a query point")
        nodes = self.coords[ids]
        w = segment_weight(self.domain, np.tile(p, (ids.size, 1)), nodes)
        return ids, w

    def shortest_path(self, i: int, j: int, limit: float = math.inf):
        """(graph distance, node polyline) between registered endpoints."""
        src = self.n_active + i
        dst = self.n_active + j
        dists, preds = _csgraph_dijkstra(
            self.graph, directed=False, indices=src,
            return_predecessors=True, limit=limit)
        if not math.isfinite(dists[dst]) and math.isfinite(limit):
            dists, preds = _csgraph_dijkstra(
                self.graph, directed=False, indices=src,
                return_predecessors=True)
        if not math.isfinite(dists[dst]):
            raise Disconnected("grid path not found inside the box")
        chain = [dst]
        guard = self.graph.shape[0] + 1
        while chain[-1] != src:
            chain.append(int(preds[chain[-1]]))
            if len(chain) > guard:
                raise Disconnected("predecessor chain did not close")
        chain.reverse()
        pts = [self.endpoints[i]]
        pts.extend(self.coords[k] for k in chain[1:-1])
        pts.append(self.endpoints[j])
        return float(dists[dst]), Curve(np.asarray(pts))


@dataclass(frozen=True)
class QhDistanceResult:
    """Solver output for one pair.

    value is the Richardson extrapolation of the two refined-path lengths
    (resolution_values, coarse then fine); error_estimate is their gap
    and converged its comparison against 5e-3 of the value. geodesic is
    the refined fine-resolution path.
    """

    value: float
    error_estimate: float
    spacing: float
    converged: bool
    geodesic: Curve
    resolution_values: tuple[float, float]


def _auto_box(domain: Domain, a, b, contacts, h: float, growth: float):
    """Bounding box heuristic from the pair's boundary contacts.

    Geodesics bow away from the boundary, so the box hull of the points
    and their feet is stretched along the mean inward normal by the apex
    height of the comparison arc (computed in the flattened picture from
    the tangential gap between the feet). Everything else gets a thin pad;
    the caller retries with a bigger growth factor if the path hits a face.
    """
    ca, cb = contacts
    d_a, d_b = float(ca.distance), float(cb.distance)
    xi = float(np.linalg.norm(ca.foot - cb.foot))
    # The comparison arc tops out at the circle radius only when the
    # circle's highest point lies between the feet; otherwise the arc is
    # height-monotone and max(d_a, d_b) bounds it. Without this guard a
    # nearly-normal pair with unequal depths (xi -> 0) stretches the box
    # by the full circle radius, which diverges like 1/xi.
    if xi > 1e-14:
        xi_c = (d_b * d_b + xi * xi - d_a * d_a) / (2.0 * xi)
        apex = math.hypot(d_a, xi_c) if 0.0 <= xi_c <= xi else 0.0
    else:
        apex = 0.0
    apex = max(apex, d_a, d_b)
    anchor = np.stack([a, b, ca.foot, cb.foot])
    lo, hi = anchor.min(axis=0), anchor.max(axis=0)
    pad = growth * (6.0 * h + 0.15 * apex)
    normal = ca.normal + cb.normal
    n_len = float(np.linalg.norm(normal))
    if n_len > 1e-12:
        tips = np.stack([ca.foot, cb.foot]) + growth * apex * (normal / n_len)
        lo = np.minimum(lo, tips.min(axis=0))
        hi = np.maximum(hi, tips.max(axis=0))
    else:
        # Normals cancel (feet on opposing walls); no preferred direction.
        pad = growth * (apex + 6.0 * h)
    return lo - pad, hi + pad


def _near_rim(curve: Curve, box, threshold: float) -> bool:
    lo, hi = box
    pts = curve.points
    return bool(np.any(pts - lo < threshold) or np.any(hi - pts < threshold))


def _chord_limit(domain: Domain, a, b) -> float:
    """Generous Dijkstra pruning bound from the straight chord, if interior."""
    ts = np.linspace(0.0, 1.0, 129)[:, None]
    chord = a + ts * (b - a)
    d = distance_field(domain, chord)
    if np.any(d <= 0):
        return math.inf
    inv = 1.0 / d
    steps = np.linalg.norm(np.diff(chord, axis=0), axis=1)
    value = float(np.sum(steps * 0.5 * (inv[:-1] + inv[1:])))
    return 1.3 * value + 1.0


def _value_at_resolution(domain, spec, box, a, b, limit, do_refine):
    solver = GridSolver(domain, spec, box, [a, b])
    _, path = solver.shortest_path(0, 1, limit=limit)
    if do_refine:
        path = refine_geodesic(domain, path)
    return qh_length(domain, path), path


def qh_distance(domain: Domain, a, b, grid: GridSpec | None = None,
                do_refine: bool = True) -> QhDistanceResult:
    """Quasi-hyperbolic distance between interior points a and b.

    Runs the grid solver at grid.spacing and half of it inside a box
    around the pair, enlarging the box (up to 3 times) if the path is cut
    off or ends up hugging a box face. Both endpoints must clear the
    boundary by margin*spacing.
    """
    a = as_point(a, domain.dim)
    b = as_point(b, domain.dim)
    d_vals = distance_field(domain, np.stack([a, b]))
    if np.min(d_vals) <= 0.0:
        raise PointOutsideDomain("both endpoints must be interior points")
    if grid is None:
        grid = GridSpec(spacing=float(min(d_vals)) / 8.0)
    h = grid.spacing
    if np.array_equal(a, b):
        curve = Curve(np.stack([a, b]))
        return QhDistanceResult(value=0.0, error_estimate=0.0, spacing=h,
                                converged=True, resolution_values=(0.0, 0.0),
                                geodesic=curve)
    if min(d_vals) < grid.margin * h:
        raise PointTooCloseToBoundary(
            f"endpoints need d >= margin*spacing = {grid.margin * h:.3e}, "
            f"got {float(min(d_vals)):.3e}")

    contacts = (boundary_contact(domain, a), boundary_contact(domain, b))
    limit = _chord_limit(domain, a, b)
    fine = GridSpec(spacing=h / 2.0, box=None, margin=grid.margin,
                    stencil=grid.stencil)

    fixed_box = grid.box is not None
    growth = 1.0
    attempts = 1 if fixed_box else 4
    last_exc = None
    for _ in range(attempts):
        box = (tuple(np.asarray(grid.box[0], dtype=float)),
               tuple(np.asarray(grid.box[1], dtype=float))) if fixed_box else \
            _auto_box(domain, a, b, contacts, h, growth)
        try:
            v_coarse, _ = _value_at_resolution(domain, grid, box, a, b,
                                               limit, do_refine)
            v_fine, path_fine = _value_at_resolution(domain, fine, box, a, b,
                                                     limit, do_refine)
        except Disconnected as exc:
            last_exc = exc
            growth *= 1.6
            continue
        if not fixed_box and _near_rim(path_fine, box, 2.5 * h):
            growth *= 1.6
            last_exc = Disconnected("geodesic hugged the box rim")
            continue
        value = 2.0 * v_fine - v_coarse
        err = abs(v_coarse - v_fine)
        return QhDistanceResult(
            value=value, error_estimate=err, spacing=fine.spacing,
            converged=err < 5e-3 * abs(value) if value else err == 0.0,
            geodesic=path_fine, resolution_values=(v_coarse, v_fine))
    raise last_exc if last_exc else Disconnected("no grid path found")
