"""Batch experiments: boundary-limit ladders, bound suites, constant fits.

Everything here drives the grid solver over families of point pairs and
assembles Report tables. The interesting math lives elsewhere; this
module owns pair generation, per-rung error policy (a rung that is too
close to the boundary for its grid is marked skipped, not fatal), and
the trend verdicts extracted from the finished table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstantOutOfRange, QhlabError
from .geom.contact import distance_field
from .geom.domains import Domain, as_point
from .geom.modulus import ModulusOfContinuity, omega_star
from .metric import ghm_value, na_value, s_value
from .reports import Report, format_float, new_report
from .solver.curve import Curve
from .solver.grid import GridSpec, qh_distance

MODES = ("normal-pair", "tangential-pair", "fixed-ratio")

# Verdict tolerances: ~5x the solver noise observed at spacing 1/256.
DIFF_TOL = 0.05
RATIO_TOL = 0.02


@dataclass(frozen=True)
class SequenceSpec:
    """Ladder of point pairs collapsing onto the boundary point zeta.

    Rung k uses depth t_k = t0 * 2^{-k}. Modes:
      normal-pair      both points on the inward normal, depths t and 2t
      tangential-pair  depth t at zeta and at arc offset sqrt(t)
      fixed-ratio      depth t at zeta and at arc offset ratio*t

    In tangential mode only the sign of ratio matters: it picks which way
    the arc offset walks (useful when the two directions see different
    boundary, as at a one-sided curvature jump).
    """

    domain: Domain
    zeta: np.ndarray
    mode: str
    t0: float = 0.25
    rungs: int = 8
    ratio: float = 1.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not 0 < self.rungs <= 12:
            raise ValueError("rungs must be in 1..12")
        if not self.t0 > 0:
            raise ValueError("t0 must be positive")
        object.__setattr__(self, "zeta", as_point(self.zeta, self.domain.dim))

    def depth(self, k: int) -> float:
        return self.t0 * 2.0 ** (-k)

    def pair(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        t = self.depth(k)
        dom = self.domain
        n = dom.inward_normal(self.zeta)
        a = self.zeta + t * n
        if self.mode == "normal-pair":
            return a, self.zeta + 2.0 * t * n
        if self.mode == "tangential-pair":
            offset = math.copysign(math.sqrt(t), self.ratio)
        else:
            offset = self.ratio * t
        zeta2 = dom.boundary_walk(self.zeta, offset)
        return a, zeta2 + t * dom.inward_normal(zeta2)


def _point_columns(dim: int) -> tuple[str, ...]:
    return tuple(f"a_{i}" for i in range(dim)) + tuple(f"b_{i}" for i in range(dim))


def _pair_geometry(domain, a, b):
    d = distance_field(domain, np.stack([a, b]))
    sep = float(np.linalg.norm(a - b))
    return float(d[0]), float(d[1]), sep


_NAN_FIELDS = (math.nan,) * 6  # h, diff, ratio, ghm, na, err placeholders


def run_asymptotics(spec: SequenceSpec, c: float = 1.2,
                    timestamp: str | None = None) -> Report:
    """Solve every rung of the ladder and attach trend verdicts.

    Metadata gains diff_trend (final |h - s|), ratio_trend (final
    |h/s - 1|) and passed, all taken at the deepest rung whose solver
    result converged.
    """
    dom = spec.domain
    report = new_report(
        "asymptotics", timestamp,
        domain=dom.describe(), mode=spec.mode,
        zeta=";".join(format_float(z) for z in spec.zeta),
        t0=format_float(spec.t0), rungs=str(spec.rungs),
        ratio=format_float(spec.ratio), c=format_float(c),
        spacing_rule="t/8",
    )
    report.columns = (("k", "t") + _point_columns(dom.dim)
                      + ("d_a", "d_b", "sep", "s", "h", "diff", "ratio",
                         "ghm", "na_bound", "error_estimate", "status"))
    diff_trend = math.nan
    ratio_trend = math.nan
    for k in range(spec.rungs + 1):
        t = spec.depth(k)
        try:
            a, b = spec.pair(k)
            d_a, d_b, sep = _pair_geometry(dom, a, b)
        except (QhlabError, ValueError):
            report.add_row(k, t, *(math.nan,) * (2 * dom.dim + 4),
                           *_NAN_FIELDS, "skipped")
            continue
        s = float(s_value(sep, d_a, d_b))
        ghm = float(ghm_value(sep, d_a, d_b))
        na = float(na_value(sep, d_a, d_b, c))
        try:
            res = qh_distance(dom, a, b, grid=GridSpec(spacing=t / 8.0))
        except QhlabError:
            report.add_row(k, t, *a, *b, d_a, d_b, sep, s,
                           math.nan, math.nan, math.nan, ghm, na, math.nan,
                           "skipped")
            continue
        h = res.value
        status = "ok" if res.converged else "noisy"
        report.add_row(k, t, *a, *b, d_a, d_b, sep, s,
                       h, h - s, h / s, ghm, na, res.error_estimate, status)
        if status == "ok":
            diff_trend = abs(h - s)
            ratio_trend = abs(h / s - 1.0)
    passed = diff_trend <= DIFF_TOL and ratio_trend <= RATIO_TOL
    report.metadata["diff_trend"] = format_float(diff_trend)
    report.metadata["ratio_trend"] = format_float(ratio_trend)
    report.metadata["passed"] = "true" if passed else "false"
    return report


def run_bound_suite(domain: Domain, pairs, c_values,
                    grid: GridSpec | None = None,
                    timestamp: str | None = None) -> Report:
    """Check the two closed-form bounds against solver values.

    The lower bound must hold for every pair (violations are counted in
    metadata and should be zero). For each c the metadata records
    t_star(c): the largest depth t such that every tested pair lying
    within depth t of the boundary respected the upper bound.
    """
    c_values = [float(c) for c in c_values]
    report = new_report("bound-suite", timestamp, domain=domain.describe(),
                        n_pairs=str(len(pairs)),
                        c_values=";".join(format_float(c) for c in c_values))
    na_cols = tuple(f"na({format_float(c)})" for c in c_values)
    report.columns = (("k",) + _point_columns(domain.dim)
                      + ("d_a", "d_b", "sep", "s", "h", "ghm")
                      + na_cols + ("error_estimate", "status"))
    ghm_violations = 0
    depths = []
    upper_ok = {c: [] for c in c_values}
    for k, (a, b) in enumerate(pairs):
        a = as_point(a, domain.dim)
        b = as_point(b, domain.dim)
        d_a, d_b, sep = _pair_geometry(domain, a, b)
        s = float(s_value(sep, d_a, d_b))
        ghm = float(ghm_value(sep, d_a, d_b))
        nas = [float(na_value(sep, d_a, d_b, c)) for c in c_values]
        try:
            res = qh_distance(domain, a, b, grid=grid)
        except QhlabError:
            report.add_row(k, *a, *b, d_a, d_b, sep, s, math.nan, ghm,
                           *nas, math.nan, "skipped")
            continue
        h, err = res.value, res.error_estimate
        if ghm > h + err:
            ghm_violations += 1
        depths.append(max(d_a, d_b))
        for c, na in zip(c_values, nas):
            upper_ok[c].append(h <= na + err)
        report.add_row(k, *a, *b, d_a, d_b, sep, s, h, ghm, *nas, err,
                       "ok" if res.converged else "noisy")
    report.metadata["ghm_violations"] = str(ghm_violations)
    order = np.argsort(depths) if depths else []
    for c in c_values:
        t_star = 0.0
        for i in order:
            if not upper_ok[c][i]:
                break
            t_star = depths[i]
        report.metadata[f"t_star({format_float(c)})"] = format_float(t_star)
    return report


def collar_pairs(domain: Domain, zeta, depth: float):
    """Deterministic pair battery inside the depth collar at zeta."""
    out = []
    for j in range(3):
        t = depth / 2.0 * 2.0 ** (-j)
        out.append(SequenceSpec(domain, zeta, "normal-pair", t0=t, rungs=1).pair(0))
    for lam in (1.0, 3.0):
        for j in range(3):
            t = depth * 2.0 ** (-j)
            spec = SequenceSpec(domain, zeta, "fixed-ratio", t0=t, rungs=1,
                                ratio=lam)
            out.append(spec.pair(0))
    return out


def estimate_best_constant(domain: Domain, zeta, depth: float,
                           c_max: float = 8.0, tol: float = 1e-3) -> float:
    """Least c whose upper bound survives a pair battery in the collar.

    Solver values are computed once; the bisection over c is then free.
    Returns the smallest verified c (within tol); raises
    ConstantOutOfRange when even c_max fails.
    """
    zeta = as_point(zeta, domain.dim)
    samples = []
    for a, b in collar_pairs(domain, zeta, depth):
        d_a, d_b, sep = _pair_geometry(domain, a, b)
        t = min(d_a, d_b)
        try:
            res = qh_distance(domain, a, b, grid=GridSpec(spacing=t / 8.0))
        except QhlabError:
            continue
        samples.append((d_a, d_b, sep, res.value, res.error_estimate))
    if not samples:
        raise ConstantOutOfRange("no solvable pairs in the collar")

    def holds(c: float) -> bool:
        return all(h <= float(na_value(sep, d_a, d_b, c)) + err
                   for d_a, d_b, sep, h, err in samples)

    if not holds(c_max):
        raise ConstantOutOfRange(
            f"upper bound fails in the collar even at c = {c_max}")
    lo, hi = 1.0, c_max
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return hi


def correction_integral(domain: Domain, curve: Curve,
                        omega: ModulusOfContinuity) -> float:
    """Trapezoid value of the regularized-modulus line integral

        integral omega_star(d(x)) / d(x) |dx|   along the curve.

    For Lipschitz-type omega this decays like length*log(1/length) when
    the curve shrinks toward the boundary, which is what the decay-fit
    helpers measure.
    """
    pts = curve.points
    d = distance_field(domain, pts)
    w = np.array([omega_star(omega, float(di)) for di in d]) / d
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    return float(np.sum(seg * 0.5 * (w[:-1] + w[1:])))


def decay_exponent(scales, values) -> float:
    """Least-squares slope of log(values) against log(scales)."""
    scales = np.asarray(scales, dtype=float)
    values = np.asarray(values, dtype=float)
    keep = (scales > 0) & (values > 0)
    if keep.sum() < 2:
        raise ValueError("need at least two positive samples to fit")
    slope, _ = np.polyfit(np.log(scales[keep]), np.log(values[keep]), 1)
    return float(slope)


def transfer_constant_fit(domain, bar_pairs, timestamp: str | None = None,
                          ) -> tuple[float, Report]:
    """Fit the transfer constant between model and domain distances.

    bar_pairs are half-space pairs (alpha, beta); each is pushed through
    the normal flattening and solved in the domain. The fit is the
    smallest C' with |h_domain - h_model| <= C'*|alpha - beta| + 3*err
    across all samples.
    """
    from .flatten import normal_flatten
    from .metric import halfspace_distance

    report = new_report("transfer-fit", timestamp, domain=domain.describe(),
                        n_pairs=str(len(bar_pairs)))
    report.columns = ("k", "alpha_0", "alpha_1", "beta_0", "beta_1",
                      "model_h", "domain_h", "diff", "gap",
                      "error_estimate", "status")
    c_prime = 0.0
    for k, (alpha, beta) in enumerate(bar_pairs):
        alpha = np.asarray(alpha, dtype=float)
        beta = np.asarray(beta, dtype=float)
        gap = float(np.linalg.norm(alpha - beta))
        model = float(halfspace_distance(alpha, beta))
        a = normal_flatten(domain, alpha)
        b = normal_flatten(domain, beta)
        t = min(alpha[0], beta[0])
        try:
            res = qh_distance(domain, a, b, grid=GridSpec(spacing=t / 8.0))
        except QhlabError:
            report.add_row(k, *alpha, *beta, model, math.nan, math.nan, gap,
                           math.nan, "skipped")
            continue
        diff = abs(res.value - model)
        if gap > 0:
            c_prime = max(c_prime, (diff - 3.0 * res.error_estimate) / gap)
        report.add_row(k, *alpha, *beta, model, res.value, diff, gap,
                       res.error_estimate, "ok" if res.converged else "noisy")
    c_prime = max(c_prime, 0.0)
    report.metadata["c_prime"] = format_float(c_prime)
    return c_prime, report
