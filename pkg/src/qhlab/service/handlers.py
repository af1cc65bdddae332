"""Service handlers: schema in, schema out, no HTTP anywhere.

The FastAPI app and the CLI both call these; errors surface as the
library's exception types and are mapped to transport-appropriate
failures by the caller.
"""

from __future__ import annotations

import numpy as np

from .. import __version__
from ..errors import ConfigError
from ..experiments import SequenceSpec, run_asymptotics, run_bound_suite
from ..flatten import (curve_pushforward_check, jacobian_bounds,
                       normal_flatten, sigma_flatten)
from ..geom.domains import GraphDomain, as_point, make_domain
from ..geom.modulus import (dini_integral, log_dini_integral, omega_star,
                            power_modulus, log_power_modulus)
from ..metric import ghm_value, na_value, s_value
from ..reports import report_to_text
from ..solver.curve import Curve
from ..solver.grid import GridSpec, qh_distance
from . import schemas as sc


def build_domain(spec: sc.DomainSpec):
    params = dict(spec.params)
    if spec.dim is not None:
        params["dim"] = spec.dim
    if spec.window is not None:
        params["window"] = spec.window
    try:
        return make_domain(spec.kind, **params)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def build_grid(opts: sc.GridOptions | None) -> GridSpec | None:
    if opts is None or opts.spacing is None:
        if opts is not None and (opts.margin is not None or opts.stencil is not None):
            raise ConfigError("grid spacing is required with other grid options")
        return None
    kwargs = {"spacing": opts.spacing}
    if opts.margin is not None:
        kwargs["margin"] = opts.margin
    if opts.stencil is not None:
        kwargs["stencil"] = opts.stencil
    try:
        return GridSpec(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def distance(req: sc.DistanceRequest) -> sc.DistanceResponse:
    dom = build_domain(req.domain)
    res = qh_distance(dom, req.a, req.b, grid=build_grid(req.grid),
                      do_refine=req.refine)
    return sc.DistanceResponse(
        value=res.value, error_estimate=res.error_estimate,
        spacing=res.spacing, converged=res.converged,
        resolution_values=res.resolution_values)


def geodesic(req: sc.GeodesicRequest) -> sc.GeodesicResponse:
    dom = build_domain(req.domain)
    res = qh_distance(dom, req.a, req.b, grid=build_grid(req.grid),
                      do_refine=req.refine)
    return sc.GeodesicResponse(
        value=res.value, error_estimate=res.error_estimate,
        spacing=res.spacing, converged=res.converged,
        resolution_values=res.resolution_values,
        points=res.geodesic.points.tolist())


def pair_bounds(req: sc.PairBoundsRequest) -> sc.PairBoundsResponse:
    dom = build_domain(req.domain)
    from ..geom.contact import distance_field
    a = as_point(req.a, dom.dim)
    b = as_point(req.b, dom.dim)
    d = distance_field(dom, np.stack([a, b]))
    d_a, d_b = float(d[0]), float(d[1])
    sep = float(np.linalg.norm(a - b))
    return sc.PairBoundsResponse(
        d_a=d_a, d_b=d_b, sep=sep,
        s=float(s_value(sep, d_a, d_b)),
        ghm=float(ghm_value(sep, d_a, d_b)),
        na=[sc.NaBound(c=c, value=float(na_value(sep, d_a, d_b, c)))
            for c in req.c_values])


def _build_modulus(spec: sc.ModulusSpec):
    import math
    cap = math.inf if spec.cap is None else spec.cap
    if spec.family == "power":
        return power_modulus(spec.coeff, spec.exponent, cap=cap)
    if spec.family == "log_power":
        if spec.cap is None:
            raise ConfigError("log_power moduli need an explicit cap")
        return log_power_modulus(spec.coeff, spec.exponent, spec.cap)
    raise ConfigError(f"unknown modulus family {spec.family!r}")


def modulus_verdicts(req: sc.ModulusVerdictRequest) -> sc.ModulusVerdictResponse:
    omega = _build_modulus(req.modulus)
    dini = dini_integral(omega)
    logd = log_dini_integral(omega)

    def pack(r):
        return sc.IntegralVerdict(value=r.value, truncated=r.truncated,
                                  convergent=r.convergent, slope=r.slope)

    stars = [float(omega_star(omega, s)) for s in req.omega_star_at]
    return sc.ModulusVerdictResponse(dini=pack(dini), log_dini=pack(logd),
                                     omega_star=stars)


def _default_curvature_constant(dom) -> float:
    if isinstance(dom, GraphDomain):
        return dom.profile.grad_lipschitz
    from ..flatten import _cached_reach
    reach = _cached_reach(dom)
    return 0.0 if reach == float("inf") else 1.0 / reach


def _sweep_params(dom, rng, n):
    """Lateral parameters in the central half of the window, pushed off
    any curvature jumps (a.e. statements are sampled a.e.)."""
    w_lo, w_hi = dom.window
    mid = 0.5 * (w_lo + w_hi)
    half = 0.25 * (w_hi - w_lo)
    t = rng.uniform(mid - half, mid + half, size=n)
    for g in dom.profile.nonsmooth_params:
        near = np.abs(t - g) < 1e-3
        t[near] = g + np.where(t[near] >= g, 1e-3, -1e-3)
    return t


def jacobian_sweep(req: sc.JacobianSweepRequest) -> sc.JacobianSweepResponse:
    dom = build_domain(req.domain)
    C = req.C if req.C is not None else _default_curvature_constant(dom)
    bound = req.bound or ("sandwich" if req.map == "sigma" else "lower")
    if bound not in ("lower", "sandwich"):
        raise ConfigError("bound must be 'lower' or 'sandwich'")
    rng = np.random.default_rng(req.seed)

    if req.map == "normal":
        map_fn = normal_flatten
    elif req.map == "sigma":
        if req.anchor_a is None or req.anchor_b is None:
            raise ConfigError("sigma sweeps need anchor_a and anchor_b")
        a = as_point(req.anchor_a, 2)
        b = as_point(req.anchor_b, 2)

        def map_fn(d, xbar, _a=a, _b=b):
            return sigma_flatten(d, _a, _b, xbar)
    else:
        raise ConfigError(f"unknown sweep map {req.map!r}")

    x0 = rng.uniform(req.x0_min, req.x0_max, size=req.n_points)
    if isinstance(dom, GraphDomain):
        lateral = _sweep_params(dom, rng, req.n_points)
    else:
        lateral = rng.uniform(-1.0, 1.0, size=req.n_points)
    n_failed = 0
    worst_lo = np.inf
    worst_hi = np.inf
    for h, t in zip(x0, lateral):
        rep = jacobian_bounds(map_fn, dom, [h, t], C)
        worst_lo = min(worst_lo, rep.sigma_min - rep.predicted_lower)
        ok = rep.lower_ok
        if bound == "sandwich":
            worst_hi = min(worst_hi, rep.predicted_upper - rep.sigma_max)
            ok = ok and rep.upper_ok
        n_failed += not ok
    return sc.JacobianSweepResponse(
        n_points=req.n_points, n_failed=n_failed,
        worst_lower_slack=float(worst_lo),
        worst_upper_slack=None if bound == "lower" else float(worst_hi),
        C_used=float(C), passed=n_failed == 0)


def _random_halfspace_curve(rng, x0_min, x0_max):
    k = int(rng.integers(3, 9))
    heights = rng.uniform(x0_min, x0_max, size=k)
    lateral = np.sort(rng.uniform(-0.6, 0.6, size=k))
    return Curve(np.stack([heights, lateral], axis=1))


def pushforward_sweep(req: sc.PushforwardSweepRequest) -> sc.PushforwardSweepResponse:
    dom = build_domain(req.domain)
    C = req.C if req.C is not None else _default_curvature_constant(dom)
    rng = np.random.default_rng(req.seed)
    min_margin = np.inf
    n_checks = 0
    for _ in range(req.n_curves):
        curve = _random_halfspace_curve(rng, req.x0_min, req.x0_max)
        for weight in ("unit", "inv_distance"):
            margin = curve_pushforward_check(dom, curve, weight, C)
            min_margin = min(min_margin, margin)
            n_checks += 1
    return sc.PushforwardSweepResponse(
        n_checks=n_checks, min_margin=float(min_margin), C_used=float(C),
        passed=min_margin >= -1e-6)


def asymptotics(req: sc.AsymptoticsRequest) -> sc.ExperimentResponse:
    dom = build_domain(req.domain)
    spec = SequenceSpec(dom, req.zeta, req.mode, t0=req.t0,
                        rungs=req.rungs, ratio=req.ratio)
    report = run_asymptotics(spec, c=req.c, timestamp=req.timestamp)
    return sc.ExperimentResponse(
        report=report_to_text(report, req.format), format=req.format,
        passed=report.metadata["passed"] == "true",
        metadata=dict(report.metadata))


def bound_suite(req: sc.BoundSuiteRequest) -> sc.ExperimentResponse:
    dom = build_domain(req.domain)
    pairs = [(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
             for a, b in req.pairs]
    report = run_bound_suite(dom, pairs, req.c_values,
                             grid=build_grid(req.grid),
                             timestamp=req.timestamp)
    return sc.ExperimentResponse(
        report=report_to_text(report, req.format), format=req.format,
        passed=report.metadata["ghm_violations"] == "0",
        metadata=dict(report.metadata))


def best_constant(req: sc.BestConstantRequest) -> sc.BestConstantResponse:
    from ..experiments import estimate_best_constant
    dom = build_domain(req.domain)
    return sc.BestConstantResponse(
        c=estimate_best_constant(dom, req.zeta, req.depth))


def health() -> sc.HealthResponse:
    return sc.HealthResponse(status="ok", version=__version__)
