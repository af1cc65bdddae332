"""Command-line front end: distance queries, geodesic extraction, bound
verification, asymptotics ladders, and flattening checks.

Each subcommand is a thin client over the service handlers: flags and
an optional ``key = value`` config file (flags win) are folded into one
settings mapping, turned into a request model, and executed in process.
Report timestamps default to a pinned epoch value, so two runs with the
same inputs write the same bytes.

Exit codes: 0 when every enabled check passed (for dist: the solver
converged), 2 when a check or convergence failed, 1 on precondition or
input errors.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .config import load_config, merge_overrides, parse_point
from .errors import ConfigError, IoFailure, QhlabError
from .experiments import collar_pairs
from .flatten import jacobian_bounds, normal_flatten, sigma_flatten
from .geom.domains import Ball, GraphDomain, HalfSpace
from .reports import format_float, new_report, report_to_text
from .service import handlers
from .service import schemas as sc

_MODE_ALIASES = {"normal": "normal-pair", "tangential": "tangential-pair"}
_MODES = ("normal", "normal-pair", "tangential", "tangential-pair",
          "fixed-ratio")
_SUITES = ("ghm", "asymptotics", "jacobian", "pushforward", "modulus")

_PARAM_PREFIX = "domain.params."


# ---------------------------------------------------------------- settings

def _flag_overrides(args) -> dict:
    """Config-key overrides from whatever flags this subcommand carries."""
    o: dict = {}

    def put(key, value):
        if value is not None:
            o[key] = value

    put("domain.kind", getattr(args, "domain", None))
    put("domain.dim", getattr(args, "dim", None))
    put(_PARAM_PREFIX + "kappa", getattr(args, "kappa", None))
    for item in getattr(args, "param", None) or []:
        name, eq, value = item.partition("=")
        name = name.strip()
        if not eq or not name:
            raise ConfigError(f"--param wants NAME=VALUE, got {item!r}")
        try:
            o[_PARAM_PREFIX + name] = float(value)
        except ValueError:
            raise ConfigError(
                f"--param {name} needs a number, got {value.strip()!r}") from None
    window = getattr(args, "window", None)
    if window is not None:
        w = parse_point(window)
        if w.size != 2:
            raise ConfigError("--window wants LO,HI")
        o["window.lo"], o["window.hi"] = float(w[0]), float(w[1])

    put("grid.spacing", getattr(args, "spacing", None))
    put("grid.margin", getattr(args, "margin", None))
    put("grid.stencil", getattr(args, "stencil", None))

    mode = getattr(args, "mode", None)
    if mode is not None:
        o["experiment.mode"] = _MODE_ALIASES.get(mode, mode)
    put("experiment.t0", getattr(args, "t0", None))
    put("experiment.rungs", getattr(args, "rungs", None))
    put("experiment.ratio", getattr(args, "ratio", None))
    put("experiment.c", getattr(args, "c", None))
    c_values = getattr(args, "c_values", None)
    if c_values is not None:
        o["experiment.c_values"] = [float(v) for v in parse_point(c_values)]
    zeta = getattr(args, "zeta", None)
    if zeta is not None:
        o["experiment.zeta"] = parse_point(zeta)
    put("experiment.depth", getattr(args, "depth", None))

    put("output.format", getattr(args, "format", None))
    put("output.path", getattr(args, "out", None))
    put("output.timestamp", getattr(args, "timestamp", None))
    return o


def _settings(args) -> dict:
    cfg = load_config(args.config) if getattr(args, "config", None) else {}
    return merge_overrides(cfg, _flag_overrides(args))


def _domain_spec(cfg: dict) -> sc.DomainSpec:
    kind = cfg.get("domain.kind")
    if kind is None:
        raise ConfigError("no domain given (--domain or domain.kind)")
    params = {key[len(_PARAM_PREFIX):]: value for key, value in cfg.items()
              if key.startswith(_PARAM_PREFIX)}
    if ("window.lo" in cfg) != ("window.hi" in cfg):
        raise ConfigError("window.lo and window.hi must be given together")
    window = ((cfg["window.lo"], cfg["window.hi"])
              if "window.lo" in cfg else None)
    return sc.DomainSpec(kind=kind, params=params,
                         dim=cfg.get("domain.dim"), window=window)


def _grid_options(cfg: dict) -> sc.GridOptions | None:
    vals = (cfg.get("grid.spacing"), cfg.get("grid.margin"),
            cfg.get("grid.stencil"))
    if all(v is None for v in vals):
        return None
    return sc.GridOptions(spacing=vals[0], margin=vals[1], stencil=vals[2])


def _default_zeta(dom) -> list[float]:
    """Canonical boundary point when --zeta is not given."""
    if isinstance(dom, HalfSpace):
        return [0.0] * dom.dim
    if isinstance(dom, Ball):
        z = dom.center.copy()
        z[0] += dom.radius
        return [float(v) for v in z]
    if isinstance(dom, GraphDomain):
        mid = 0.5 * (dom.window[0] + dom.window[1])
        if dom.dim == 2:
            return [float(v) for v in dom.graph_point(mid)]
        return [float(dom.profile.f(abs(mid))), mid, 0.0]
    raise ConfigError(f"--zeta is required for domain {dom.describe()}")


def _zeta_from(cfg: dict, dom) -> list[float]:
    zeta = cfg.get("experiment.zeta")
    if zeta is None:
        return _default_zeta(dom)
    return [float(v) for v in zeta]


def _fmt_point(p) -> str:
    return ",".join(format_float(float(v)) for v in p)


def _deliver(text: str, cfg: dict) -> None:
    path = cfg.get("output.path")
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from None


def _verdict(label: str, ok: bool) -> None:
    print(f"{label}: {'pass' if ok else 'FAIL'}", file=sys.stderr)


# ------------------------------------------------------------- subcommands

def _cmd_dist(args) -> int:
    cfg = _settings(args)
    req = sc.DistanceRequest(domain=_domain_spec(cfg),
                             a=[float(v) for v in parse_point(args.a)],
                             b=[float(v) for v in parse_point(args.b)],
                             grid=_grid_options(cfg),
                             refine=not args.no_refine)
    res = handlers.distance(req)
    print(f"value = {format_float(res.value)}")
    print(f"error_estimate = {format_float(res.error_estimate)}")
    print(f"converged = {'true' if res.converged else 'false'}")
    return 0 if res.converged else 2


def _cmd_geodesic(args) -> int:
    cfg = _settings(args)
    spec = _domain_spec(cfg)
    req = sc.GeodesicRequest(domain=spec,
                             a=[float(v) for v in parse_point(args.a)],
                             b=[float(v) for v in parse_point(args.b)],
                             grid=_grid_options(cfg),
                             refine=not args.no_refine)
    res = handlers.geodesic(req)
    pts = np.asarray(res.points)
    arc = np.concatenate(
        [[0.0], np.cumsum(np.linalg.norm(np.diff(pts, axis=0), axis=1))])
    report = new_report(
        "geodesic", cfg.get("output.timestamp"),
        domain=handlers.build_domain(spec).describe(),
        a=_fmt_point(req.a), b=_fmt_point(req.b),
        value=format_float(res.value),
        error_estimate=format_float(res.error_estimate),
        spacing=format_float(res.spacing),
        converged="true" if res.converged else "false")
    dim = pts.shape[1]
    report.columns = (("i",) + tuple(f"x_{i}" for i in range(dim))
                      + ("arc_length",))
    for i, p in enumerate(pts):
        report.add_row(i, *(float(v) for v in p), float(arc[i]))
    _deliver(report_to_text(report, cfg.get("output.format", "csv")), cfg)
    return 0 if res.converged else 2


def _asymptotics_response(cfg: dict, spec: sc.DomainSpec):
    dom = handlers.build_domain(spec)
    req = sc.AsymptoticsRequest(
        domain=spec, zeta=_zeta_from(cfg, dom),
        mode=cfg.get("experiment.mode", "tangential-pair"),
        t0=cfg.get("experiment.t0", 0.25),
        rungs=cfg.get("experiment.rungs", 8),
        ratio=cfg.get("experiment.ratio", 1.0),
        c=cfg.get("experiment.c", 1.2),
        format=cfg.get("output.format", "csv"),
        timestamp=cfg.get("output.timestamp"))
    return handlers.asymptotics(req)


def _cmd_asymptotics(args) -> int:
    cfg = _settings(args)
    res = _asymptotics_response(cfg, _domain_spec(cfg))
    _deliver(res.report, cfg)
    _verdict("asymptotics", res.passed)
    return 0 if res.passed else 2


# Default collar depth for the ghm suite, as a fraction of domain scale.
# Graph windows must also fit the widest fixed-ratio walk (lambda = 3).
def _default_depth(dom) -> float:
    frac = 0.05 if isinstance(dom, GraphDomain) else 0.4
    return frac * dom.scale


def _verify_ghm(cfg: dict, spec: sc.DomainSpec, args):
    dom = handlers.build_domain(spec)
    zeta = _zeta_from(cfg, dom)
    depth = cfg.get("experiment.depth", _default_depth(dom))
    pairs = [([float(v) for v in a], [float(v) for v in b])
             for a, b in collar_pairs(dom, zeta, depth)]
    req = sc.BoundSuiteRequest(
        domain=spec, pairs=pairs,
        c_values=cfg.get("experiment.c_values") or [1.2],
        grid=_grid_options(cfg),
        format=cfg.get("output.format", "csv"),
        timestamp=cfg.get("output.timestamp"))
    res = handlers.bound_suite(req)
    return res.report, res.passed


def _sigma_anchors(dom) -> tuple[list[float], list[float]]:
    lo, hi = dom.window
    mid, span = 0.5 * (lo + hi), hi - lo
    depth = 0.05 * span
    pts = [dom.graph_point(t) + depth * dom.graph_normal(t)
           for t in (mid - 0.15 * span, mid + 0.15 * span)]
    return ([float(v) for v in pts[0]], [float(v) for v in pts[1]])


def _verify_jacobian(cfg: dict, spec: sc.DomainSpec, args):
    dom = handlers.build_domain(spec)
    n = args.n or 300
    C = cfg.get("experiment.c")
    sweeps = [("normal", "lower", sc.JacobianSweepRequest(
        domain=spec, map="normal", n_points=n, C=C, seed=args.seed))]
    if isinstance(dom, GraphDomain) and dom.dim == 2:
        anchor_a, anchor_b = _sigma_anchors(dom)
        sweeps.append(("sigma", "sandwich", sc.JacobianSweepRequest(
            domain=spec, map="sigma", n_points=n, C=C, seed=args.seed,
            anchor_a=anchor_a, anchor_b=anchor_b)))
    report = new_report("jacobian-suite", cfg.get("output.timestamp"),
                        domain=dom.describe(), n_points=str(n))
    report.columns = ("map", "bound", "n_points", "n_failed",
                      "worst_lower_slack", "worst_upper_slack", "C",
                      "status")
    all_ok = True
    for name, bound, req in sweeps:
        res = handlers.jacobian_sweep(req)
        upper = (math.nan if res.worst_upper_slack is None
                 else res.worst_upper_slack)
        report.add_row(name, bound, res.n_points, res.n_failed,
                       res.worst_lower_slack, upper, res.C_used,
                       "ok" if res.passed else "fail")
        all_ok = all_ok and res.passed
    report.metadata["passed"] = "true" if all_ok else "false"
    fmt = cfg.get("output.format", "csv")
    return report_to_text(report, fmt), all_ok


def _verify_pushforward(cfg: dict, spec: sc.DomainSpec, args):
    res = handlers.pushforward_sweep(sc.PushforwardSweepRequest(
        domain=spec, n_curves=args.n or 100, C=cfg.get("experiment.c"),
        seed=args.seed))
    report = new_report(
        "pushforward-suite", cfg.get("output.timestamp"),
        domain=handlers.build_domain(spec).describe(),
        passed="true" if res.passed else "false")
    report.columns = ("n_checks", "min_margin", "C", "status")
    report.add_row(res.n_checks, res.min_margin, res.C_used,
                   "ok" if res.passed else "fail")
    fmt = cfg.get("output.format", "csv")
    return report_to_text(report, fmt), res.passed


# The fixed verdict battery: a Dini-friendly power modulus and the two
# borderline log-power profiles either side of integrability.
_MODULUS_BATTERY = (
    ("sqrt", dict(family="power", coeff=1.0, exponent=0.5, cap=None),
     ("convergent", 2.0), ("convergent", None)),
    ("inv_log", dict(family="log_power", coeff=1.0, exponent=1.0, cap=1.0),
     ("divergent", None), (None, None)),
    ("inv_log_sq", dict(family="log_power", coeff=1.0, exponent=2.0, cap=1.0),
     ("convergent", 1.0), ("divergent", None)),
)
_DINI_VALUE_TOL = 1e-4
_OMEGA_STAR_TOL = 1e-6


def _verify_modulus(cfg: dict, args):
    report = new_report("modulus-suite", cfg.get("output.timestamp"))
    report.columns = ("family", "quantity", "value", "verdict",
                      "expected", "status")
    failures = 0

    def row(family, quantity, value, verdict, expected, ok):
        nonlocal failures
        failures += not ok
        report.add_row(family, quantity, value, verdict, expected,
                       "ok" if ok else "fail")

    for family, spec_kw, want_dini, want_log in _MODULUS_BATTERY:
        res = handlers.modulus_verdicts(sc.ModulusVerdictRequest(
            modulus=sc.ModulusSpec(**spec_kw)))
        for quantity, got, (want, want_value) in (
                ("dini", res.dini, want_dini),
                ("log_dini", res.log_dini, want_log)):
            verdict = "convergent" if got.convergent else "divergent"
            ok = want is None or verdict == want
            if want_value is not None:
                ok = ok and abs(got.value - want_value) <= _DINI_VALUE_TOL
            row(family, quantity, got.value, verdict,
                "" if want is None else want, ok)

    res = handlers.modulus_verdicts(sc.ModulusVerdictRequest(
        modulus=sc.ModulusSpec(family="power", coeff=1.0, exponent=1.0,
                               cap=1.0),
        omega_star_at=[1.0]))
    star = res.omega_star[0]
    row("capped_linear", "omega_star(1)", star, "", "2",
        abs(star - 2.0) <= _OMEGA_STAR_TOL)

    report.metadata["n_failures"] = str(failures)
    report.metadata["passed"] = "true" if failures == 0 else "false"
    fmt = cfg.get("output.format", "csv")
    return report_to_text(report, fmt), failures == 0


def _cmd_verify(args) -> int:
    cfg = _settings(args)
    if args.suite == "modulus":
        text, ok = _verify_modulus(cfg, args)
    else:
        spec = _domain_spec(cfg)
        if args.suite == "ghm":
            text, ok = _verify_ghm(cfg, spec, args)
        elif args.suite == "asymptotics":
            res = _asymptotics_response(cfg, spec)
            text, ok = res.report, res.passed
        elif args.suite == "jacobian":
            text, ok = _verify_jacobian(cfg, spec, args)
        else:
            text, ok = _verify_pushforward(cfg, spec, args)
    _deliver(text, cfg)
    _verdict(f"suite {args.suite}", ok)
    return 0 if ok else 2


def _lateral_lattice(dom, n: int) -> np.ndarray:
    if isinstance(dom, HalfSpace) and dom.dim == 2:
        return np.linspace(-0.6, 0.6, n)
    if isinstance(dom, GraphDomain) and dom.dim == 2:
        lo, hi = dom.window
        mid, half = 0.5 * (lo + hi), 0.25 * (hi - lo)
        t = np.linspace(mid - half, mid + half, n)
        for g in dom.profile.nonsmooth_params:
            near = np.abs(t - g) < 1e-3
            t[near] = g + np.where(t[near] >= g, 1e-3, -1e-3)
        return t
    raise ConfigError("flatten-check needs a 2-d graph or half-space domain")


def _cmd_flatten_check(args) -> int:
    cfg = _settings(args)
    spec = _domain_spec(cfg)
    dom = handlers.build_domain(spec)
    if not 1e-4 <= args.x0_min < args.x0_max:
        raise ConfigError("need 1e-4 <= --x0-min < --x0-max")

    sandwich = args.map == "sigma"
    if sandwich:
        if not (isinstance(dom, GraphDomain) and dom.dim == 2):
            raise ConfigError("sigma flattening needs a 2-d graph domain")
        anchor_a, anchor_b = _sigma_anchors(dom)

        def map_fn(d, xbar):
            return sigma_flatten(d, anchor_a, anchor_b, xbar)
    else:
        map_fn = normal_flatten

    C = cfg.get("experiment.c")
    if C is None:
        C = handlers._default_curvature_constant(dom)
    lattice = _lateral_lattice(dom, args.n_lateral)
    heights = np.geomspace(args.x0_min, args.x0_max, args.n_heights)

    report = new_report("flatten-check", cfg.get("output.timestamp"),
                        domain=dom.describe(), map=args.map,
                        bound="sandwich" if sandwich else "lower",
                        C=format_float(float(C)))
    report.columns = ("x0", "t", "sigma_min", "sigma_max", "lower_bound",
                      "upper_bound", "status")
    failures = 0
    for h in heights:
        for t in lattice:
            rep = jacobian_bounds(map_fn, dom, [h, t], C)
            ok = rep.lower_ok and (rep.upper_ok if sandwich else True)
            failures += not ok
            report.add_row(float(h), float(t), rep.sigma_min, rep.sigma_max,
                           rep.predicted_lower, rep.predicted_upper,
                           "ok" if ok else "fail")
    report.metadata["n_failures"] = str(failures)
    report.metadata["passed"] = "true" if failures == 0 else "false"
    _deliver(report_to_text(report, cfg.get("output.format", "csv")), cfg)
    _verdict(f"flatten-check {args.map}", failures == 0)
    return 0 if failures == 0 else 2


# ------------------------------------------------------------------ parser

def _add_domain_flags(p) -> None:
    g = p.add_argument_group("domain")
    g.add_argument("--config", metavar="PATH",
                   help="key = value settings file; flags override it")
    g.add_argument("--domain", metavar="KIND",
                   help="domain family: halfplane, halfspace, disc, ball, "
                        "paraboloid, odd_parabola, cosine_bump, ellipse, "
                        "superellipse")
    g.add_argument("--dim", type=int, help="ambient dimension (2 or 3)")
    g.add_argument("--kappa", type=float,
                   help="curvature parameter, same as --param kappa=...")
    g.add_argument("--param", action="append", metavar="NAME=VALUE",
                   help="numeric domain parameter; repeatable")
    g.add_argument("--window", metavar="LO,HI",
                   help="graph-domain parameter window (default -2,2)")


def _add_grid_flags(p) -> None:
    g = p.add_argument_group("grid")
    g.add_argument("--spacing", type=float,
                   help="grid spacing (default: eighth of the shallower "
                        "endpoint depth)")
    g.add_argument("--margin", type=float,
                   help="boundary clearance in spacings (default 4)")
    g.add_argument("--stencil", type=int,
                   help="neighbor shell radius (default 3)")


def _add_output_flags(p) -> None:
    g = p.add_argument_group("output")
    g.add_argument("--format", choices=("csv", "json"),
                   help="report format (default csv)")
    g.add_argument("--out", metavar="PATH",
                   help="report destination (default stdout)")
    g.add_argument("--timestamp", metavar="TEXT",
                   help="metadata timestamp (default: fixed epoch, keeping "
                        "identical runs byte-identical)")


def _add_ladder_flags(p) -> None:
    g = p.add_argument_group("ladder")
    g.add_argument("--zeta", metavar="PT",
                   help="boundary point (default: a canonical one per "
                        "domain, e.g. 1,0 on the disc)")
    g.add_argument("--mode", choices=_MODES,
                   help="pair placement (default tangential-pair)")
    g.add_argument("-K", "--rungs", type=int, dest="rungs",
                   help="ladder depth K, halving scale per rung (default 8)")
    g.add_argument("--t0", type=float, help="coarsest scale (default 0.25)")
    g.add_argument("--ratio", type=float,
                   help="fixed-ratio offset multiplier; in tangential mode "
                        "only its sign is used (default 1)")
    g.add_argument("--c", type=float,
                   help="comparison constant for the upper bound, or the "
                        "curvature constant in flattening suites "
                        "(default 1.2 / derived from curvature)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qhlab",
        description="Quasi-hyperbolic metric laboratory.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="COMMAND")

    p = sub.add_parser(
        "dist", help="distance between two interior points")
    _add_domain_flags(p)
    _add_grid_flags(p)
    p.add_argument("--a", required=True, metavar="PT",
                   help="first endpoint, e.g. 1,0")
    p.add_argument("--b", required=True, metavar="PT", help="second endpoint")
    p.add_argument("--no-refine", action="store_true",
                   help="skip curve-shortening refinement")
    p.set_defaults(run=_cmd_dist)

    p = sub.add_parser(
        "geodesic", help="extract the minimizing curve as a report")
    _add_domain_flags(p)
    _add_grid_flags(p)
    _add_output_flags(p)
    p.add_argument("--a", required=True, metavar="PT")
    p.add_argument("--b", required=True, metavar="PT")
    p.add_argument("--no-refine", action="store_true",
                   help="skip curve-shortening refinement")
    p.set_defaults(run=_cmd_geodesic)

    p = sub.add_parser(
        "asymptotics", help="run a boundary-approach ladder")
    _add_domain_flags(p)
    _add_output_flags(p)
    _add_ladder_flags(p)
    p.set_defaults(run=_cmd_asymptotics)

    p = sub.add_parser(
        "verify", help="run a named check suite; exit code is the verdict")
    p.add_argument("--suite", required=True, choices=_SUITES)
    _add_domain_flags(p)
    _add_grid_flags(p)
    _add_output_flags(p)
    _add_ladder_flags(p)
    p.add_argument("--depth", type=float,
                   help="collar depth for the ghm pair battery (default: "
                        "0.4 of scale; 0.05 on graph domains)")
    p.add_argument("--n", type=int,
                   help="sample count (default: 300 jacobian points, "
                        "100 pushforward curves)")
    p.add_argument("--seed", type=int, default=0,
                   help="sweep seed (default 0)")
    p.set_defaults(run=_cmd_verify)

    p = sub.add_parser(
        "flatten-check",
        help="tabulate flattening singular values on a lattice")
    _add_domain_flags(p)
    _add_output_flags(p)
    p.add_argument("--map", choices=("normal", "sigma"), default="normal",
                   help="chart to check (default normal)")
    p.add_argument("--c", type=float,
                   help="curvature constant (default: derived from the "
                        "domain)")
    p.add_argument("--x0-min", type=float, default=1e-3, dest="x0_min",
                   help="smallest height (default 1e-3)")
    p.add_argument("--x0-max", type=float, default=0.2, dest="x0_max",
                   help="largest height (default 0.2)")
    p.add_argument("--n-heights", type=int, default=8, dest="n_heights",
                   help="log-spaced height count (default 8)")
    p.add_argument("--n-lateral", type=int, default=25, dest="n_lateral",
                   help="lateral lattice size (default 25)")
    p.set_defaults(run=_cmd_flatten_check)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (QhlabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
