"""Modulus-of-continuity calculus.

Moduli here are bounded nondecreasing functions on (0, inf) from two
families: powers M*t^e and log-powers M/log(e/t)^p, each clipped at a cap.
The integrals that decide whether boundary regularity is strong enough
(the Dini integral of omega(t)/t, its log-weighted variant, and the
two-sided transform omega_star) all live on (0, 1] with a potentially
divergent endpoint at 0, so everything is computed in u = log(1/t)
coordinates where the endpoint becomes an integrable-or-not tail at
infinity.

Divergence is decided empirically: partial integrals are taken on the
cutoff ladder 1e-3 .. 1e-9, and a tail whose partials still grow faster
than 1e-2 per unit of log-cut at the deepest rung is declared divergent.
For convergent tails the returned value completes the improper integral
by extending panels geometrically until they stop contributing; the
plain truncated value is returned alongside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import UnboundedModulus
from .quadrature import gl_adaptive

# Cutoff ladder (as powers of ten) used for the divergence verdict.
_LADDER_DECADES = (3, 4, 5, 6, 7, 8, 9)
_DIVERGENCE_SLOPE = 1e-2
_LN10 = math.log(10.0)


@dataclass(frozen=True)
class ModulusOfContinuity:
    """min(raw(t), cap) with raw a power or log-power profile."""

    family: str       # "power" | "log_power"
    coeff: float      # M
    exponent: float   # e for powers, p for log-powers
    cap: float

    def __post_init__(self):
        if self.family not in ("power", "log_power"):
            raise ValueError(f"unknown modulus family {self.family!r}")
        if self.coeff < 0:
            raise ValueError("coeff must be nonnegative")
        if self.exponent <= 0:
            raise ValueError("exponent must be positive")
        if not self.cap > 0:
            raise ValueError("cap must be positive")
        if self.family == "log_power" and math.isinf(self.cap):
            raise ValueError("log-power moduli need a finite cap")

    def describe(self) -> str:
        return (f"{self.family}(coeff={self.coeff:.6g}, "
                f"exponent={self.exponent:.6g}, cap={self.cap:.6g})")

    def eval_log(self, u):
        """omega(e^{-u}), stable for arbitrarily large u."""
        u = np.asarray(u, dtype=float)
        if self.family == "power":
            arg = np.clip(-self.exponent * u, -745.0, 700.0)
            raw = self.coeff * np.exp(arg)
        else:
            # log(e/t) = 1 + u, valid for t < e; beyond that the cap rules.
            lu = 1.0 + u
            raw = np.where(lu > 0,
                           self.coeff / np.maximum(lu, 1e-300) ** self.exponent,
                           np.inf)
        return np.minimum(raw, self.cap)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0):
            raise ValueError("modulus arguments must be positive")
        return self.eval_log(-np.log(t))

    def u_breakpoints(self) -> list[float]:
        """u-values where the profile switches branch (cap crossing)."""
        pts = []
        if math.isfinite(self.cap) and self.coeff > 0:
            if self.family == "power":
                pts.append(math.log(self.coeff / self.cap) / self.exponent)
            else:
                pts.append((self.coeff / self.cap) ** (1.0 / self.exponent) - 1.0)
        if self.family == "log_power":
            pts.append(-1.0)
        return pts


def power_modulus(coeff: float, exponent: float,
                  cap: float = math.inf) -> ModulusOfContinuity:
    return ModulusOfContinuity("power", float(coeff), float(exponent), float(cap))


def log_power_modulus(coeff: float, exponent: float,
                      cap: float) -> ModulusOfContinuity:
    return ModulusOfContinuity("log_power", float(coeff), float(exponent), float(cap))


def capped_linear() -> ModulusOfContinuity:
    """min(t, 1), the Lipschitz prototype."""
    return power_modulus(1.0, 1.0, cap=1.0)


@dataclass(frozen=True)
class DiniResult:
    value: float       # completed improper integral when convergent
    truncated: float   # integral over [lower_cut, 1] only
    convergent: bool
    slope: float       # partial-integral growth per unit log-cut, deepest rung


def _split_panels(lo: float, hi: float, breakpoints) -> list[tuple[float, float]]:
    """Geometric panels of [lo, hi], split additionally at breakpoints."""
    cuts = {lo, hi}
    cuts.update(b for b in breakpoints if lo < b < hi)
    width = 1.0
    edge = lo
    while edge + width < hi:
        edge += width
        cuts.add(edge)
        width *= 2.0
    edges = sorted(cuts)
    return list(zip(edges[:-1], edges[1:]))


def _integrate_u(fn, lo: float, hi: float, breakpoints) -> float:
    if hi <= lo:
        return 0.0
    return sum(gl_adaptive(fn, a, b, rtol=1e-13, atol=1e-18)
               for a, b in _split_panels(lo, hi, breakpoints))


def _tail_profile(fn, breakpoints):
    """(partials at the ladder cutoffs, slope at the deepest rung)."""
    depths = [d * _LN10 for d in _LADDER_DECADES]
    partials = []
    total = 0.0
    prev = 0.0
    for u in depths:
        total += _integrate_u(fn, prev, u, breakpoints)
        partials.append(total)
        prev = u
    slope = (partials[-1] - partials[-2]) / (depths[-1] - depths[-2])
    return partials, slope


def _complete_tail(fn, start: float, breakpoints) -> float:
    """Integral of fn over [start, inf), assuming a convergent tail."""
    total = 0.0
    lo = start
    width = 1.0
    while lo < 1e13:
        hi = lo + width
        piece = _integrate_u(fn, lo, hi, breakpoints)
        total += piece
        if abs(piece) < 1e-15 * (1.0 + abs(total)):
            break
        lo = hi
        width *= 2.0
    return total


def _dini_result(fn, omega: ModulusOfContinuity, lower_cut: float) -> DiniResult:
    if not 0.0 < lower_cut < 1.0:
        raise ValueError("lower_cut must lie in (0, 1)")
    bps = omega.u_breakpoints()
    u_cut = -math.log(lower_cut)
    truncated = _integrate_u(fn, 0.0, u_cut, bps)
    _, slope = _tail_profile(fn, bps)
    convergent = abs(slope) <= _DIVERGENCE_SLOPE
    if convergent:
        value = _complete_tail(fn, 0.0, bps)
    else:
        value = truncated
    return DiniResult(value=value, truncated=truncated,
                      convergent=convergent, slope=slope)


def dini_integral(omega: ModulusOfContinuity,
                  lower_cut: float = 1e-9) -> DiniResult:
    """Integral of omega(t)/t over (0, 1], cut off below lower_cut.

    In u = log(1/t) coordinates this is the integral of omega(e^{-u});
    the result completes the tail to infinity when the ladder verdict is
    convergent (truncated value kept alongside).
    """
    return _dini_result(omega.eval_log, omega, lower_cut)


def log_dini_integral(omega: ModulusOfContinuity,
                      lower_cut: float = 1e-9) -> DiniResult:
    """Integral of omega(t)*log(t)/t over (0, 1]; nonpositive, often worse.

    The weight log(t) = -u strengthens the tail, so convergence here is
    strictly harder than for dini_integral.
    """
    fn = lambda u: -np.asarray(u, dtype=float) * omega.eval_log(u)
    return _dini_result(fn, omega, lower_cut)


def omega_star(omega: ModulusOfContinuity, s: float) -> float:
    """The two-sided envelope at scale s:

        omega_star(s) = integral_0^s omega(t)/t dt
                      + s * integral_s^inf omega(t)/t^2 dt.

    Needs a finite cap (the second integral scales like cap otherwise
    only after the substitution; an uncapped modulus makes it infinite).
    Returns math.inf when the first integral diverges.
    """
    if not math.isfinite(omega.cap):
        raise UnboundedModulus("omega_star needs a modulus with a finite cap")
    if s <= 0:
        raise ValueError("s must be positive")
    bps = omega.u_breakpoints()
    _, slope = _tail_profile(omega.eval_log, bps)
    if abs(slope) > _DIVERGENCE_SLOPE:
        return math.inf
    term1 = _complete_tail(omega.eval_log, -math.log(s), bps)

    # t = s*e^v turns the outer integral into one with weight e^{-v}.
    def outer(v):
        v = np.asarray(v, dtype=float)
        return omega.eval_log(-math.log(s) - v) * np.exp(-v)

    v_max = 45.0 + max(0.0, math.log(omega.cap))
    v_bps = [-math.log(s) - b for b in bps]   # where s*e^v crosses a branch
    term2 = _integrate_u(outer, 0.0, v_max, v_bps)
    return term1 + term2
