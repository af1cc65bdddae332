"""Ladder generation, bound suites, and constant estimation."""

import math

import numpy as np
import pytest

from qhlab.errors import ConstantOutOfRange
from qhlab.experiments import (SequenceSpec, collar_pairs, correction_integral,
                               decay_exponent, estimate_best_constant,
                               run_asymptotics, run_bound_suite,
                               transfer_constant_fit)
from qhlab.geom.domains import make_domain
from qhlab.geom.modulus import capped_linear
from qhlab.solver.curve import Curve

LOG2 = math.log(2.0)


def test_sequence_spec_validation(halfplane):
    with pytest.raises(ValueError):
        SequenceSpec(halfplane, [0.0, 0.0], "diagonal-pair")
    with pytest.raises(ValueError):
        SequenceSpec(halfplane, [0.0, 0.0], "normal-pair", rungs=0)
    with pytest.raises(ValueError):
        SequenceSpec(halfplane, [0.0, 0.0], "normal-pair", rungs=13)
    with pytest.raises(ValueError):
        SequenceSpec(halfplane, [0.0, 0.0], "normal-pair", t0=0.0)
    spec = SequenceSpec(halfplane, [0.0, 0.0], "normal-pair", t0=0.4)
    assert spec.depth(3) == pytest.approx(0.05)


def test_pair_modes_halfplane(halfplane):
    zeta = [0.0, 0.0]
    a, b = SequenceSpec(halfplane, zeta, "normal-pair", t0=0.25).pair(0)
    assert np.allclose(a, [0.25, 0.0])
    assert np.allclose(b, [0.5, 0.0])

    a, b = SequenceSpec(halfplane, zeta, "tangential-pair", t0=0.25).pair(0)
    assert np.allclose(a, [0.25, 0.0])
    assert np.allclose(b, [0.25, 0.5])  # arc offset sqrt(t)

    a, b = SequenceSpec(halfplane, zeta, "tangential-pair", t0=0.25,
                        ratio=-2.0).pair(0)
    assert np.allclose(b, [0.25, -0.5])  # only the sign of ratio matters

    a, b = SequenceSpec(halfplane, zeta, "fixed-ratio", t0=0.25,
                        ratio=3.0).pair(0)
    assert np.allclose(b, [0.25, 0.75])


def test_pair_fixed_ratio_walks_the_arc():
    dom = make_domain("odd_parabola")
    zeta = dom.graph_point(0.0)
    spec = SequenceSpec(dom, zeta, "fixed-ratio", t0=0.1, ratio=-6.0)
    a, b = spec.pair(0)
    # the foot sits 0.6 of arc length into the concave branch
    foot = dom.contact(b).foot
    assert foot[1] < 0.0
    assert dom.arc_length(0.0, float(foot[1])) == pytest.approx(-0.6, abs=1e-6)
    assert dom.contact(b).distance == pytest.approx(0.1, abs=1e-8)


def test_run_asymptotics_halfplane_is_exact(halfplane):
    spec = SequenceSpec(halfplane, [0.0, 0.0], "normal-pair",
                        t0=0.25, rungs=3)
    rep = run_asymptotics(spec)
    assert rep.column("status") == ["ok"] * 4
    for s, diff in zip(rep.column("s"), rep.column("diff")):
        assert s == pytest.approx(LOG2, abs=1e-12)
        assert abs(diff) <= 1e-3
    assert rep.metadata["passed"] == "true"
    assert float(rep.metadata["diff_trend"]) <= 1e-3


def test_run_asymptotics_disc_normal_pairs(disc):
    spec = SequenceSpec(disc, [1.0, 0.0], "normal-pair", t0=0.25, rungs=2)
    rep = run_asymptotics(spec)
    for row_s, row_h, status in zip(rep.column("s"), rep.column("h"),
                                    rep.column("status")):
        assert status == "ok"
        assert row_s == pytest.approx(LOG2, abs=1e-12)
        assert row_h == pytest.approx(LOG2, rel=0.01)
    assert rep.metadata["passed"] == "true"


def test_run_asymptotics_skips_unreachable_rungs():
    # narrow window: the sqrt(t) arc walk exits it on shallow rungs
    dom = make_domain("paraboloid", window=(-0.3, 0.3))
    spec = SequenceSpec(dom, dom.graph_point(0.0), "tangential-pair",
                        t0=0.25, rungs=2)
    rep = run_asymptotics(spec)
    statuses = rep.column("status")
    assert statuses[0] == "skipped"
    assert statuses[-1] == "ok"
    assert math.isnan(rep.rows[0][rep.columns.index("h")])
    # trends still come from the rungs that did converge
    assert math.isfinite(float(rep.metadata["diff_trend"]))


def test_run_bound_suite_halfplane(halfplane):
    pairs = [([0.25, 0.0], [0.5, 0.0]),
             ([1.0, 0.0], [1.0, 3.0]),
             ([0.5, -1.0], [2.0, 1.0])]
    rep = run_bound_suite(halfplane, pairs, c_values=[1.01, 2.0])
    assert rep.metadata["ghm_violations"] == "0"
    assert rep.column("status") == ["ok"] * 3
    # both constants hold everywhere, so t_star reaches the deepest pair
    assert float(rep.metadata["t_star(1.01)"]) == pytest.approx(2.0)
    assert float(rep.metadata["t_star(2)"]) == pytest.approx(2.0)
    # lower bound never exceeds the solved value beyond its error bar
    for ghm, h, err in zip(rep.column("ghm"), rep.column("h"),
                           rep.column("error_estimate")):
        assert ghm <= h + err


def test_run_bound_suite_disc_interior(disc):
    pairs = [([0.5, 0.0], [-0.5, 0.0]),
             ([0.0, 0.3], [0.6, 0.0]),
             ([0.2, 0.2], [-0.1, -0.5])]
    rep = run_bound_suite(disc, pairs, c_values=[1.2])
    assert rep.metadata["ghm_violations"] == "0"
    assert "skipped" not in rep.column("status")


def test_collar_pairs_layout(disc):
    pairs = collar_pairs(disc, [1.0, 0.0], depth=0.2)
    assert len(pairs) == 9
    # first three: normal pairs at t = 0.1, 0.05, 0.025
    for (a, b), t in zip(pairs[:3], (0.1, 0.05, 0.025)):
        assert np.allclose(a, [1.0 - t, 0.0], atol=1e-12)
        assert np.allclose(b, [1.0 - 2.0 * t, 0.0], atol=1e-12)
    for a, b in pairs:
        assert disc.contains(a) and disc.contains(b)


def test_estimate_best_constant_halfplane(halfplane):
    c = estimate_best_constant(halfplane, [0.0, 0.0], depth=1.0)
    assert 1.0 < c <= 1.01


def test_estimate_best_constant_out_of_range(halfplane):
    with pytest.raises(ConstantOutOfRange):
        # collar so thin every rung overflows the node budget
        estimate_best_constant(halfplane, [0.0, 0.0], depth=1e-9)


def test_correction_integral_decay(halfplane):
    omega = capped_linear()
    scales = [0.1, 0.05, 0.025, 0.0125]
    vals = []
    for t in scales:
        seg = Curve([[t, 0.0], [t, t]])
        vals.append(correction_integral(halfplane, seg, omega))
    # the integrand is omega_star(t)/t = 2 + log(1/t) on a length-t segment
    for t, v in zip(scales, vals):
        assert v == pytest.approx(t * (2.0 + math.log(1.0 / t)), rel=1e-12)
    slope = decay_exponent(scales, vals)
    assert 0.8 <= slope < 1.0  # length * log(1/length): just under linear


def test_decay_exponent_validation():
    with pytest.raises(ValueError):
        decay_exponent([0.1], [0.2])
    with pytest.raises(ValueError):
        decay_exponent([0.1, 0.2], [-1.0, -2.0])
    assert decay_exponent([1.0, 2.0, 4.0], [2.0, 4.0, 8.0]) == \
        pytest.approx(1.0, abs=1e-12)


def test_transfer_constant_fit_halfplane(halfplane):
    # identity chart: model and domain distances agree to solver noise
    bars = [([0.5, 0.0], [1.0, 0.0]), ([0.5, 0.0], [0.5, 0.5])]
    c_prime, rep = transfer_constant_fit(halfplane, bars)
    assert c_prime <= 0.02
    assert rep.column("status") == ["ok"] * 2
    assert float(rep.metadata["c_prime"]) == pytest.approx(c_prime)


def test_transfer_constant_fit_paraboloid_bounded(paraboloid):
    bars = [([0.2, 0.0], [0.4, 0.0]), ([0.2, -0.3], [0.2, 0.3])]
    c_prime, rep = transfer_constant_fit(paraboloid, bars)
    assert "skipped" not in rep.column("status")
    assert c_prime <= 2.0
