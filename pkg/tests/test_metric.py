"""Closed-form pair quantities: values, ordering, and the scalar margins."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qhlab.errors import (ConstantOutOfRange, NonpositiveDistance,
                          PointOutsideDomain)
from qhlab.metric import (PairData, asinh_scaling_margin, asinh_vs_log_margin,
                          ghm_lower_bound, ghm_value, halfspace_distance,
                          halfspace_geodesic, linear_factor_margin,
                          na_upper_bound, na_value, pair_from_points,
                          power_vs_linear_margin, s_metric, s_value)
from qhlab.solver.qh import qh_length


def test_s_value_coincident_points_is_zero():
    assert s_value(0.0, 1.0, 1.0) == 0.0


def test_s_value_vertical_pair_is_log4():
    # (1,x'),(4,x'): sep 3, depths 1 and 4; equals the 1/t integral.
    assert s_value(3.0, 1.0, 4.0) == pytest.approx(math.log(4.0), abs=1e-12)


def test_s_value_unit_square_pair():
    assert s_value(1.0, 1.0, 1.0) == pytest.approx(2.0 * math.asinh(0.5),
                                                   abs=1e-12)
    assert s_value(1.0, 1.0, 1.0) == pytest.approx(0.9624236501192069,
                                                   abs=1e-12)


def test_ghm_vertical_pair_tight():
    assert ghm_value(3.0, 1.0, 4.0) == pytest.approx(2.0 * math.log(2.0),
                                                     abs=1e-12)


def test_ghm_lateral_pair_strictly_below_s():
    g = float(ghm_value(1.0, 1.0, 1.0))
    assert g == pytest.approx(2.0 * math.log(1.5), abs=1e-12)
    assert g == pytest.approx(0.8109302162163288, abs=1e-12)
    assert g < float(s_value(1.0, 1.0, 1.0))


def test_ghm_zero_iff_coincident_equal_depths():
    assert ghm_value(0.0, 0.7, 0.7) == 0.0
    assert ghm_value(0.0, 0.7, 0.8) > 0.0


def test_na_value_example():
    v = float(na_value(1.0, 1.0, 1.0, 1.8))
    assert v == pytest.approx(2.0 * math.log(2.8), abs=1e-12)
    assert v == pytest.approx(2.0592388343623163, abs=1e-12)
    assert v >= 0.9624236501192069


def test_na_zero_separation():
    for c in (1.01, 2.0, 50.0):
        assert na_value(0.0, 0.3, 0.9, c) == 0.0


def test_na_vertical_pair_dominates_exact_value():
    # sep 3, depths 1 and 4, c=1.1: 2*log(1 + 3.3/2) = 2*log(2.65).
    v = float(na_value(3.0, 1.0, 4.0, 1.1))
    assert v == pytest.approx(2.0 * math.log(2.65), abs=1e-12)
    assert v >= math.log(4.0)


def test_na_rejects_constant_at_most_one():
    with pytest.raises(ConstantOutOfRange):
        na_value(1.0, 1.0, 1.0, 1.0)
    with pytest.raises(ConstantOutOfRange):
        na_value(1.0, 1.0, 1.0, 0.5)


def test_pair_data_validates_distances():
    with pytest.raises(NonpositiveDistance):
        PairData(a=[1, 0], b=[1, 1], d_a=0.0, d_b=1.0)
    with pytest.raises(NonpositiveDistance):
        PairData(a=[1, 0], b=[1, 1], d_a=1.0, d_b=-2.0)


def test_pair_data_checks_separation():
    with pytest.raises(ValueError):
        PairData(a=[1, 0], b=[1, 1], d_a=1.0, d_b=1.0, sep=2.0)
    pair = PairData(a=[1, 0], b=[1, 1], d_a=1.0, d_b=1.0)
    assert pair.sep == pytest.approx(1.0, abs=1e-15)


def test_pair_wrappers_match_cores():
    pair = PairData(a=[1, 0], b=[4, 0], d_a=1.0, d_b=4.0)
    assert s_metric(pair) == pytest.approx(math.log(4.0), abs=1e-12)
    assert ghm_lower_bound(pair) == pytest.approx(2 * math.log(2), abs=1e-12)
    assert na_upper_bound(pair, 1.1) == pytest.approx(2 * math.log(2.65),
                                                      abs=1e-12)


def test_pair_from_points_measures_domain(disc):
    pair = pair_from_points(disc, [0.0, 0.0], [0.5, 0.0])
    assert pair.d_a == pytest.approx(1.0, abs=1e-9)
    assert pair.d_b == pytest.approx(0.5, abs=1e-9)
    with pytest.raises(PointOutsideDomain):
        pair_from_points(disc, [0.0, 0.0], [2.0, 0.0])


def test_halfspace_distance_examples():
    assert halfspace_distance([1, 0], [1, 1]) == pytest.approx(
        0.9624236501192069, abs=1e-12)
    assert halfspace_distance([1, 5], [4, 5]) == pytest.approx(
        math.log(4.0), abs=1e-12)
    assert halfspace_distance([2, 3], [2, 3]) == 0.0
    with pytest.raises(PointOutsideDomain):
        halfspace_distance([-1, 0], [1, 0])


def test_halfspace_geodesic_vertical_is_segment():
    curve = halfspace_geodesic([1, 5], [4, 5], m=33)
    assert np.allclose(curve.points[:, 1], 5.0, atol=1e-14)
    assert curve.points[0, 0] == 1.0 and curve.points[-1, 0] == 4.0
    # heights increase monotonically
    assert np.all(np.diff(curve.points[:, 0]) > 0)


def test_halfspace_geodesic_is_orthogonal_circle():
    # (1,0) to (1,1): circle centered (0, 0.5), radius sqrt(1.25).
    curve = halfspace_geodesic([1, 0], [1, 1], m=65)
    center = np.array([0.0, 0.5])
    radii = np.linalg.norm(curve.points - center, axis=1)
    assert np.allclose(radii, math.sqrt(1.25), atol=1e-12)
    assert np.allclose(curve.points[0], [1, 0])
    assert np.allclose(curve.points[-1], [1, 1])


def test_halfspace_geodesic_length_matches_distance(halfplane):
    a, b = [1.0, 0.0], [1.0, 1.0]
    curve = halfspace_geodesic(a, b, m=512)
    exact = halfspace_distance(a, b)
    assert qh_length(halfplane, curve) == pytest.approx(exact, rel=1e-4)


def test_halfspace_geodesic_chord_overestimates(halfplane):
    a, b = [1.0, 0.0], [1.0, 1.0]
    chord = halfspace_geodesic(a, b, m=2)
    assert chord.points.shape == (2, 2)
    assert qh_length(halfplane, chord) > halfspace_distance(a, b)


def test_halfspace_geodesic_needs_two_points():
    with pytest.raises(ValueError):
        halfspace_geodesic([1, 0], [1, 1], m=1)


# Admissible triples: boundary distance is 1-Lipschitz along the segment,
# so any pair realized in some domain has |d_a - d_b| <= sep.
admissible = st.tuples(
    st.floats(min_value=1e-3, max_value=1e3),
    st.floats(min_value=1e-3, max_value=1e3),
    st.floats(min_value=0.0, max_value=1e4),
).filter(lambda t: abs(t[0] - t[1]) <= t[2])


@given(admissible)
def test_ghm_never_exceeds_s(triple):
    d_a, d_b, sep = triple
    assert float(ghm_value(sep, d_a, d_b)) <= float(
        s_value(sep, d_a, d_b)) + 1e-12


@given(admissible)
def test_s_matches_log_form(triple):
    d_a, d_b, sep = triple
    root = math.sqrt(sep * sep + 4.0 * d_a * d_b)
    log_form = 2.0 * math.log((sep + root) / (2.0 * math.sqrt(d_a * d_b)))
    assert float(s_value(sep, d_a, d_b)) == pytest.approx(log_form,
                                                          rel=1e-12,
                                                          abs=1e-12)


def test_along_normal_triple_equality():
    # Half-space points (t,0), (2t,0): sep = t, depths t and 2t.
    for t in (0.25, 1.0, 3.0):
        s = float(s_value(t, t, 2 * t))
        g = float(ghm_value(t, t, 2 * t))
        h = halfspace_distance([t, 0], [2 * t, 0])
        assert s == pytest.approx(math.log(2.0), abs=1e-12)
        assert g == pytest.approx(s, abs=1e-12)
        assert h == pytest.approx(s, abs=1e-12)


def test_margin_grids_are_strictly_positive():
    t = np.geomspace(1e-9, 1e6, 2000)
    assert asinh_vs_log_margin(t).min() > 0

    t = np.geomspace(1e-9, 1.0 - 1e-9, 2000)
    for c_prime in (1.001, 1.25, 2.0):
        assert power_vs_linear_margin(t, c_prime).min() > 0

    t = np.geomspace(1.0 + 1e-9, 1e6, 2000)
    assert linear_factor_margin(t, 1.001).min() > 0

    t, q = np.meshgrid(np.geomspace(1e-9, 1e3, 50),
                       np.geomspace(1.0001, 1e3, 50))
    assert asinh_scaling_margin(t, q).min() > 0
