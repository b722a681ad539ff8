import math

import numpy as np
import pytest

import helpers
from shiftstab import point_sets as ps
from shiftstab.errors import (InvalidArgumentError, ResourceLimitError,
                              UnsupportedSetError)


def test_lattice_enumeration():
    pts = ps.enumerate_points(ps.Lattice(step=0.5, offset=0.1), (-1.0, 1.0))
    assert np.allclose(pts, [-0.9, -0.4, 0.1, 0.6], atol=1e-12)


def test_translate_law():
    for descr in (ps.Lattice(step=0.7, offset=0.2),
                  ps.UnionOfProgressions(((1.0, 0.0), (math.sqrt(2), 0.3))),
                  ps.PerturbedLattice(step=1.0, amplitude=0.2),
                  ps.TrigZeroSet(a=0.3, b=1.1)):
        # translate_set follows the weak-limit convention: points move by -x
        x = 0.37
        moved = ps.translate_set(descr, x)
        base = ps.enumerate_points(descr, (-8.0, 8.0))
        shifted = ps.enumerate_points(moved, (-8.0 - x, 8.0 - x))
        assert len(base) == len(shifted)
        assert np.max(np.abs(shifted - (base - x))) < 1e-9


def test_union_deduplicates_overlap():
    # Z union Z/2 is just Z/2
    descr = ps.UnionOfProgressions(((1.0, 0.0), (0.5, 0.0)))
    pts = ps.enumerate_points(descr, (0.0, 2.0))
    assert np.allclose(pts, [0.0, 0.5, 1.0, 1.5, 2.0], atol=1e-12)


def test_densities_exact_lattice():
    est = ps.beurling_densities(ps.Lattice(step=0.25), (20.0, 50.0), 16)
    assert est.exact
    assert est.upper == est.lower == pytest.approx(4.0, abs=1e-12)


def test_densities_exact_union():
    # overlapping commensurable pair collapses, incommensurable pair adds
    est = ps.beurling_densities(
        ps.UnionOfProgressions(((1.0, 0.0), (0.5, 0.0))), (20.0,), 8)
    assert est.exact and est.upper == pytest.approx(2.0, abs=1e-12)
    est = ps.beurling_densities(
        ps.UnionOfProgressions(((1.0, 0.0), (math.sqrt(2), 0.0))), (20.0,), 8)
    assert est.exact
    assert est.upper == pytest.approx(1.0 + 1.0 / math.sqrt(2), abs=1e-12)


def test_densities_ladder_matches_exact():
    # the generic ladder on an explicit unit lattice should approach 1
    pts = np.arange(-120.0, 120.0 + 0.5, 1.0)
    est = ps.beurling_densities(ps.Explicit(points=tuple(pts)), (20.0, 50.0, 100.0), 32)
    assert not est.exact
    assert abs(est.upper - 1.0) < 0.05
    assert abs(est.lower - 1.0) < 0.3   # edge windows see truncation


def test_perturbed_lattice_separation():
    descr = ps.PerturbedLattice(step=1.0, amplitude=0.2)
    pts = ps.enumerate_points(descr, (-30.0, 30.0))
    gaps = np.diff(pts)
    assert gaps.min() > 0.2
    sep = ps.separation_constant(descr, (-30.0, 30.0))
    assert abs(sep - gaps.min()) < 1e-12


def test_perturbed_lattice_amplitude_cap():
    with pytest.raises(InvalidArgumentError):
        ps.PerturbedLattice(step=1.0, amplitude=0.5)


def test_trig_zeros_match_reference():
    descr = ps.TrigZeroSet(a=0.0, b=0.0)
    got = ps.enumerate_points(descr, (-50.0, 50.0))
    want = helpers.trig_zeros_reference(0.0, 0.0, -50.0, 50.0)
    assert len(got) == len(want)
    assert np.max(np.abs(got - want)) < 1e-8
    sep = ps.separation_constant(descr, (-50.0, 50.0))
    assert abs(sep - 0.6887552975) < 1e-9


def test_trig_zero_values_vanish():
    descr = ps.TrigZeroSet(a=0.7, b=-0.4)
    pts = ps.enumerate_points(descr, (-20.0, 20.0))
    vals = np.abs(ps.trig_profile(descr, pts))
    assert np.max(vals) < 1e-9


def test_centered_window():
    descr = ps.Lattice(step=1.0)
    window = ps.centered_window(descr, 41)
    pts = ps.enumerate_points(descr, window)
    assert len(pts) == 41
    assert abs(pts[0] + pts[-1]) < 1e-12


def test_weak_limit_orbit_cases():
    descr = ps.TrigZeroSet(a=0.0, b=0.0)
    # zero scale: the orbit is a single parameter point
    orbit = ps.weak_limit_params(descr, scale=0.0, count=50)
    assert orbit.covering_radius < 1e-12

    # scale 2 pi freezes the second coordinate mod 2 pi
    orbit = ps.weak_limit_params(descr, scale=2.0 * math.pi, count=200)
    assert orbit.second_coordinate_frozen
    assert not orbit.first_coordinate_frozen

    # generic scale: covering radius shrinks as the orbit fills in
    small = ps.weak_limit_params(descr, scale=1.0, count=200)
    large = ps.weak_limit_params(descr, scale=1.0, count=2000)
    assert large.covering_radius <= small.covering_radius


def test_weak_limit_radius_against_brute_force():
    descr = ps.TrigZeroSet(a=0.0, b=0.0)
    count, factor = 300, 4
    orbit = ps.weak_limit_params(descr, scale=1.0, count=count, refine_factor=factor)

    tau = 2.0 * math.pi
    ks = np.arange(factor * count)
    long = np.stack([(math.pi * ks) % tau, (1.0 * ks) % tau], axis=1)
    short = long[:count]

    def torus_gap(p, cloud):
        d = np.abs(cloud - p)
        d = np.minimum(d, tau - d)
        return np.min(np.hypot(d[:, 0], d[:, 1]))

    want = max(torus_gap(p, short) for p in long)
    assert abs(orbit.covering_radius - want) < 1e-9


def test_weak_limit_rejects_other_sets():
    with pytest.raises(UnsupportedSetError):
        ps.weak_limit_params(ps.Lattice(step=1.0), scale=1.0, count=10)


def test_explicit_validation_and_window_cap():
    with pytest.raises(InvalidArgumentError):
        ps.Explicit(points=(0.0, 0.0))
    with pytest.raises(ResourceLimitError):
        ps.enumerate_points(ps.Lattice(step=1.0), (-1e7, 1e7))
