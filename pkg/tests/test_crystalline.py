import math

import numpy as np
import pytest

import helpers
from shiftstab import crystalline as cr
from shiftstab import generators as gens
from shiftstab.errors import InvalidArgumentError, UnsupportedGeneratorError


def test_canonicalization_wraps_offsets_with_phase():
    # moving an offset by two periods multiplies each term by e^{-4 pi i w}
    moved = cr.PoissonComb(period=1.0,
                           components=((2.25, ((1.0, 0.25),)),))
    direct = cr.PoissonComb(
        period=1.0,
        components=((0.25, ((np.exp(-2j * math.pi * 0.25 * 2.0), 0.25),)),))
    assert cr.combs_close(moved, direct, 1e-12)
    # and the measures agree pointwise
    p1, w1 = cr.comb_points(moved, 6.0)
    p2, w2 = cr.comb_points(direct, 6.0)
    assert np.allclose(p1, p2, atol=1e-12)
    assert np.allclose(w1, w2, atol=1e-12)


def test_canonicalization_merges_and_drops():
    comb = cr.PoissonComb(period=1.0, components=(
        (0.0, ((0.5, 0.25),)),
        (1.0, ((0.5, 0.25),)),            # same node family, one period over
        (0.5, ((1.0, 0.1), (-1.0, 0.1))),  # cancels to zero
    ))
    assert len(comb.components) == 1
    (c, w), = comb.components[0].terms
    assert abs(w - 0.25) < 1e-15
    assert abs(c - (0.5 + 0.5 * np.exp(-2j * math.pi * 0.25))) < 1e-14


def test_dirac_self_transform():
    d = cr.dirac_comb(1.0)
    assert cr.combs_close(cr.comb_fourier(d), d, 1e-12)
    twice = cr.comb_fourier(cr.comb_fourier(d))
    assert cr.combs_close(twice, d, 1e-12)


def test_scaled_lattice_transform():
    hat = cr.comb_fourier(cr.dirac_comb(2.0))
    assert abs(hat.period - 0.5) < 1e-15
    assert len(hat.components) == 1
    (c, w), = hat.components[0].terms
    assert abs(c - 0.5) < 1e-15 and abs(w) < 1e-15


def test_transform_linearity_in_coefficients():
    base = cr.PoissonComb(period=1.5, components=((0.3, ((0.8, 0.2),)),))
    scaled = cr.PoissonComb(period=1.5, components=((0.3, ((2.0 * 0.8, 0.2),)),))
    hat = cr.comb_fourier(base)
    hat_scaled = cr.comb_fourier(scaled)
    doubled = cr.PoissonComb(
        period=hat.period,
        components=tuple((c.offset, tuple((2.0 * co, w) for co, w in c.terms))
                         for c in hat.components))
    assert cr.combs_close(hat_scaled, doubled, 1e-12)


def test_double_transform_reflects():
    mixed = cr.PoissonComb(period=1.0, components=(
        (0.25, ((0.7, 0.0), (-0.2, 0.5))),
        (0.0, ((1.0 + 0.3j, 0.25),)),))
    twice = cr.comb_fourier(cr.comb_fourier(mixed))
    assert cr.combs_close(twice, cr.reflect(mixed), 1e-9)


def test_theta_identity():
    rep = cr.verify_poisson(cr.alternating_comb(), cr.GaussianTest(1.0), 30)
    assert abs(rep.left_value - helpers.theta_alternating()) < 1e-14
    assert abs(rep.right_value - helpers.theta_half_shift()) < 1e-14
    assert rep.residual < 1e-10


def test_verify_poisson_truncation_monotone():
    combs = [cr.dirac_comb(1.0), cr.alternating_comb(),
             cr.PoissonComb(period=0.8, components=((0.2, ((0.5, 0.3),)),))]
    for comb in combs:
        res = [cr.verify_poisson(comb, cr.GaussianTest(1.0), n).residual
               for n in (10, 20, 40)]
        assert res[1] <= res[0] + 1e-14
        assert res[2] <= res[1] + 1e-14


def test_modulated_test_transform_pair():
    test = cr.ModulatedGaussianTest(sigma=1.3, center=0.4, modulation=0.25)
    xs = np.linspace(-30.0, 30.0, 120001)
    fx = test.time(xs)
    for t in (0.0, 0.3, -1.2):
        want = np.trapezoid(fx * np.exp(-2j * math.pi * t * xs), xs)
        assert abs(complex(test.freq(t)) - want) < 1e-9


def test_comb_points_window():
    comb = cr.PoissonComb(period=2.0, components=((0.5, ((1.0, 0.25),)),))
    pts, wts = cr.comb_points(comb, 5.0)
    assert np.allclose(pts, [-3.5, -1.5, 0.5, 2.5, 4.5], atol=1e-12)
    ns = np.array([-2, -1, 0, 1, 2])
    assert np.allclose(wts, np.exp(2j * math.pi * 0.25 * ns), atol=1e-12)


def test_transform_support_law():
    rng = np.random.default_rng(21)
    for _ in range(5):
        period = float(rng.uniform(0.5, 2.0))
        comps = tuple((float(rng.uniform(0, period)),
                       ((complex(rng.standard_normal(), rng.standard_normal()),
                         float(rng.uniform(0, 1))),))
                      for _ in range(2))
        comb = cr.PoissonComb(period=period, components=comps)
        freqs = [w for comp in comb.components for _, w in comp.terms]
        hat = cr.comb_fourier(comb)
        h = hat.period
        for comp in hat.components:
            gap = min(abs((comp.offset - w / period + h / 2) % h - h / 2)
                      for w in freqs)
            assert gap < 1e-10


def test_vanishing_telescoping_difference():
    # translates of B(x) - B(x-1) with unit weights cancel identically
    diff = gens.finite_combination(gens.bspline(2), [(1.0, 0.0), (-1.0, 1.0)])
    grid = np.linspace(-20.0, 20.0, 2001)
    res = cr.vanishing_combination_residual(diff, cr.dirac_comb(1.0), 200, grid)
    assert res.sup_residual < 1e-12
    assert res.tail_bound > 0


def test_vanishing_residual_scales_linearly():
    gen = gens.gaussian(1.0)
    grid = np.linspace(-5.0, 5.0, 401)
    one = cr.vanishing_combination_residual(gen, cr.dirac_comb(1.0), 40, grid)
    half_comb = cr.PoissonComb(period=1.0, components=((0.0, ((0.5, 0.0),)),))
    half = cr.vanishing_combination_residual(gen, half_comb, 40, grid)
    assert abs(half.sup_residual - 0.5 * one.sup_residual) < 1e-12
    assert abs(half.tail_bound - 0.5 * one.tail_bound) < 1e-12
    assert one.sup_residual > 0.9    # nowhere-vanishing spectrum: no cancellation


def test_vanishing_rejects_unsuitable_generators():
    grid = np.linspace(-5.0, 5.0, 101)
    with pytest.raises(UnsupportedGeneratorError):
        cr.vanishing_combination_residual(gens.sinc(), cr.dirac_comb(1.0),
                                          40, grid)    # not amalgam-summable
    with pytest.raises(UnsupportedGeneratorError):
        cr.vanishing_combination_residual(gens.bspline(1), cr.dirac_comb(1.0),
                                          40, grid)    # discontinuous


def test_trig_zero_diagnostics():
    diag = cr.trig_zero_set(0.0, 0.0, (-50.0, 50.0))
    assert len(diag.points) == 101
    assert abs(diag.separation - 0.6887552975) < 1e-9
    assert max(diag.per_unit_counts) <= 2


def test_ap_intersection_counts():
    # full containment: integer lattice against the integer progression
    ints = np.arange(-50.0, 51.0)
    hits = cr.ap_intersection_diagnostic(ints, 1.0, 0.0, 1e-9)
    assert hits.hit_count == 101

    # trig zeros stay off the integers except the origin
    diag = cr.trig_zero_set(0.0, 0.0, (-50.0, 50.0))
    hits = cr.ap_intersection_diagnostic(diag.points, 1.0, 0.0, 1e-6)
    assert hits.hit_count <= 2
    assert all(abs(h) < 1e-6 for h in hits.hits)

    assert cr.ap_intersection_diagnostic((), 1.0, 0.0, 0.1).hit_count == 0
    with pytest.raises(InvalidArgumentError):
        cr.ap_intersection_diagnostic(ints, 1.0, 0.0, 0.6)
