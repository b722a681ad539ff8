import math

import numpy as np
import pytest

import helpers
from shiftstab import generators as gens
from shiftstab.errors import InvalidArgumentError, UnsupportedGeneratorError


def test_bspline_values_match_convolution_oracle():
    # generic points only: the oracle's indicator edges collide at x in {0, +-1}
    # for order 2, where the brute-force rule loses O(step)
    xs = np.array([-1.7, -0.8, -0.3, 0.25, 0.4, 0.55, 0.9, 1.3])
    for order in (2, 3, 4):
        want = helpers.bspline_by_convolution(order, xs)
        got = np.asarray(gens.eval_time(gens.bspline(order), xs))
        assert np.max(np.abs(got - want)) < 1e-6


def test_bspline_order_one_is_unit_indicator():
    gen = gens.bspline(1)
    assert gens.eval_time(gen, 0.0) == 1.0
    assert gens.eval_time(gen, 0.5) == 1.0      # closed convention at the edge
    assert gens.eval_time(gen, 0.7) == 0.0


def test_sinc_time_and_freq():
    gen = gens.sinc()
    xs = np.array([0.0, 0.5, 1.0, 2.5])
    want = np.sinc(xs)
    assert np.allclose(gens.eval_time(gen, xs), want, atol=1e-15)
    # the transform is the indicator of [-1/2, 1/2]
    assert gens.eval_freq(gen, 0.3) == 1.0
    assert gens.eval_freq(gen, 0.75) == 0.0


def test_scalar_in_scalar_out():
    val = gens.eval_time(gens.gaussian(1.0), 0.5)
    assert np.ndim(val) == 0
    arr = gens.eval_time(gens.gaussian(1.0), [0.5, 1.0])
    assert np.shape(arr) == (2,)


def test_supports():
    assert gens.frequency_support(gens.sinc()) == (-0.5, 0.5)
    assert gens.frequency_support(gens.sinc_power(3)) == (-1.5, 1.5)
    assert gens.time_support(gens.bspline(2)) == (-1.0, 1.0)
    assert gens.time_support(gens.gaussian(1.0)) is None


def test_finite_combination_evaluation():
    diff = gens.finite_combination(gens.sinc(), [(1.0, 0.0), (-1.0, 1.0)])
    xs = np.array([0.3, 1.7])
    want = np.sinc(xs) - np.sinc(xs - 1.0)
    assert np.allclose(gens.eval_time(diff, xs), want, atol=1e-15)
    t = 0.2
    want_hat = (1.0 - np.exp(-2j * math.pi * t)) * 1.0
    assert abs(gens.eval_freq(diff, t) - want_hat) < 1e-14


def test_amalgam_totals_closed_forms():
    # transform of sinc is an indicator: cells (-1,0) and (0,1) each sup 1
    prof = gens.wiener_norm(gens.sinc(), gens.FREQ_SQUARED, 32, 64)
    assert not prof.divergent
    assert abs(prof.total - 2.0) < 1e-9

    # gaussian, time side: sup over (k, k+1) is e^{-pi k^2} for k >= 0
    want = 2.0 * sum(math.exp(-math.pi * k * k) for k in range(0, 12))
    prof = gens.wiener_norm(gens.gaussian(1.0), gens.TIME_DOMAIN, 32, 64)
    assert abs(prof.total - want) < 1e-9

    # gaussian, squared-spectrum side: sups e^{-2 pi k^2}
    want = 2.0 * sum(math.exp(-2.0 * math.pi * k * k) for k in range(0, 12))
    prof = gens.wiener_norm(gens.gaussian(1.0), gens.FREQ_SQUARED, 32, 64)
    assert abs(prof.total - want) < 1e-9


def test_amalgam_divergence_for_slow_tails():
    # sinc decays like 1/x: per-cell sups are harmonic, not summable
    prof = gens.wiener_norm(gens.sinc(), gens.TIME_DOMAIN, 64, 64)
    assert prof.divergent
    assert prof.total == math.inf


def test_freq_squared_gate():
    gens.ensure_freq_squared_summable(gens.sinc())
    gens.ensure_freq_squared_summable(gens.bspline(2))
    xs = np.arange(-6.0, 6.0 + 1e-9, 0.05)
    bare = gens.sampled(0.05, np.exp(-math.pi * xs ** 2))
    with pytest.raises(UnsupportedGeneratorError):
        gens.ensure_freq_squared_summable(bare)
    declared = gens.sampled(0.05, np.exp(-math.pi * xs ** 2), freq_support=(-6.0, 6.0))
    gens.ensure_freq_squared_summable(declared)


def test_sampled_transform_is_periodic():
    # the quadrature transform of a sampled generator repeats with period 1/step,
    # which is why undeclared sampled spectra can never be summable
    xs = np.arange(-4.0, 4.0 + 1e-9, 0.25)
    gen = gens.sampled(0.25, 1.0 / (1.0 + xs ** 2))
    t = np.linspace(-1.7, 1.7, 23)
    a = np.asarray(gens.eval_freq(gen, t))
    b = np.asarray(gens.eval_freq(gen, t + 4.0))
    assert np.max(np.abs(a - b)) < 1e-10


def test_autocorrelation_closed_forms():
    xs = np.array([0.0, 0.3, 1.0, 1.7, 2.5])
    got = np.asarray(gens.autocorrelation(gens.sinc(), xs))
    assert np.allclose(got, np.sinc(xs), atol=1e-12)

    got = np.asarray(gens.autocorrelation(gens.gaussian(1.0), xs))
    assert np.allclose(got, helpers.gaussian_autocorr(xs), atol=1e-12)

    # triangle spline: correlation at integers gives the cubic spline values
    gen = gens.bspline(2)
    assert abs(gens.autocorrelation(gen, 0.0) - 2.0 / 3.0) < 1e-12
    assert abs(gens.autocorrelation(gen, 1.0) - 1.0 / 6.0) < 1e-12
    assert abs(gens.autocorrelation(gen, 2.0)) < 1e-12

    got = np.asarray(gens.autocorrelation(gens.sinc_power(2), xs))
    assert np.allclose(got, helpers.autocorr_squared_sinc(xs), atol=1e-9)


def test_autocorrelation_symmetry_and_zero_value():
    for gen in (gens.gaussian(0.8), gens.sinc_power(2), gens.bspline(3)):
        xs = np.array([0.4, 1.3, 2.2])
        fwd = np.asarray(gens.autocorrelation(gen, xs))
        bwd = np.asarray(gens.autocorrelation(gen, -xs))
        assert np.max(np.abs(fwd - np.conj(bwd))) < 1e-10
        # value at zero equals the squared-spectrum mass
        t = np.linspace(-8.0, 8.0, 200001)
        mass = np.trapezoid(np.abs(np.asarray(gens.eval_freq(gen, t))) ** 2, t)
        assert abs(gens.autocorrelation(gen, 0.0) - mass) < 1e-8


def test_freq_zero_set_difference_generator():
    diff = gens.finite_combination(gens.sinc(), [(1.0, 0.0), (-1.0, 1.0)])
    zs = gens.freq_zero_set(diff, (-3.4, 3.4))
    # 1 - e^{-2 pi i t} vanishes exactly on the integers inside the indicator band;
    # outside (-1/2, 1/2) the transform is identically zero
    inner = [z for z in zs.zeros if abs(z) < 0.45]
    assert len(inner) == 1 and abs(inner[0]) < 1e-9
    assert zs.interval_components
    assert not zs.locally_finite


def test_freq_zero_set_spline_integers():
    zs = gens.freq_zero_set(gens.bspline(2), (-3.4, 3.4))
    want = [-3.0, -2.0, -1.0, 1.0, 2.0, 3.0]
    assert len(zs.zeros) == len(want)
    assert np.max(np.abs(np.array(zs.zeros) - np.array(want))) < 1e-9
    assert zs.locally_finite
    assert max(zs.per_unit_counts) <= 2


def test_level_set_measure_against_grid_count():
    gen = gens.bspline(2)
    for r in (0.2, 0.5, 0.8):
        level = gens.level_set(gen, r, (-2.0, 2.0))
        t = np.linspace(-2.0, 2.0, 400001)
        frac = np.mean(np.abs(np.asarray(gens.eval_freq(gen, t))) >= r)
        assert abs(level.measure - 4.0 * frac) < 1e-3
    # monotone in the threshold
    m = [gens.level_set(gen, r, (-2.0, 2.0)).measure for r in (0.1, 0.4, 0.7)]
    assert m[0] >= m[1] >= m[2]


def test_frequency_window():
    assert gens.frequency_window(gens.sinc(), 0.5) == 0.5
    w_small = gens.frequency_window(gens.gaussian(1.0), 1e-6)
    w_large = gens.frequency_window(gens.gaussian(1.0), 1e-2)
    assert w_small > w_large > 0


def test_constructor_validation():
    with pytest.raises(InvalidArgumentError):
        gens.sinc_power(0)
    with pytest.raises(InvalidArgumentError):
        gens.bspline(0)
    with pytest.raises(InvalidArgumentError):
        gens.gaussian(-1.0)
    with pytest.raises(InvalidArgumentError):
        gens.finite_combination(gens.sinc(), [])
    with pytest.raises(InvalidArgumentError):
        gens.sampled(0.1, [])
