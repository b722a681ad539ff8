import math

import numpy as np
import pytest

import helpers
from shiftstab import generators as gens
from shiftstab import point_sets as ps
from shiftstab import stability as st
from shiftstab.errors import (InvalidArgumentError, ResourceLimitError,
                              UnsupportedGeneratorError, UnsupportedRequestError)

Z = ps.Lattice(step=1.0)


def ladder_windows(descr, sizes=(11, 21, 41)):
    return [ps.centered_window(descr, s) for s in sizes]


def test_periodization_profile_closed_forms():
    # triangle spectrum: profile is (2 + cos 2 pi t)/3 with extrema 1/3 and 1
    prof = st.periodization(gens.bspline(2), 1.0, grid_points=4096,
                            truncation_cells=64)
    want = helpers.quartic_periodization(prof.grid)
    assert np.max(np.abs(np.asarray(prof.values) - want)) < 1e-7
    assert abs(prof.min_value - 1.0 / 3.0) < 1e-6
    assert abs(prof.max_value - 1.0) < 1e-6

    # squared sinc: profile is (1-t)^2 + t^2 with extrema 1/2 and 1
    prof = st.periodization(gens.sinc_power(2), 1.0, grid_points=4096,
                            truncation_cells=8)
    want = helpers.triangle_sq_periodization(prof.grid)
    assert np.max(np.abs(np.asarray(prof.values) - want)) < 1e-12
    assert abs(prof.min_value - 0.5) < 1e-6


def test_periodization_tail_bound_covers_refinement():
    coarse = st.periodization(gens.gaussian(1.0), 1.0, 512, 8)
    fine = st.periodization(gens.gaussian(1.0), 1.0, 512, 64)
    gap = np.max(np.abs(np.asarray(fine.values) - np.asarray(coarse.values)))
    assert gap <= coarse.tail_bound + 1e-15


def test_integer_shift_verdicts():
    assert st.integer_shift_verdict(gens.gaussian(1.0), 2048, 64,
                                    1e-6).verdict == st.STABLE
    assert st.integer_shift_verdict(gens.sinc(), 2048, 64, 1e-6).verdict == st.STABLE

    diff = gens.finite_combination(gens.sinc(), [(1.0, 0.0), (-1.0, 1.0)])
    verdict = st.integer_shift_verdict(diff, 2048, 64, 1e-6)
    assert verdict.verdict == st.UNSTABLE
    assert abs(verdict.witness_b) < 1e-9


def test_integer_shift_grid_doubling_invariance():
    diff = gens.finite_combination(gens.sinc(), [(1.0, 0.0), (-1.0, 1.0)])
    a = st.integer_shift_verdict(diff, 1024, 64, 1e-6)
    b = st.integer_shift_verdict(diff, 2048, 64, 1e-6)
    assert a.verdict == b.verdict
    assert abs(a.witness_b - b.witness_b) < 1e-6


def test_gramian_matches_manual_matrix():
    # gaussian on 21 integer points: entries in closed form, no shared code path
    window = ps.centered_window(Z, 21)
    section = st.gramian_section(gens.gaussian(1.0), Z, window)
    pts = np.asarray(section.points)
    manual = helpers.gaussian_autocorr(pts[:, None] - pts[None, :])
    lam = np.linalg.eigvalsh(manual)
    assert np.max(np.abs(section.matrix() - manual)) < 1e-12
    assert abs(section.lambda_min - lam[0]) < 1e-10
    assert abs(section.lambda_max - lam[-1]) < 1e-10


def test_sinc_gramian_is_identity():
    window = ps.centered_window(Z, 41)
    section = st.gramian_section(gens.sinc(), Z, window)
    assert np.max(np.abs(section.matrix() - np.eye(41))) < 1e-12


def test_l2_ladder_triangle_spectrum():
    report = st.l2_stability_estimate(gens.bspline(2), Z, ladder_windows(Z))
    assert report.verdict == st.STABLE
    # sharp constants 1/3 and 1 from the tridiagonal (1/6, 2/3, 1/6) sections
    assert 1.0 / 3.0 - 1e-9 <= report.c1 ** 2 <= 1.0 / 3.0 + 0.01
    assert abs(report.c2 ** 2 - 1.0) < 0.01


def test_l2_ladder_dichotomy():
    gen = gens.sinc_power(2)
    sparse = ps.Lattice(step=2.0 / 3.0)
    report = st.l2_stability_estimate(gen, sparse, ladder_windows(sparse))
    assert report.verdict == st.STABLE

    dense = ps.Lattice(step=1.0 / 3.0)
    report = st.l2_stability_estimate(gen, dense, ladder_windows(dense))
    assert report.verdict == st.UNSTABLE
    assert report.c1 == 0.0


def test_l2_ladder_requires_nested_windows():
    with pytest.raises(InvalidArgumentError):
        st.l2_stability_estimate(gens.sinc(), Z, [(-5.0, 5.0), (-3.0, 3.0)])


def test_synthesize_linearity():
    window = ps.centered_window(Z, 11)
    grid = np.linspace(-8.0, 8.0, 801)
    rng = np.random.default_rng(3)
    c1 = rng.standard_normal(11) + 1j * rng.standard_normal(11)
    c2 = rng.standard_normal(11) + 1j * rng.standard_normal(11)
    gen = gens.gaussian(1.0)
    f1 = np.asarray(st.synthesize(gen, Z, window, c1, grid))
    f2 = np.asarray(st.synthesize(gen, Z, window, c2, grid))
    both = np.asarray(st.synthesize(gen, Z, window, 2.0 * c1 - 0.5j * c2, grid))
    assert np.max(np.abs(both - (2.0 * f1 - 0.5j * f2))) < 1e-12


def test_norm_consistency_orthonormal_example():
    window = ps.centered_window(Z, 11)
    coeff = np.zeros(11)
    coeff[5] = 1.0
    coeff[6] = 1.0
    quad = np.linspace(-60.0, 60.0, 48001)
    pair = st.l2_norm_consistency(gens.sinc(), Z, window, coeff, quad)
    assert abs(pair.gram_value - 2.0) < 1e-12        # orthonormal translates
    assert abs(pair.quadrature_value - 2.0) < pair.tail_bound + 1e-6


def test_norm_consistency_tail_tolerance_enforced():
    window = ps.centered_window(Z, 11)
    coeff = np.ones(11)
    quad = np.linspace(-20.0, 20.0, 8001)
    with pytest.raises(UnsupportedRequestError):
        st.l2_norm_consistency(gens.sinc(), Z, window, coeff, quad,
                               tail_tolerance=1e-12)


def test_linf_search_bounds():
    gen = gens.sinc_power(2)
    window = ps.centered_window(Z, 13)
    found = st.linf_stability_search(gen, Z, window, budget=600, seed=1)
    assert found.bound > 0.9       # integer translates stay uniformly large

    crowded = ps.Lattice(step=0.25)
    win = ps.centered_window(crowded, 13)
    weak = st.linf_stability_search(gen, crowded, win, budget=600, seed=1)
    assert weak.bound < 0.05       # crowded translates nearly cancel
    assert abs(np.max(np.abs(np.asarray(weak.witness))) - 1.0) < 1e-12


def test_linf_search_seeded_determinism():
    gen = gens.gaussian(1.0)
    window = ps.centered_window(Z, 9)
    a = st.linf_stability_search(gen, Z, window, budget=300, seed=7)
    b = st.linf_stability_search(gen, Z, window, budget=300, seed=7)
    assert a.bound == b.bound
    assert np.array_equal(np.asarray(a.witness), np.asarray(b.witness))


def test_union_upper_check():
    check = st.progression_union_upper_check(gens.sinc_power(2), ((1.0, 0.0),))
    assert check.bounded
    assert abs(max(check.sups) - 1.0) < 1e-2

    # a sampled generator without declared spectrum support can never pass
    xs = np.arange(-1.0, 1.0 + 1e-9, 0.025)
    rough = gens.sampled(0.025, 1.0 / np.sqrt(np.maximum(np.abs(xs), 0.0125)))
    check = st.progression_union_upper_check(rough, ((1.0, 0.0),))
    assert not check.bounded
    assert max(check.sups) == math.inf


def test_gramian_section_size_cap():
    tiny = ps.Lattice(step=0.001)
    with pytest.raises(ResourceLimitError):
        st.gramian_section(gens.gaussian(1.0), tiny, (-3.0, 3.0))


def test_sampled_autocorrelation_needs_declared_support():
    xs = np.arange(-2.0, 2.0 + 1e-9, 0.1)
    bare = gens.sampled(0.1, np.exp(-np.abs(xs)))
    with pytest.raises(UnsupportedGeneratorError):
        st.gramian_section(bare, Z, (-3.0, 3.0))
