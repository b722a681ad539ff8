"""Preset suites: worked examples and the acceptance checklist.

Both suites are plain functions returning rows, so the CLI and the test
suite execute exactly the same computations.  Acceptance rows carry the
measured quantities so callers can re-assert tolerances explicitly.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import crystalline as cryst
from . import generators as gens
from . import interpolation as interp
from . import point_sets
from . import stability

LADDER_SIZES = (11, 21, 41)


@dataclass
class SuiteRow:
    index: int
    name: str
    passed: bool
    runtime_s: float
    runtime_limit_s: float      # 0 means no stated limit
    detail: str
    data: dict = field(default_factory=dict)


def _windows(descr, sizes=LADDER_SIZES):
    return [point_sets.centered_window(descr, s) for s in sizes]


def _row(index, name, limit, fn):
    start = time.perf_counter()
    passed, detail, data = fn()
    elapsed = time.perf_counter() - start
    if limit and elapsed >= limit:
        passed = False
        detail += f"; runtime {elapsed:.2f}s exceeded {limit:g}s"
    return SuiteRow(index=index, name=name, passed=passed, runtime_s=elapsed,
                    runtime_limit_s=limit, detail=detail, data=data)


def _collect_ladder(ladders, label, ladder_rows):
    ladders.append({"label": label,
                    "sizes": [int(r[0]) for r in ladder_rows],
                    "lambda_mins": [float(r[1]) for r in ladder_rows],
                    "lambda_maxes": [float(r[2]) for r in ladder_rows]})


def _brute_quartic_extrema(grid_points=4001, k_range=400):
    """Brute-force extrema of sum_k sinc^4(t+k) on one period."""
    t = np.linspace(0.0, 1.0, grid_points)
    k = np.arange(-k_range, k_range + 1)
    vals = np.sum(np.sinc(t[:, None] + k[None, :]) ** 4, axis=1)
    return float(vals.min()), float(vals.max())


# ---------------------------------------------------------------------------
# acceptance criteria

def _c1_periodization_sharpness(ladders):
    gen = gens.bspline(2)
    lattice = point_sets.Lattice(step=1.0)
    report = stability.l2_stability_estimate(gen, lattice, _windows(lattice))
    _collect_ladder(ladders, "quadratic-spline Z ladder", report.ladder)
    c1sq = report.c1 ** 2
    c2sq = report.c2 ** 2

    prof = stability.periodization(gen, 1.0, grid_points=4096, truncation_cells=64)
    oracle_min, oracle_max = _brute_quartic_extrema()
    ok = (abs(c1sq - 1.0 / 3.0) <= 0.05 and abs(c2sq - 1.0) <= 0.05
          and abs(prof.min_value - oracle_min) <= 1e-6
          and abs(prof.max_value - oracle_max) <= 1e-6)
    detail = (f"C1^2={c1sq:.6f} C2^2={c2sq:.6f}; profile min {prof.min_value:.9f} "
              f"vs oracle {oracle_min:.9f}, max {prof.max_value:.9f} vs {oracle_max:.9f}")
    return ok, detail, {"c1_squared": c1sq, "c2_squared": c2sq,
                        "profile_min": prof.min_value, "profile_max": prof.max_value,
                        "oracle_min": oracle_min, "oracle_max": oracle_max}


def _c2_orthonormal_baseline(ladders):
    gen = gens.sinc()
    lattice = point_sets.Lattice(step=1.0)
    windows = _windows(lattice)
    section = stability.gramian_section(gen, lattice, windows[-1])
    matrix = section.matrix()
    off = matrix - np.eye(len(matrix))
    max_off = float(np.max(np.abs(off)))
    report = stability.l2_stability_estimate(gen, lattice, windows)
    _collect_ladder(ladders, "cardinal-sine Z ladder", report.ladder)
    ok = (max_off <= 1e-9 and abs(report.c1 - 1.0) <= 1e-6
          and abs(report.c2 - 1.0) <= 1e-6)
    detail = (f"max |G - I| = {max_off:.3g}; C1={report.c1:.9f} C2={report.c2:.9f}")
    return ok, detail, {"max_off_diagonal": max_off, "c1": report.c1, "c2": report.c2}


def _c3_integer_shift_discrimination():
    smooth = stability.integer_shift_verdict(gens.gaussian(1.0), b_grid=2048,
                                             k_truncation=64, vanish_tolerance=1e-6)
    diff = gens.finite_combination(gens.sinc(), [(1.0, 0.0), (-1.0, 1.0)])
    broken = stability.integer_shift_verdict(diff, b_grid=2048, k_truncation=64,
                                             vanish_tolerance=1e-6)
    ok = (smooth.verdict == stability.STABLE
          and broken.verdict == stability.UNSTABLE
          and broken.witness_b is not None and abs(broken.witness_b) <= 1e-3)
    detail = (f"gaussian: {smooth.verdict}; difference: {broken.verdict} "
              f"witness b={broken.witness_b}")
    return ok, detail, {"gaussian_verdict": smooth.verdict,
                        "difference_verdict": broken.verdict,
                        "witness_b": broken.witness_b}


def _c4_lattice_dichotomy(ladders):
    gen = gens.sinc_power(2)
    expected = {2.0 / 3.0: stability.STABLE, 1.0: stability.STABLE,
                1.0 / 3.0: stability.UNSTABLE}
    ok = True
    parts = []
    data = {"rows": []}
    for step, want in expected.items():
        lattice = point_sets.Lattice(step=step)
        windows = _windows(lattice)
        direct = stability.l2_stability_estimate(gen, lattice, windows)
        _collect_ladder(ladders, f"squared-sinc lattice {step:.4g} ladder",
                        direct.ladder)
        scan = interp.stability_r_scan(gen, lattice, windows)
        agree = scan.pathways_consistent
        row_ok = direct.verdict == want and agree
        ok = ok and row_ok
        parts.append(f"a={step:.4g}: direct {direct.verdict}, scan {scan.overall}, "
                     f"consistent={agree}")
        data["rows"].append({"step": step, "expected": want,
                             "direct": direct.verdict, "scan": scan.overall,
                             "consistent": agree})
    return ok, "; ".join(parts), data


def _c5_gram_monotonicity(ladders):
    lattice = point_sets.Lattice(step=1.0)
    window = point_sets.centered_window(lattice, 41)
    lambda_mins = []
    for m in range(1, 9):
        spectrum = interp.SpectrumSet(((0.0, m / 8.0),))
        sec = interp.exponential_gram(lattice, spectrum, window)
        lambda_mins.append(sec.lambda_min)
    nondecreasing = all(lambda_mins[i + 1] >= lambda_mins[i] - 1e-12
                        for i in range(7))
    full = abs(lambda_mins[-1] - 1.0) <= 1e-9

    for m in (4, 8):
        spectrum = interp.SpectrumSet(((0.0, m / 8.0),))
        rows = []
        for w in _windows(lattice):
            sec = interp.exponential_gram(lattice, spectrum, w)
            rows.append((len(sec.points), sec.lambda_min, sec.lambda_max))
        _collect_ladder(ladders, f"exponential gram m={m} ladder", rows)

    ok = nondecreasing and full
    detail = ("lambda_min by m/8: " + ", ".join(f"{v:.6f}" for v in lambda_mins))
    return ok, detail, {"lambda_mins": lambda_mins}


def _c6_poisson_formula():
    ok = True
    parts = []
    data = {}
    for name, comb in (("dirac", cryst.dirac_comb(1.0)),
                       ("alternating", cryst.alternating_comb())):
        residuals = [cryst.verify_poisson(comb, cryst.GaussianTest(1.0), n).residual
                     for n in (30, 60, 120)]
        ok = ok and residuals[0] < 1e-10
        ok = ok and all(residuals[i + 1] <= residuals[i] + 1e-14 for i in range(2))
        parts.append(f"{name}: residuals {residuals[0]:.3g}/{residuals[1]:.3g}"
                     f"/{residuals[2]:.3g}")
        data[name] = residuals
    return ok, "; ".join(parts), data


def _random_comb(rng, real_coefficients=False):
    period = float(rng.uniform(0.5, 2.5))
    comps = []
    for _ in range(int(rng.integers(1, 4))):
        offset = float(rng.uniform(0.0, period))
        terms = []
        for _ in range(int(rng.integers(1, 3))):
            if real_coefficients:
                coeff = complex(float(rng.standard_normal()), 0.0)
            else:
                coeff = complex(float(rng.standard_normal()),
                                float(rng.standard_normal())) / 2.0
            terms.append((coeff, float(rng.uniform(0.0, 1.0))))
        comps.append((offset, tuple(terms)))
    return cryst.PoissonComb(period=period, components=tuple(comps))


def _c7_transform_law():
    rng = np.random.default_rng(7)
    worst_offset = 0.0
    for _ in range(20):
        comb = _random_comb(rng)
        freqs = [w for comp in comb.components for _, w in comp.terms]
        hat = cryst.comb_fourier(comb)
        h = hat.period
        for comp in hat.components:
            best = min(abs((comp.offset - w / comb.period + h / 2) % h - h / 2)
                       for w in freqs)
            worst_offset = max(worst_offset, best)
    offsets_ok = worst_offset <= 1e-10

    reflect_ok = True
    for _ in range(20):
        comb = _random_comb(rng, real_coefficients=True)
        twice = cryst.comb_fourier(cryst.comb_fourier(comb))
        reflect_ok = reflect_ok and cryst.combs_close(twice, cryst.reflect(comb), 1e-9)
    ok = offsets_ok and reflect_ok
    detail = (f"worst offset deviation {worst_offset:.3g}; "
              f"double-transform reflection {'ok' if reflect_ok else 'failed'}")
    return ok, detail, {"worst_offset_deviation": worst_offset,
                        "double_transform_ok": reflect_ok}


def _c8_trig_diagnostics():
    diag = cryst.trig_zero_set(0.0, 0.0, (-200.0, 200.0))
    rng = np.random.default_rng(8)
    worst_hits = 0
    for _ in range(100):
        alpha = float(rng.uniform(0.5, 3.0))
        beta = float(rng.uniform(0.0, alpha))
        hits = cryst.ap_intersection_diagnostic(diag.points, alpha, beta, 1e-6)
        worst_hits = max(worst_hits, hits.hit_count)
    max_unit = max(diag.per_unit_counts)
    ok = diag.separation >= 0.3 and max_unit <= 2 and worst_hits <= 3
    detail = (f"{len(diag.points)} zeros, separation {diag.separation:.6f}, "
              f"max per unit {max_unit}, worst AP hits {worst_hits}")
    return ok, detail, {"separation": diag.separation, "zeros": len(diag.points),
                        "max_per_unit": max_unit, "worst_ap_hits": worst_hits}


def _c9_norm_consistency():
    rng = np.random.default_rng(9)
    lattice = point_sets.Lattice(step=1.0)
    window = point_sets.centered_window(lattice, 21)
    worst = 0.0
    for gen, pad in ((gens.gaussian(1.0), 12.0), (gens.sinc_power(2), 25.0)):
        quad_grid = np.linspace(window[0] - pad, window[1] + pad, 24001)
        for _ in range(100):
            coeff = rng.standard_normal(21) + 1j * rng.standard_normal(21)
            pair = stability.l2_norm_consistency(gen, lattice, window, coeff,
                                                 quad_grid)
            rel = (abs(pair.gram_value - pair.quadrature_value)
                   / max(abs(pair.gram_value), 1e-300))
            worst = max(worst, rel)
    ok = worst <= 1e-5
    return ok, f"worst relative gap {worst:.3g} over 200 draws", {"worst": worst}


def _c10_interlacing(ladders):
    ok = True
    worst = 0.0
    for ladder in ladders:
        mins = ladder["lambda_mins"]
        maxes = ladder["lambda_maxes"]
        for i in range(len(mins) - 1):
            drop = mins[i + 1] - mins[i]          # must be <= 0 up to slack
            rise = maxes[i] - maxes[i + 1]        # must be <= 0 up to slack
            worst = max(worst, drop, rise)
            if drop > 1e-9 or rise > 1e-9:
                ok = False
    detail = (f"{len(ladders)} ladders checked, worst interlacing violation "
              f"{worst:.3g}")
    return ok, detail, {"ladder_count": len(ladders), "worst_violation": worst}


def acceptance_suite():
    """Run the ten acceptance checks; returns SuiteRow list."""
    ladders = []
    rows = [
        _row(1, "periodization sharpness (quadratic spline on Z)", 10.0,
             lambda: _c1_periodization_sharpness(ladders)),
        _row(2, "orthonormal baseline (cardinal sine on Z)", 5.0,
             lambda: _c2_orthonormal_baseline(ladders)),
        _row(3, "integer-shift discrimination", 5.0,
             _c3_integer_shift_discrimination),
        _row(4, "lattice step dichotomy (squared sinc)", 60.0,
             lambda: _c4_lattice_dichotomy(ladders)),
        _row(5, "exponential-gram monotonicity", 10.0,
             lambda: _c5_gram_monotonicity(ladders)),
        _row(6, "Poisson summation residuals", 1.0, _c6_poisson_formula),
        _row(7, "comb transform support law", 0.0, _c7_transform_law),
        _row(8, "trig zero-set diagnostics", 30.0, _c8_trig_diagnostics),
        _row(9, "Gram vs quadrature consistency", 30.0, _c9_norm_consistency),
    ]
    rows.append(_row(10, "eigenvalue interlacing along ladders", 0.0,
                     lambda: _c10_interlacing(ladders)))
    return rows


# ---------------------------------------------------------------------------
# worked examples

def _ex_amalgam():
    total = gens.wiener_norm(gens.sinc(), gens.FREQ_SQUARED, 32, 64).total
    return abs(total - 2.0) <= 1e-9, f"total={total:.9f}", {"total": total}


def _ex_periodization():
    prof = stability.periodization(gens.bspline(2), 1.0, 4096, 64)
    ok = abs(prof.min_value - 1.0 / 3.0) <= 1e-5 and abs(prof.max_value - 1.0) <= 1e-5
    return ok, f"min={prof.min_value:.6f} max={prof.max_value:.6f}", {
        "min": prof.min_value, "max": prof.max_value}


def _ex_dichotomy(step, want):
    gen = gens.sinc_power(2)
    lattice = point_sets.Lattice(step=step)
    report = stability.l2_stability_estimate(gen, lattice, _windows(lattice))
    return (report.verdict == want,
            f"verdict {report.verdict} (C1={report.c1:.4f}, C2={report.c2:.4f})",
            {"verdict": report.verdict, "c1": report.c1, "c2": report.c2})


def _ex_integer_shift():
    smooth = stability.integer_shift_verdict(gens.gaussian(1.0), 2048, 64, 1e-6)
    diff = gens.finite_combination(gens.sinc(), [(1.0, 0.0), (-1.0, 1.0)])
    broken = stability.integer_shift_verdict(diff, 2048, 64, 1e-6)
    ok = smooth.verdict == stability.STABLE and broken.verdict == stability.UNSTABLE
    return ok, f"gaussian {smooth.verdict}, difference {broken.verdict}", {}


def _ex_poisson():
    rep = cryst.verify_poisson(cryst.alternating_comb(), cryst.GaussianTest(1.0), 30)
    return rep.residual < 1e-10, f"theta residual {rep.residual:.3g}", {
        "residual": rep.residual}


def _ex_trig():
    diag = cryst.trig_zero_set(0.0, 0.0, (-50.0, 50.0))
    ok = diag.separation >= 0.3 and max(diag.per_unit_counts) <= 2
    return ok, f"{len(diag.points)} zeros, separation {diag.separation:.4f}", {}


def _ex_unit_gram():
    lattice = point_sets.Lattice(step=1.0)
    sec = interp.exponential_gram(lattice, interp.SpectrumSet(((0.0, 1.0),)),
                                  point_sets.centered_window(lattice, 41))
    ok = abs(sec.lambda_min - 1.0) <= 1e-9 and abs(sec.lambda_max - 1.0) <= 1e-9
    return ok, f"lambda range [{sec.lambda_min:.9f}, {sec.lambda_max:.9f}]", {}


def examples_suite():
    """Reproduce the worked desk examples; returns SuiteRow list."""
    rows = [
        _row(1, "cardinal sine squared-spectrum amalgam", 0.0, _ex_amalgam),
        _row(2, "quadratic spline periodization extrema", 0.0, _ex_periodization),
        _row(3, "squared sinc, lattice step 2/3 (stable)", 0.0,
             lambda: _ex_dichotomy(2.0 / 3.0, stability.STABLE)),
        _row(4, "squared sinc, lattice step 1 (stable)", 0.0,
             lambda: _ex_dichotomy(1.0, stability.STABLE)),
        _row(5, "squared sinc, lattice step 1/3 (unstable)", 0.0,
             lambda: _ex_dichotomy(1.0 / 3.0, stability.UNSTABLE)),
        _row(6, "integer-shift verdicts", 0.0, _ex_integer_shift),
        _row(7, "alternating comb theta identity", 0.0, _ex_poisson),
        _row(8, "trig zero-set separation", 0.0, _ex_trig),
        _row(9, "full-spectrum exponential gram identity", 0.0, _ex_unit_gram),
    ]
    return rows


SUITES = {"examples": examples_suite, "acceptance": acceptance_suite}
