"""Operation registry: named, parameter-checked entry points for scenarios.

Each operation declares its allowed parameter keys and which scenario
sections it needs; the handler returns a JSON-able results dict that always
carries a one-line "summary" for terminal display, plus an optional CSV
payload (profile or ladder) for the [output].csv path.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import crystalline as cryst
from . import generators as gens
from . import interpolation as interp
from . import point_sets
from . import stability
from .errors import InvalidArgumentError, UnsupportedRequestError


@dataclass(frozen=True)
class OpSpec:
    params: frozenset
    needs: tuple
    handler: object


def _scale(n: int, factor: float) -> int:
    return max(1, int(round(n * factor)))


def _sizes(params, default=(11, 21, 41)):
    sizes = params.get("sizes", list(default))
    if (not isinstance(sizes, list) or not sizes
            or any(isinstance(s, bool) or not isinstance(s, int) or s < 1 for s in sizes)):
        raise InvalidArgumentError("sizes must be a list of positive integers")
    if sorted(sizes) != sizes:
        raise InvalidArgumentError("sizes must be increasing")
    return sizes


def _windows(descr, sizes, margin_fraction=0.25):
    return [point_sets.centered_window(descr, s, margin_fraction) for s in sizes]


def _spectrum(params):
    raw = params.get("spectrum")
    if (not isinstance(raw, list) or not raw
            or any(not isinstance(p, list) or len(p) != 2 for p in raw)):
        raise InvalidArgumentError("spectrum must be a list of [lo, hi] pairs")
    return interp.SpectrumSet(tuple((float(a), float(b)) for a, b in raw))


def _ladder_csv(report_ladder):
    sizes = [row[0] for row in report_ladder]
    return {"kind": "ladder", "sizes": sizes,
            "lambda_mins": [row[1] for row in report_ladder],
            "lambda_maxes": [row[2] for row in report_ladder]}


# --- generator operations ---------------------------------------------------

def _op_amalgam(sc, rng, grid_scale):
    mode = sc.params.get("mode", gens.TIME_DOMAIN)
    profile = gens.wiener_norm(sc.generator, mode,
                               cells=sc.params.get("cells", 32),
                               probes_per_cell=_scale(sc.params.get("probes_per_cell", 64),
                                                      grid_scale))
    total = profile.total
    summary = (f"amalgam[{mode}] divergent" if profile.divergent
               else f"amalgam[{mode}] total={total:.9g} tail<={profile.tail_estimate:.3g}")
    return {"summary": summary, "profile": profile, "total": total}, None


def _op_periodization(sc, rng, grid_scale):
    alpha = sc.params.get("alpha")
    if alpha is None:
        if isinstance(sc.set_descriptor, point_sets.Lattice):
            alpha = sc.set_descriptor.step
        else:
            raise InvalidArgumentError(
                "periodization needs an alpha parameter or a lattice [set]")
    prof = stability.periodization(sc.generator, float(alpha),
                                   grid_points=_scale(sc.params.get("grid_points", 4096),
                                                      grid_scale),
                                   truncation_cells=sc.params.get("truncation_cells", 64))
    summary = (f"periodization alpha={alpha:g}: min={prof.min_value:.9g} "
               f"max={prof.max_value:.9g} tail<={prof.tail_bound:.3g}")
    csv = {"kind": "profile", "grid": prof.grid, "values": prof.values}
    return {"summary": summary, "alpha": float(alpha), "min": prof.min_value,
            "max": prof.max_value, "tail_bound": prof.tail_bound}, csv


def _op_integer_shift(sc, rng, grid_scale):
    verdict = stability.integer_shift_verdict(
        sc.generator,
        b_grid=_scale(sc.params.get("b_grid", 2048), grid_scale),
        k_truncation=sc.params.get("k_truncation", 64),
        vanish_tolerance=sc.params.get("vanish_tolerance", 1e-6))
    summary = f"integer-shift verdict: {verdict.verdict}"
    if verdict.verdict == stability.UNSTABLE:
        summary += f" (witness b={verdict.witness_b:.6g})"
    return {"summary": summary, "verdict": verdict}, None


def _op_freq_zeros(sc, rng, grid_scale):
    window = sc.params.get("window", [-8.0, 8.0])
    zs = gens.freq_zero_set(sc.generator, (float(window[0]), float(window[1])),
                            grid_step=sc.params.get("grid_step", 0.005) / grid_scale)
    summary = (f"freq zeros: {len(zs.zeros)} isolated, "
               f"{len(zs.interval_components)} interval component(s), "
               f"locally_finite={zs.locally_finite}")
    return {"summary": summary, "zero_set": zs}, None


# --- stability operations ---------------------------------------------------

def _op_stability(sc, rng, grid_scale):
    p = str(sc.params.get("p", "2"))
    if p != "2":
        raise UnsupportedRequestError(
            f"stability ladder constants only implemented for p=2, got p={p}")
    windows = _windows(sc.set_descriptor, _sizes(sc.params),
                       sc.params.get("margin_fraction", 0.25))
    report = stability.l2_stability_estimate(sc.generator, sc.set_descriptor, windows)
    summary = (f"l2 stability: {report.verdict} C1={report.c1:.6g} "
               f"C2={report.c2:.6g}")
    return ({"summary": summary, "report": report},
            _ladder_csv(report.ladder))


def _op_linf_search(sc, rng, grid_scale):
    descr = sc.set_descriptor
    size = sc.params.get("size", 13)
    window = point_sets.centered_window(descr, size,
                                        sc.params.get("margin_fraction", 0.25))
    bound = stability.linf_stability_search(
        sc.generator, descr, window,
        budget=_scale(sc.params.get("budget", 2000), grid_scale),
        seed=sc.seed,
        grid_step=sc.params.get("grid_step", 0.02),
        pad=sc.params.get("pad", 4.0))
    return ({"summary": f"l-inf lower-constant upper bound: {bound.bound:.6g}",
             "bound": bound}, None)


def _op_consistency(sc, rng, grid_scale):
    count = sc.params.get("count", 21)
    draws = sc.params.get("draws", 1)
    pad = sc.params.get("pad", 20.0)
    window = point_sets.centered_window(sc.set_descriptor, count)
    quad_points = _scale(sc.params.get("quad_points", 16001), grid_scale)
    if quad_points % 2 == 0:
        quad_points += 1
    quad_grid = np.linspace(window[0] - pad, window[1] + pad, quad_points)
    pairs = []
    worst = 0.0
    for _ in range(draws):
        coeff = rng.standard_normal(count) + 1j * rng.standard_normal(count)
        pair = stability.l2_norm_consistency(sc.generator, sc.set_descriptor,
                                             window, coeff, quad_grid)
        rel = abs(pair.gram_value - pair.quadrature_value) / max(pair.gram_value, 1e-300)
        worst = max(worst, rel)
        pairs.append(pair)
    return ({"summary": f"norm consistency: worst relative gap {worst:.3g} "
                        f"over {draws} draw(s)",
             "worst_relative_gap": worst, "pairs": pairs}, None)


def _op_union_upper(sc, rng, grid_scale):
    descr = sc.set_descriptor
    if not isinstance(descr, point_sets.UnionOfProgressions):
        raise InvalidArgumentError("union_upper_check needs a union [set]")
    check = stability.progression_union_upper_check(
        sc.generator, descr.progressions,
        grid_points=_scale(sc.params.get("grid_points", 1024), grid_scale),
        truncation_cells=sc.params.get("truncation_cells", 64))
    summary = (f"union upper bound holds, sup={max(check.sups):.6g}"
               if check.bounded else "union upper bound fails (divergent)")
    return {"summary": summary, "check": check}, None


# --- point-set operations ---------------------------------------------------

def _op_densities(sc, rng, grid_scale):
    radii = sc.params.get("radii", [20.0, 50.0, 100.0])
    est = point_sets.beurling_densities(sc.set_descriptor,
                                        [float(r) for r in radii],
                                        offset_probes=sc.params.get("offset_probes", 64))
    kind = "exact" if est.exact else "ladder"
    return ({"summary": f"densities ({kind}): D+={est.upper:.9g} D-={est.lower:.9g}",
             "estimate": est}, None)


def _op_separation(sc, rng, grid_scale):
    window = sc.params.get("window", [-50.0, 50.0])
    sep = point_sets.separation_constant(sc.set_descriptor,
                                         (float(window[0]), float(window[1])))
    return {"summary": f"separation constant: {sep:.9g}", "separation": sep}, None


def _op_weak_limit(sc, rng, grid_scale):
    orbit = point_sets.weak_limit_params(
        sc.set_descriptor,
        scale=float(sc.params.get("scale", 1.0)),
        count=sc.params.get("count", 1000),
        refine_factor=sc.params.get("refine_factor", 4))
    return ({"summary": f"weak-limit orbit: covering radius {orbit.covering_radius:.6g}",
             "orbit_summary": {
                 "covering_radius": orbit.covering_radius,
                 "count": orbit.count,
                 "first_coordinate_frozen": orbit.first_coordinate_frozen,
                 "second_coordinate_frozen": orbit.second_coordinate_frozen}}, None)


# --- interpolation operations -----------------------------------------------

def _op_exponential_gram(sc, rng, grid_scale):
    spectrum = _spectrum(sc.params)
    window = point_sets.centered_window(sc.set_descriptor, sc.params.get("count", 41))
    sec = interp.exponential_gram(sc.set_descriptor, spectrum, window)
    return ({"summary": f"exponential Gram ({len(sec.points)} pts): "
                        f"lambda_min={sec.lambda_min:.9g} lambda_max={sec.lambda_max:.9g}",
             "lambda_min": sec.lambda_min, "lambda_max": sec.lambda_max,
             "size": len(sec.points)}, None)


def _op_interp_interval(sc, rng, grid_scale):
    interval = sc.params.get("interval")
    if not isinstance(interval, list) or len(interval) != 2:
        raise InvalidArgumentError("interval must be [lo, hi]")
    report = interp.interpolation_verdict_interval(
        sc.set_descriptor, (float(interval[0]), float(interval[1])),
        margin=sc.params.get("margin", 0.05))
    return ({"summary": f"interpolation (density route): {report.verdict}",
             "report": report}, None)


def _op_interp_lower(sc, rng, grid_scale):
    spectrum = _spectrum(sc.params)
    windows = _windows(sc.set_descriptor, _sizes(sc.params))
    report = interp.interpolation_lower_bound(sc.set_descriptor, spectrum, windows)
    return ({"summary": f"interpolation (gram ladder): {report.verdict}",
             "report": report}, _ladder_csv(report.ladder))


def _op_r_scan(sc, rng, grid_scale):
    windows = _windows(sc.set_descriptor, _sizes(sc.params))
    r_grid = sc.params.get("r_grid")
    report = interp.stability_r_scan(
        sc.generator, sc.set_descriptor, windows,
        r_grid=[float(r) for r in r_grid] if r_grid is not None else None,
        level_grid_step=sc.params.get("level_grid_step", 1e-3) / grid_scale)
    return ({"summary": f"r-scan: overall {report.overall}, "
                        f"direct {report.direct.verdict}, "
                        f"consistent={report.pathways_consistent}",
             "report": report}, None)


# --- crystalline operations -------------------------------------------------

def _comb_echo(comb):
    return {"period": comb.period,
            "components": [{"offset": c.offset,
                            "terms": [{"re": t[0].real, "im": t[0].imag, "freq": t[1]}
                                      for t in c.terms]}
                           for c in comb.components]}


def _op_comb_transform(sc, rng, grid_scale):
    hat = cryst.comb_fourier(sc.comb)
    return ({"summary": f"transform: period {hat.period:.9g}, "
                        f"{len(hat.components)} component(s)",
             "transform": _comb_echo(hat)}, None)


def _build_test(params):
    table = params.get("test", {"type": "gaussian", "sigma": 1.0})
    if not isinstance(table, dict) or "type" not in table:
        raise InvalidArgumentError("test must be a table with a 'type' key")
    kind = table["type"]
    if kind == "gaussian":
        return cryst.GaussianTest(sigma=float(table.get("sigma", 1.0)))
    if kind == "modulated_gaussian":
        return cryst.ModulatedGaussianTest(sigma=float(table.get("sigma", 1.0)),
                                           center=float(table.get("center", 0.0)),
                                           modulation=float(table.get("modulation", 0.0)))
    raise InvalidArgumentError(f"unknown test type {kind!r}")


def _op_poisson_check(sc, rng, grid_scale):
    report = cryst.verify_poisson(sc.comb, _build_test(sc.params),
                                  truncation=sc.params.get("truncation", 30))
    return ({"summary": f"poisson check [{report.test_id}]: residual {report.residual:.3g}",
             "report": report}, None)


def _op_vanishing_residual(sc, rng, grid_scale):
    grid = sc.params.get("grid", [-20.0, 20.0, 0.01])
    if not isinstance(grid, list) or len(grid) != 3:
        raise InvalidArgumentError("grid must be [lo, hi, step]")
    lo, hi, step = map(float, grid)
    if not (hi > lo and step > 0):
        raise InvalidArgumentError("grid needs hi > lo and positive step")
    xs = np.arange(lo, hi + step / 2, step / grid_scale)
    res = cryst.vanishing_combination_residual(sc.generator, sc.comb,
                                               truncation=sc.params.get("truncation", 200),
                                               probe_grid=xs)
    return ({"summary": f"vanishing-combination residual {res.sup_residual:.3g} "
                        f"(tail bound {res.tail_bound:.3g})",
             "residual": res}, None)


def _op_trig_zeros(sc, rng, grid_scale):
    descr = sc.set_descriptor
    if not isinstance(descr, point_sets.TrigZeroSet):
        raise InvalidArgumentError("trig_zeros needs a trig_zero [set]")
    window = sc.params.get("window", [-50.0, 50.0])
    diag = cryst.trig_zero_set(descr.a, descr.b, (float(window[0]), float(window[1])))
    return ({"summary": f"trig zeros: {len(diag.points)} points, "
                        f"separation {diag.separation:.6g}, "
                        f"max per unit {max(diag.per_unit_counts)}",
             "diagnostics": diag}, None)


def _op_ap_intersection(sc, rng, grid_scale):
    window = sc.params.get("window", [-200.0, 200.0])
    pts = point_sets.enumerate_points(sc.set_descriptor,
                                      (float(window[0]), float(window[1])))
    hits = cryst.ap_intersection_diagnostic(
        pts, alpha=float(sc.params["alpha"]) if "alpha" in sc.params else 1.0,
        beta=float(sc.params.get("beta", 0.0)),
        eps=float(sc.params.get("eps", 1e-6)))
    return ({"summary": f"AP intersection: {hits.hit_count} hit(s)",
             "hits": hits}, None)


OPERATIONS = {
    "amalgam": OpSpec(frozenset({"mode", "cells", "probes_per_cell"}),
                      ("generator",), _op_amalgam),
    "periodization": OpSpec(frozenset({"alpha", "grid_points", "truncation_cells"}),
                            ("generator",), _op_periodization),
    "integer_shift": OpSpec(frozenset({"b_grid", "k_truncation", "vanish_tolerance"}),
                            ("generator",), _op_integer_shift),
    "freq_zeros": OpSpec(frozenset({"window", "grid_step"}), ("generator",),
                         _op_freq_zeros),
    "stability": OpSpec(frozenset({"p", "sizes", "margin_fraction"}),
                        ("generator", "set_descriptor"), _op_stability),
    "linf_search": OpSpec(frozenset({"size", "budget", "grid_step", "pad",
                                     "margin_fraction"}),
                          ("generator", "set_descriptor"), _op_linf_search),
    "consistency": OpSpec(frozenset({"count", "draws", "pad", "quad_points"}),
                          ("generator", "set_descriptor"), _op_consistency),
    "union_upper_check": OpSpec(frozenset({"grid_points", "truncation_cells"}),
                                ("generator", "set_descriptor"), _op_union_upper),
    "densities": OpSpec(frozenset({"radii", "offset_probes"}), ("set_descriptor",),
                        _op_densities),
    "separation": OpSpec(frozenset({"window"}), ("set_descriptor",), _op_separation),
    "weak_limit": OpSpec(frozenset({"scale", "count", "refine_factor"}),
                         ("set_descriptor",), _op_weak_limit),
    "exponential_gram": OpSpec(frozenset({"spectrum", "count"}), ("set_descriptor",),
                               _op_exponential_gram),
    "interpolation_interval": OpSpec(frozenset({"interval", "margin"}),
                                     ("set_descriptor",), _op_interp_interval),
    "interpolation_lower_bound": OpSpec(frozenset({"spectrum", "sizes"}),
                                        ("set_descriptor",), _op_interp_lower),
    "r_scan": OpSpec(frozenset({"sizes", "r_grid", "level_grid_step"}),
                     ("generator", "set_descriptor"), _op_r_scan),
    "comb_transform": OpSpec(frozenset(), ("comb",), _op_comb_transform),
    "poisson_check": OpSpec(frozenset({"test", "truncation"}), ("comb",),
                            _op_poisson_check),
    "vanishing_residual": OpSpec(frozenset({"truncation", "grid"}),
                                 ("generator", "comb"), _op_vanishing_residual),
    "trig_zeros": OpSpec(frozenset({"window"}), ("set_descriptor",), _op_trig_zeros),
    "ap_intersection": OpSpec(frozenset({"alpha", "beta", "eps", "window"}),
                              ("set_descriptor",), _op_ap_intersection),
}


def run_operation(scenario, grid_scale: float = 1.0):
    """Dispatch a parsed scenario; returns (results dict, csv payload or None)."""
    if not (grid_scale > 0 and math.isfinite(grid_scale)):
        raise InvalidArgumentError("grid scale must be a positive finite factor")
    spec = OPERATIONS[scenario.operation]
    rng = np.random.default_rng(scenario.seed)
    return spec.handler(scenario, rng, grid_scale)
