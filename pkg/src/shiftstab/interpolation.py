"""Interpolation-set diagnostics for Paley-Wiener spaces over interval unions.

Two decision routes are implemented: the density comparison (upper Beurling
density against total spectrum measure) and lower bounds from finite sections
of the exponential Gram matrix.  The r-scan ties them to generator stability:
shifts of F are l^2-stable exactly when some super-level set of |Fhat| admits
the point set as an interpolation set, so scanning r trades spectral margin
against spectrum size.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import generators as gens
from .errors import InvalidArgumentError, ResourceLimitError
from .point_sets import (DensityEstimate, SeparatedSetDescriptor,
                         beurling_densities, enumerate_points)
from .stability import (GramianSection, StabilityReport, _check_nested,
                        _eigh_extremes, _ladder_verdict, l2_stability_estimate,
                        INCONCLUSIVE, MAX_SECTION, STABLE, UNSTABLE)

YES = "yes"
NO = "no"

_DENSITY_RADII = (20.0, 50.0, 100.0)
_DENSITY_PROBES = 64


@dataclass(frozen=True)
class SpectrumSet:
    """Finite union of disjoint bounded intervals; touching pieces merge."""

    intervals: tuple

    def __post_init__(self):
        raw = sorted((float(a), float(b)) for a, b in self.intervals)
        if not raw:
            raise InvalidArgumentError("spectrum needs at least one interval")
        if any(not (a < b) for a, b in raw):
            raise InvalidArgumentError("spectrum intervals must have positive length")
        merged = [raw[0]]
        for a, b in raw[1:]:
            la, lb = merged[-1]
            if a <= lb + 1e-12:
                merged[-1] = (la, max(lb, b))
            else:
                merged.append((a, b))
        object.__setattr__(self, "intervals", tuple(merged))

    @property
    def total_measure(self) -> float:
        return float(sum(b - a for a, b in self.intervals))


@dataclass(frozen=True)
class InterpolationReport:
    verdict: str            # yes / no / inconclusive
    method: str             # "density" or "gram-ladder"
    ladder: tuple           # (section size, lambda min) rows for gram-ladder
    densities: Optional[DensityEstimate]
    rationale: str


@dataclass(frozen=True)
class RScanRow:
    r: float
    level_measure: float
    verdict: str


@dataclass(frozen=True)
class RScanReport:
    rows: tuple
    overall: str            # stable / unstable / inconclusive
    direct: StabilityReport
    pathways_consistent: bool


def exponential_gram(descr: SeparatedSetDescriptor, spectrum: SpectrumSet,
                     window) -> GramianSection:
    """Gram matrix of the exponentials e^{2 pi i gamma t} in L^2 of the spectrum.

    Entry (j, k) integrates e^{2 pi i (gamma_j - gamma_k) t} over the spectrum
    intervals; the diagonal is the total measure exactly.  A positive lower
    eigenvalue bound certifies the interpolation property on the window scale.
    """
    pts = np.asarray(enumerate_points(descr, window), dtype=float)
    n = len(pts)
    if n < 2:
        raise InvalidArgumentError("window must contain at least 2 points")
    if n > MAX_SECTION:
        raise ResourceLimitError(f"section size {n} exceeds {MAX_SECTION}")
    diffs = pts[:, None] - pts[None, :]
    matrix = np.zeros((n, n), dtype=complex)
    off = np.abs(diffs) > 0
    d = diffs[off]
    acc = np.zeros(len(d), dtype=complex)
    for a, b in spectrum.intervals:
        acc += (np.exp(2j * math.pi * d * b) - np.exp(2j * math.pi * d * a)) / (2j * math.pi * d)
    matrix[off] = acc
    np.fill_diagonal(matrix, spectrum.total_measure)
    lam_min, lam_max = _eigh_extremes(matrix)
    return GramianSection(points=tuple(map(float, pts)),
                          entries=tuple(tuple(row) for row in matrix),
                          lambda_min=lam_min, lambda_max=lam_max,
                          separation=float(np.min(np.diff(pts))))


def interpolation_verdict_interval(descr: SeparatedSetDescriptor, interval,
                                   margin: float) -> InterpolationReport:
    """Density test against a single interval: compare D+ with the length.

    Yes when the upper density sits below length minus margin, no when above
    length plus margin; the verdict is only issued when the density estimate
    is exact or its ladder has stabilized (last two sup ratios within 5%).
    The boundary band of width `margin` is always inconclusive.
    """
    a, b = float(interval[0]), float(interval[1])
    if not (b > a):
        raise InvalidArgumentError("interval must have positive length")
    if not (margin > 0):
        raise InvalidArgumentError("margin must be positive")
    est = beurling_densities(descr, _DENSITY_RADII, _DENSITY_PROBES)
    length = b - a
    if est.exact:
        trusted = True
        note = "closed-form density"
    else:
        s_prev, s_last = est.ladder[-2][1], est.ladder[-1][1]
        trusted = s_prev > 0 and abs(s_last - s_prev) / s_prev < 0.05
        note = ("ladder sup ratios stabilized" if trusted
                else "ladder sup ratios still moving")
    if trusted and est.upper + margin < length:
        verdict, why = YES, f"D+ = {est.upper:.6g} < length {length:.6g} - margin"
    elif trusted and est.upper - margin > length:
        verdict, why = NO, f"D+ = {est.upper:.6g} > length {length:.6g} + margin"
    else:
        verdict, why = INCONCLUSIVE, (
            f"D+ = {est.upper:.6g} within the margin band around {length:.6g}"
            if trusted else "density estimate not trusted")
    return InterpolationReport(verdict=verdict, method="density", ladder=(),
                               densities=est, rationale=f"{why} ({note})")


def _gram_ladder(descr, spectrum, windows):
    _check_nested(windows)
    rows = []
    lam_mins = []
    for w in windows:
        sec = exponential_gram(descr, spectrum, w)
        rows.append((len(sec.points), sec.lambda_min))
        lam_mins.append(sec.lambda_min)
    return tuple(rows), lam_mins


def interpolation_lower_bound(descr: SeparatedSetDescriptor, spectrum: SpectrumSet,
                              windows) -> InterpolationReport:
    """Exponential-Gram lambda-min ladder as an interpolation certificate."""
    rows, lam_mins = _gram_ladder(descr, spectrum, windows)
    verdict, rationale = _ladder_verdict(lam_mins)
    mapped = {STABLE: YES, UNSTABLE: NO, INCONCLUSIVE: INCONCLUSIVE}[verdict]
    return InterpolationReport(verdict=mapped, method="gram-ladder", ladder=rows,
                               densities=None, rationale=rationale)


def _spectrum_peak(gen) -> float:
    sup = gens.frequency_support(gen)
    half = max(abs(sup[0]), abs(sup[1])) if sup else gens.frequency_window(gen, 1e-3) + 1.0
    t = np.linspace(-half, half, 4097)
    return float(np.max(np.abs(np.asarray(gens.eval_freq(gen, t)))))


def stability_r_scan(gen, descr: SeparatedSetDescriptor, windows, r_grid=None,
                     level_grid_step: float = 1e-3) -> RScanReport:
    """Per-r interpolation verdicts for the super-level sets of |Fhat|.

    Any single r with verdict yes certifies stability.  The unstable overall
    verdict additionally requires the direct Gramian pathway to agree, since
    a finite r grid and finite sections cannot rule the property out alone.
    """
    gens.ensure_freq_squared_summable(gen)
    peak = _spectrum_peak(gen)
    if r_grid is None:
        r_grid = np.geomspace(0.01 * peak, 0.9 * peak, 8)
    r_grid = [float(r) for r in r_grid]
    if any(r <= 0 for r in r_grid) or sorted(r_grid) != r_grid:
        raise InvalidArgumentError("r grid must be positive and increasing")

    rows = []
    any_yes = False
    all_no = True
    for r in r_grid:
        half = gens.frequency_window(gen, r) + 0.5
        level = gens.level_set(gen, r, (-half, half), grid_step=level_grid_step)
        if not level.intervals:
            rows.append(RScanRow(r=r, level_measure=0.0, verdict=NO))
            continue
        report = interpolation_lower_bound(descr, SpectrumSet(level.intervals), windows)
        rows.append(RScanRow(r=r, level_measure=level.measure, verdict=report.verdict))
        any_yes = any_yes or report.verdict == YES
        all_no = all_no and report.verdict == NO

    direct = l2_stability_estimate(gen, descr, windows)
    if any_yes:
        overall = STABLE
    elif all_no and direct.verdict == UNSTABLE:
        overall = UNSTABLE
    else:
        overall = INCONCLUSIVE
    consistent = (overall == direct.verdict
                  or overall == INCONCLUSIVE or direct.verdict == INCONCLUSIVE)
    return RScanReport(rows=tuple(rows), overall=overall, direct=direct,
                       pathways_consistent=consistent)
