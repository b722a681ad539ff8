"""Separated point sets: construction, enumeration, and density analysis.

Five descriptor kinds are supported: lattices, finite unions of arithmetic
progressions, sinusoidally perturbed lattices, zero sets of the two-parameter
family h_{a,b}(z) = sin(pi z + a) - (1/2) sin(z + b), and explicit finite
lists.  All are immutable; operations are pure functions of the descriptor.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np
from scipy import optimize
from scipy.spatial import cKDTree

from .errors import InvalidArgumentError, ResourceLimitError, UnsupportedSetError

# Windows longer than this (or producing more points) refuse to enumerate.
MAX_WINDOW_LENGTH = 1.0e6
MAX_POINTS = 20_000_000

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Lattice:
    step: float
    offset: float = 0.0

    def __post_init__(self):
        if not (self.step > 0 and math.isfinite(self.step)):
            raise InvalidArgumentError("lattice step must be positive")


@dataclass(frozen=True)
class UnionOfProgressions:
    """Union of progressions step_i * Z + offset_i; coinciding points merge."""

    progressions: tuple  # ((step, offset), ...)

    def __post_init__(self):
        packed = tuple((float(s), float(o)) for s, o in self.progressions)
        if not packed:
            raise InvalidArgumentError("need at least one progression")
        if any(not (s > 0 and math.isfinite(s)) for s, _ in packed):
            raise InvalidArgumentError("progression steps must be positive")
        object.__setattr__(self, "progressions", packed)


@dataclass(frozen=True)
class PerturbedLattice:
    """Points n*step + offset + amplitude * sin(frequency*n + phase).

    The amplitude bound |amplitude| < step/2 keeps the points strictly
    increasing, so separation and enumeration stay well defined.
    """

    step: float
    amplitude: float
    phase: float = 0.0
    frequency: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        if not (self.step > 0 and math.isfinite(self.step)):
            raise InvalidArgumentError("step must be positive")
        if not abs(self.amplitude) < self.step / 2:
            raise InvalidArgumentError("need |amplitude| < step/2")


@dataclass(frozen=True)
class TrigZeroSet:
    """Zero set of h_{a,b}(z) = sin(pi z + a) - (1/2) sin(z + b)."""

    a: float
    b: float


@dataclass(frozen=True)
class Explicit:
    points: tuple

    def __post_init__(self):
        pts = tuple(sorted(float(p) for p in self.points))
        if any(not math.isfinite(p) for p in pts):
            raise InvalidArgumentError("points must be finite")
        if any(b - a <= 0 for a, b in zip(pts[:-1], pts[1:])):
            raise InvalidArgumentError("points must be distinct")
        object.__setattr__(self, "points", pts)


SeparatedSetDescriptor = Union[Lattice, UnionOfProgressions, PerturbedLattice,
                               TrigZeroSet, Explicit]


@dataclass(frozen=True)
class DensityEstimate:
    """Beurling density estimate: closed form when exact, else a window ladder.

    ladder rows are (radius, sup count ratio, inf count ratio) over the offset
    probes; upper/lower repeat the last row (or the closed form).
    """

    upper: float
    lower: float
    ladder: tuple
    exact: bool


@dataclass(frozen=True)
class WeakLimitOrbit:
    """Torus orbit of (a + pi*x_k, b + x_k) mod 2 pi under x_k = k*s.

    covering_radius is the fill distance of the first `count` orbit points
    inside the orbit's own closure, the latter approximated by a longer run
    of the same recurrence; it tends to zero exactly when the short orbit
    already fills everything the long orbit reaches.
    """

    a: float
    b: float
    scale: float
    count: int
    orbit: tuple
    covering_radius: float
    first_coordinate_frozen: bool
    second_coordinate_frozen: bool


def trig_profile(descr: TrigZeroSet, z):
    """Evaluate h_{a,b} at z (scalar or array)."""
    zz = np.asarray(z, dtype=float)
    out = np.sin(math.pi * zz + descr.a) - 0.5 * np.sin(zz + descr.b)
    return float(out) if np.ndim(z) == 0 else out


def _check_window(window):
    lo, hi = float(window[0]), float(window[1])
    if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
        raise InvalidArgumentError("window must be a nonempty bounded interval")
    if hi - lo > MAX_WINDOW_LENGTH:
        raise ResourceLimitError(
            f"window length {hi - lo:g} exceeds the {MAX_WINDOW_LENGTH:g} cap")
    return lo, hi


def _progression_points(step, offset, lo, hi, slack=1e-12):
    n0 = math.ceil((lo - offset - slack) / step)
    n1 = math.floor((hi - offset + slack) / step)
    if n1 - n0 + 1 > MAX_POINTS:
        raise ResourceLimitError("window contains too many points to enumerate")
    if n1 < n0:
        return np.empty(0)
    return offset + step * np.arange(n0, n1 + 1)


def _dedupe_sorted(pts: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    if len(pts) < 2:
        return pts
    keep = np.empty(len(pts), dtype=bool)
    keep[0] = True
    keep[1:] = np.diff(pts) > tol
    return pts[keep]


def enumerate_points(descr: SeparatedSetDescriptor, window) -> np.ndarray:
    """Strictly increasing array of the set's points inside the closed window."""
    lo, hi = _check_window(window)
    if isinstance(descr, Lattice):
        return _progression_points(descr.step, descr.offset, lo, hi)
    if isinstance(descr, UnionOfProgressions):
        parts = [_progression_points(s, o, lo, hi) for s, o in descr.progressions]
        return _dedupe_sorted(np.sort(np.concatenate(parts)))
    if isinstance(descr, PerturbedLattice):
        pad = abs(descr.amplitude)
        n0 = math.ceil((lo - descr.offset - pad - 1e-12) / descr.step)
        n1 = math.floor((hi - descr.offset + pad + 1e-12) / descr.step)
        if n1 - n0 + 1 > MAX_POINTS:
            raise ResourceLimitError("window contains too many points to enumerate")
        if n1 < n0:
            return np.empty(0)
        ns = np.arange(n0, n1 + 1)
        pts = ns * descr.step + descr.offset + descr.amplitude * np.sin(
            descr.frequency * ns + descr.phase)
        return pts[(pts >= lo - 1e-12) & (pts <= hi + 1e-12)]
    if isinstance(descr, TrigZeroSet):
        return _trig_zeros(descr, lo, hi)
    if isinstance(descr, Explicit):
        pts = np.asarray(descr.points)
        return pts[(pts >= lo - 1e-12) & (pts <= hi + 1e-12)]
    raise InvalidArgumentError(f"unknown set descriptor {type(descr).__name__}")


def _trig_zeros(descr: TrigZeroSet, lo: float, hi: float) -> np.ndarray:
    # pad so a zero sitting exactly on the boundary is bracketed
    grid = np.arange(lo - 0.02, hi + 0.02 + 1e-9, 0.01)
    vals = trig_profile(descr, grid)
    zeros = []
    exact_hits = np.nonzero(vals == 0.0)[0]
    for idx in exact_hits:
        zeros.append(float(grid[idx]))
    sign = np.sign(vals)
    crossings = np.nonzero((sign[:-1] * sign[1:]) < 0)[0]
    for idx in crossings:
        root = optimize.brentq(lambda z: trig_profile(descr, z),
                               grid[idx], grid[idx + 1], xtol=1e-12)
        zeros.append(float(root))
    zeros = sorted(z for z in zeros if lo - 1e-12 <= z <= hi + 1e-12)
    return _dedupe_sorted(np.asarray(zeros), tol=1e-9)


def centered_window(descr: SeparatedSetDescriptor, count: int,
                    margin_fraction: float = 0.25):
    """Window around 0 containing exactly `count` points of the set.

    The chosen points are the `count` nearest to 0; the window edges sit a
    fraction of the local gap beyond the extreme points, so nested counts
    give strictly nested windows.
    """
    if count < 1:
        raise InvalidArgumentError("count must be >= 1")
    span = 2.0
    while True:
        pts = enumerate_points(descr, (-span, span))
        if len(pts) >= count + 2 or span > MAX_WINDOW_LENGTH / 2:
            break
        span *= 2.0
    if len(pts) < count:
        raise InvalidArgumentError(f"set has fewer than {count} reachable points")
    order = np.argsort(np.abs(pts), kind="stable")
    chosen = np.sort(pts[order[:count]])
    gaps = np.diff(chosen)
    margin = margin_fraction * (float(gaps.min()) if len(gaps) else 1.0)
    return (float(chosen[0]) - margin, float(chosen[-1]) + margin)


def separation_constant(descr: SeparatedSetDescriptor, window) -> float:
    """Minimum consecutive gap inside the window (nan when < 2 points)."""
    pts = enumerate_points(descr, window)
    if len(pts) < 2:
        return math.nan
    return float(np.min(np.diff(pts)))


# ---------------------------------------------------------------------------
# densities

def _commensurable_classes(steps):
    """Group progression indices whose step ratios are rational (denominator
    up to 10^4, matched to 1e-9 relative error)."""
    n = len(steps)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    ratios = {}
    for i in range(n):
        for j in range(i + 1, n):
            r = steps[i] / steps[j]
            frac = Fraction(r).limit_denominator(10_000)
            if frac > 0 and abs(r - float(frac)) <= 1e-9 * r:
                parent[find(i)] = find(j)
                ratios[(i, j)] = frac
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _class_density(progressions) -> float:
    """Exact density of commensurable progressions by counting one period."""
    steps = [s for s, _ in progressions]
    base = steps[0]
    mult = [Fraction(s / base).limit_denominator(10_000) for s in steps]
    lcm_num = 1
    for f in mult:
        lcm_num = lcm_num * f.numerator // math.gcd(lcm_num, f.numerator)
    period = base * lcm_num
    pts = []
    for (s, o) in progressions:
        count = round(period / s)
        start = o % s
        pts.extend(start + s * k for k in range(count))
    pts = _dedupe_sorted(np.sort(np.asarray(pts)))
    # a point that wrapped to within tolerance of the period duplicates 0
    if len(pts) > 1 and period - pts[-1] + pts[0] <= 1e-12:
        pts = pts[:-1]
    return len(pts) / period


def beurling_densities(descr: SeparatedSetDescriptor, radii, offset_probes: int) -> DensityEstimate:
    """Upper/lower Beurling density estimates.

    Lattices and unions of progressions get exact closed forms (per-period
    counting within each commensurable class).  Other kinds get a ladder of
    finite-radius count ratios: for each radius, windows at `offset_probes`
    uniformly spread positions, reporting the sup and inf of count/radius.
    """
    radii = [float(r) for r in radii]
    if not radii or any(r <= 0 for r in radii) or sorted(radii) != radii:
        raise InvalidArgumentError("radii must be a positive increasing ladder")
    if offset_probes < 2:
        raise InvalidArgumentError("need at least 2 offset probes")

    if isinstance(descr, Lattice):
        d = 1.0 / descr.step
        ladder = tuple((r, d, d) for r in radii)
        return DensityEstimate(upper=d, lower=d, ladder=ladder, exact=True)
    if isinstance(descr, UnionOfProgressions):
        progs = descr.progressions
        d = 0.0
        for cls in _commensurable_classes([s for s, _ in progs]):
            d += _class_density([progs[i] for i in cls])
        ladder = tuple((r, d, d) for r in radii)
        return DensityEstimate(upper=d, lower=d, ladder=ladder, exact=True)

    rmax = radii[-1]
    span = 1.5 * rmax
    pts = enumerate_points(descr, (-span - rmax, span + rmax))
    ladder = []
    for r in radii:
        lefts = np.linspace(-span, span - r, offset_probes)
        counts = np.searchsorted(pts, lefts + r, side="right") - np.searchsorted(
            pts, lefts, side="left")
        ladder.append((r, float(counts.max() / r), float(counts.min() / r)))
    upper, lower = ladder[-1][1], ladder[-1][2]
    return DensityEstimate(upper=upper, lower=lower, ladder=tuple(ladder), exact=False)


# ---------------------------------------------------------------------------
# translations and weak limits

def translate_set(descr: SeparatedSetDescriptor, x: float) -> SeparatedSetDescriptor:
    """Descriptor for the translated set (all points shifted by -x)."""
    x = float(x)
    if not math.isfinite(x):
        raise InvalidArgumentError("translation must be finite")
    if isinstance(descr, Lattice):
        return Lattice(step=descr.step, offset=descr.offset - x)
    if isinstance(descr, UnionOfProgressions):
        return UnionOfProgressions(tuple((s, o - x) for s, o in descr.progressions))
    if isinstance(descr, PerturbedLattice):
        return PerturbedLattice(step=descr.step, amplitude=descr.amplitude,
                                phase=descr.phase, frequency=descr.frequency,
                                offset=descr.offset - x)
    if isinstance(descr, TrigZeroSet):
        return TrigZeroSet(a=(descr.a + math.pi * x) % _TWO_PI,
                           b=(descr.b + x) % _TWO_PI)
    if isinstance(descr, Explicit):
        return Explicit(tuple(p - x for p in descr.points))
    raise InvalidArgumentError(f"unknown set descriptor {type(descr).__name__}")


def _torus_fill_distance(short: np.ndarray, long: np.ndarray) -> float:
    """Max over `long` of the wrapped distance to the nearest `short` point."""
    copies = []
    for dx in (-_TWO_PI, 0.0, _TWO_PI):
        for dy in (-_TWO_PI, 0.0, _TWO_PI):
            copies.append(short + np.array([dx, dy]))
    tree = cKDTree(np.vstack(copies))
    dists, _ = tree.query(long, k=1)
    return float(dists.max())


def weak_limit_params(descr: TrigZeroSet, scale: float, count: int,
                      refine_factor: int = 4) -> WeakLimitOrbit:
    """Orbit of the translation parameters under x_k = k * scale.

    Translating the zero set by x moves its parameters to (a + pi x, b + x)
    mod 2 pi, so the arithmetic sequence x_k = k*scale traces an orbit on the
    parameter torus.  The covering radius measures how densely the first
    `count` orbit points fill the orbit closure (the closure is approximated
    by running the recurrence refine_factor times longer).
    """
    if not isinstance(descr, TrigZeroSet):
        raise UnsupportedSetError("weak-limit parameters only apply to trig zero sets")
    if count < 1:
        raise InvalidArgumentError("count must be >= 1")
    if refine_factor < 1:
        raise InvalidArgumentError("refine_factor must be >= 1")
    ks = np.arange(refine_factor * count, dtype=float)
    xs = ks * float(scale)
    aa = np.mod(descr.a + math.pi * xs, _TWO_PI)
    bb = np.mod(descr.b + xs, _TWO_PI)
    long = np.column_stack([aa, bb])
    short = long[:count]
    radius = _torus_fill_distance(short, long)

    def frozen(col):
        wrapped = np.exp(1j * col)
        return bool(np.max(np.abs(wrapped - wrapped[0])) < 1e-9)

    orbit = tuple((float(p), float(q)) for p, q in short)
    return WeakLimitOrbit(a=descr.a, b=descr.b, scale=float(scale), count=count,
                          orbit=orbit, covering_radius=radius,
                          first_coordinate_frozen=frozen(aa[:count]),
                          second_coordinate_frozen=frozen(bb[:count]))
