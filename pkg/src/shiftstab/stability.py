"""Stability diagnostics for point-set shifts of a generator.

The central objects are the periodization profile sum_k |Fhat(t + alpha k)|^2,
whose extrema are the sharp two-sided l^2 constants for lattice shifts, and
finite Gramian sections, whose extremal eigenvalues estimate the constants for
general separated sets.  Finite sections can only suggest instability, so
verdicts are three-valued with the thresholds recorded in every report.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import generators as gens
from .errors import (InvalidArgumentError, ResourceLimitError,
                     UnsupportedGeneratorError, UnsupportedRequestError)
from .point_sets import SeparatedSetDescriptor, enumerate_points, separation_constant

STABLE = "stable"
UNSTABLE = "unstable"
INCONCLUSIVE = "inconclusive"

# Verdict thresholds (engineering choices, echoed in report rationales):
# an eigenvalue floor below which a section counts as degenerate, the relative
# change under the last window doubling that counts as "stabilized", and the
# overall decay factor that counts as "collapsing".
EIGEN_FLOOR = 1e-6
STABILIZE_REL = 0.05
DECAY_FACTOR = 10.0

MAX_SECTION = 4096


@dataclass(frozen=True)
class PeriodizationProfile:
    """Truncated profile sum_{|k| <= K} |Fhat(t + alpha k)|^2 on a grid of [0, alpha).

    The grid uses midpoints alpha*(j+1/2)/G so isolated jump points of |Fhat|
    (indicator edges) are never sampled.  tail_bound dominates the discarded
    |k| > K terms uniformly in t.
    """

    alpha: float
    grid: tuple
    values: tuple
    tail_bound: float
    min_value: float
    max_value: float


@dataclass(frozen=True)
class IntegerShiftVerdict:
    verdict: str
    witness_b: float
    profile_min: float
    b_grid: int
    k_truncation: int
    tolerance: float


@dataclass(frozen=True)
class GramianSection:
    """Hermitian section of translate inner products over a point window.

    entries[i][j] equals the generator autocorrelation at points[i]-points[j];
    eigenvalues come from a dense Hermitian solve checked against the residual
    contract |G v - lambda v| <= 1e-8 |G|.
    """

    points: tuple
    entries: tuple          # row-major tuple of tuples, complex
    lambda_min: float
    lambda_max: float
    separation: float

    def matrix(self) -> np.ndarray:
        return np.array(self.entries, dtype=complex)


@dataclass(frozen=True)
class StabilityReport:
    p: str                  # "2" or "inf"
    c1: float
    c2: float
    ladder: tuple           # rows (section size, lambda min, lambda max)
    verdict: str
    rationale: str


@dataclass(frozen=True)
class ConsistencyPair:
    gram_value: float
    quadrature_value: float
    tail_bound: float


@dataclass(frozen=True)
class LinfSearchBound:
    """Upper bound on the l-infinity lower stability constant.

    bound = min over searched unit-sup-norm coefficient vectors of the sup of
    the synthesized function on a dense grid; always a one-sided (upper)
    estimate of the true constant, never a claim about it.
    """

    bound: float
    witness: tuple
    evaluations: int
    grid_step: float
    pad: float


@dataclass(frozen=True)
class UnionUpperCheck:
    bounded: bool
    sups: tuple


# ---------------------------------------------------------------------------
# periodization

def periodization(gen, alpha: float, grid_points: int, truncation_cells: int) -> PeriodizationProfile:
    """Profile of sum_k |Fhat(t + alpha k)|^2 over one period [0, alpha)."""
    if not (alpha > 0 and math.isfinite(alpha)):
        raise InvalidArgumentError("alpha must be positive")
    if grid_points < 2:
        raise InvalidArgumentError("need at least 2 grid points")
    if truncation_cells < 1:
        raise InvalidArgumentError("need at least 1 truncation cell")
    gens.ensure_freq_squared_summable(gen)

    t = alpha * (np.arange(grid_points) + 0.5) / grid_points
    ks = np.arange(-truncation_cells, truncation_cells + 1)
    values = np.zeros(grid_points)
    for k in ks:
        fv = np.asarray(gens.eval_freq(gen, t + alpha * k))
        values += np.abs(fv) ** 2

    reach = alpha * truncation_cells
    per_cell = math.ceil(1.0 / alpha) + 1
    tail = per_cell * gens.freq_squared_tail(gen, reach)
    return PeriodizationProfile(alpha=float(alpha), grid=tuple(map(float, t)),
                                values=tuple(map(float, values)),
                                tail_bound=float(tail),
                                min_value=float(values.min()),
                                max_value=float(values.max()))


def progression_union_upper_check(gen, progressions, bound_tolerance=None,
                                  grid_points: int = 1024,
                                  truncation_cells: int = 64) -> UnionUpperCheck:
    """Check that every per-progression periodization sup is finite (and,
    when a tolerance is given, below it).

    The sup over a full period does not depend on the progression offset, so
    only the steps enter the computation; offsets are accepted for symmetry
    with the set descriptors.  A divergent spectral profile marks the
    corresponding progression unbounded instead of raising.
    """
    sups = []
    bounded = True
    for alpha, _beta in progressions:
        try:
            prof = periodization(gen, float(alpha), grid_points, truncation_cells)
        except UnsupportedGeneratorError:
            sups.append(math.inf)
            bounded = False
            continue
        # Cauchy test on the truncation ladder of the sup itself
        sup_full = prof.max_value
        sup_half = _truncated_sup(gen, float(alpha), grid_points, truncation_cells // 2)
        sup_quarter = _truncated_sup(gen, float(alpha), grid_points,
                                     max(1, truncation_cells // 4))
        growth1 = (sup_half - sup_quarter) / sup_quarter if sup_quarter > 0 else 0.0
        growth2 = (sup_full - sup_half) / sup_half if sup_half > 0 else 0.0
        if growth1 > 0.01 and growth2 > 0.01:
            sups.append(math.inf)
            bounded = False
            continue
        sups.append(sup_full + prof.tail_bound)
        if bound_tolerance is not None and sups[-1] > bound_tolerance:
            bounded = False
    return UnionUpperCheck(bounded=bounded, sups=tuple(sups))


def _truncated_sup(gen, alpha, grid_points, cells) -> float:
    t = alpha * (np.arange(grid_points) + 0.5) / grid_points
    total = np.zeros(grid_points)
    for k in range(-cells, cells + 1):
        total += np.abs(np.asarray(gens.eval_freq(gen, t + alpha * k))) ** 2
    return float(total.max())


# ---------------------------------------------------------------------------
# integer-shift verdict

def integer_shift_verdict(gen, b_grid: int, k_truncation: int,
                          vanish_tolerance: float) -> IntegerShiftVerdict:
    """Decide whether Fhat stays away from zero on some point of every Z + b.

    Computes m(b) = max_{|k| <= K} |Fhat(b+k)| on a b grid of [0,1): stable
    when every m(b) clears the tolerance; unstable when some m(b*) falls
    below tolerance/10 and two tenfold local grid refinements around b*
    (always retaining b* itself) stay below; inconclusive otherwise.
    """
    if b_grid < 8:
        raise InvalidArgumentError("b_grid must be >= 8")
    if k_truncation < 1:
        raise InvalidArgumentError("k_truncation must be >= 1")
    if not (vanish_tolerance > 0):
        raise InvalidArgumentError("vanish_tolerance must be positive")

    bs = np.arange(b_grid) / b_grid

    def profile(b_values):
        m = np.zeros(len(b_values))
        for k in range(-k_truncation, k_truncation + 1):
            m = np.maximum(m, np.abs(np.asarray(gens.eval_freq(gen, b_values + k))))
        return m

    m = profile(bs)
    i_min = int(np.argmin(m))
    b_star, m_star = float(bs[i_min]), float(m[i_min])
    if m_star > vanish_tolerance:
        return IntegerShiftVerdict(STABLE, b_star, m_star, b_grid, k_truncation,
                                   vanish_tolerance)
    if m_star < vanish_tolerance / 10:
        width = 1.0 / b_grid
        confirmed = True
        for _ in range(2):
            width /= 10.0
            local = np.concatenate([[b_star], b_star + np.linspace(-width, width, 21)])
            lm = profile(np.mod(local, 1.0))
            j = int(np.argmin(lm))
            if lm[j] >= vanish_tolerance / 10:
                confirmed = False
                break
            b_star, m_star = float(np.mod(local[j], 1.0)), float(lm[j])
        if confirmed:
            return IntegerShiftVerdict(UNSTABLE, b_star, m_star, b_grid,
                                       k_truncation, vanish_tolerance)
    return IntegerShiftVerdict(INCONCLUSIVE, b_star, m_star, b_grid, k_truncation,
                               vanish_tolerance)


# ---------------------------------------------------------------------------
# Gramian sections

def _eigh_extremes(matrix: np.ndarray):
    """Extremal eigenvalues of a Hermitian matrix with a residual check."""
    w, v = np.linalg.eigh(matrix)
    norm = float(max(abs(w[0]), abs(w[-1]))) or 1.0
    for idx in (0, len(w) - 1):
        residual = np.linalg.norm(matrix @ v[:, idx] - w[idx] * v[:, idx])
        if residual > 1e-8 * norm:
            raise UnsupportedRequestError(
                f"eigenvalue residual {residual:.2e} violates the 1e-8 contract")
    return float(w[0]), float(w[-1])


def gramian_section(gen, descr: SeparatedSetDescriptor, window) -> GramianSection:
    """Hermitian autocorrelation section over the points in the window."""
    pts = np.asarray(enumerate_points(descr, window), dtype=float)
    n = len(pts)
    if n < 2:
        raise InvalidArgumentError("window must contain at least 2 points")
    if n > MAX_SECTION:
        raise ResourceLimitError(f"section size {n} exceeds {MAX_SECTION}")

    diffs = pts[:, None] - pts[None, :]
    # one autocorrelation evaluation per distinct nonnegative difference
    keys = np.round(np.abs(diffs), 12)
    uniq, inverse = np.unique(keys, return_inverse=True)
    vals = np.asarray(gens.autocorrelation(gen, uniq), dtype=complex)
    matrix = vals[inverse].reshape(n, n)
    matrix = np.where(diffs >= 0, matrix, np.conj(matrix))
    matrix = 0.5 * (matrix + matrix.conj().T)   # kill roundoff asymmetry

    lam_min, lam_max = _eigh_extremes(matrix)
    sep = float(np.min(np.diff(pts)))
    return GramianSection(points=tuple(map(float, pts)),
                          entries=tuple(tuple(row) for row in matrix),
                          lambda_min=lam_min, lambda_max=lam_max, separation=sep)


def _ladder_verdict(lambda_mins) -> tuple:
    """Shared three-way verdict rule for lambda-min ladders."""
    last, prev = lambda_mins[-1], lambda_mins[-2]
    rationale = (f"thresholds: floor {EIGEN_FLOOR:g}, stabilization "
                 f"{STABILIZE_REL:.0%} at last doubling, decay {DECAY_FACTOR:g}x; ")
    if last > EIGEN_FLOOR and prev > 0 and abs(last - prev) / prev < STABILIZE_REL:
        return STABLE, rationale + (
            f"lambda-min ladder stabilized at {last:.6g} "
            f"(relative change {abs(last - prev) / prev:.2%})")
    first = lambda_mins[0]
    collapsed = first <= 1e-12 or (last > 0 and first >= DECAY_FACTOR * last) or last <= 0
    if last < EIGEN_FLOOR and prev < EIGEN_FLOOR and collapsed:
        return UNSTABLE, rationale + (
            f"lambda-min ladder collapsed from {first:.3g} to {last:.3g} "
            f"below the floor at the two largest sections")
    return INCONCLUSIVE, rationale + (
        f"ladder neither stabilized above the floor nor collapsed "
        f"(first {first:.3g}, last {last:.3g})")


def _check_nested(windows):
    if len(windows) < 2:
        raise InvalidArgumentError("ladder needs at least 2 windows")
    for (al, ah), (bl, bh) in zip(windows[:-1], windows[1:]):
        if not (bl <= al and ah <= bh and (bl < al or ah > bh)):
            raise InvalidArgumentError("ladder windows must be strictly nested")


def l2_stability_estimate(gen, descr: SeparatedSetDescriptor, windows) -> StabilityReport:
    """Two-sided l^2 constants from a nested ladder of Gramian sections.

    C1 is the square root of the last section's smallest eigenvalue, C2 of
    the largest eigenvalue seen anywhere on the ladder.  The three-way
    verdict follows the ladder rules stated in the rationale.
    """
    _check_nested(windows)
    ladder = []
    lam_mins = []
    lam_max_all = 0.0
    separation = math.inf
    for w in windows:
        sec = gramian_section(gen, descr, w)
        ladder.append((len(sec.points), sec.lambda_min, sec.lambda_max))
        lam_mins.append(sec.lambda_min)
        lam_max_all = max(lam_max_all, sec.lambda_max)
        separation = min(separation, sec.separation)
    verdict, rationale = _ladder_verdict(lam_mins)
    if separation < 1e-9:
        rationale += "; warning: window separation below 1e-9 (set may not be separated)"
    c1 = math.sqrt(max(lam_mins[-1], 0.0))
    c2 = math.sqrt(max(lam_max_all, 0.0))
    return StabilityReport(p="2", c1=c1, c2=c2, ladder=tuple(ladder),
                           verdict=verdict, rationale=rationale)


# ---------------------------------------------------------------------------
# synthesis and consistency

def synthesize(gen, descr: SeparatedSetDescriptor, window, coefficients, grid):
    """Pointwise values of sum_n c_n F(x - gamma_n) on the grid.

    Coefficients align with enumerate_points(descr, window).
    """
    pts = enumerate_points(descr, window)
    c = np.asarray(coefficients, dtype=complex)
    if len(c) != len(pts):
        raise InvalidArgumentError(
            f"{len(c)} coefficients for {len(pts)} points in the window")
    xs = np.asarray(grid, dtype=float)
    out = np.zeros(len(xs), dtype=complex)
    for cn, g in zip(c, pts):
        if cn != 0:
            out += cn * np.asarray(gens.eval_time(gen, xs - g))
    return out


def _l2_tail_sup_sum(gen, beyond: float, cells: int = 16) -> float:
    """Sum of squared per-cell sups of |F| over cells past |x| > beyond."""
    sup = gens.time_support(gen)
    if sup is not None and beyond >= max(abs(sup[0]), abs(sup[1])):
        return 0.0
    valfn = lambda pts: np.abs(np.asarray(gens.eval_time(gen, pts)))
    start = int(math.floor(beyond))
    right = gens._cell_sups(valfn, start, cells, 64)
    left = gens._cell_sups(valfn, -start - cells, cells, 64)
    total = float(np.sum(right ** 2) + np.sum(left ** 2))
    inc1 = float(np.sum(right[:cells // 2] ** 2) + np.sum(left[cells // 2:] ** 2))
    inc2 = total - inc1
    if 0 < inc2 < inc1:
        total += inc2 * (inc2 / inc1) / (1.0 - inc2 / inc1)
    return total


def l2_norm_consistency(gen, descr: SeparatedSetDescriptor, window, coefficients,
                        quad_grid, tail_tolerance=None) -> ConsistencyPair:
    """Quadratic form c*Gc against a quadrature of |synthesize|^2.

    The quadrature grid must be uniform and cover the synthesized mass; the
    attached tail bound estimates the |f|^2 integral beyond the grid.  When
    tail_tolerance is given and the bound exceeds it the request is refused;
    by default the pair is returned with the bound attached for the caller
    to judge.
    """
    pts = enumerate_points(descr, window)
    c = np.asarray(coefficients, dtype=complex)
    if len(c) != len(pts):
        raise InvalidArgumentError(
            f"{len(c)} coefficients for {len(pts)} points in the window")
    xs = np.asarray(quad_grid, dtype=float)
    if len(xs) < 3:
        raise InvalidArgumentError("quadrature grid needs at least 3 points")
    steps = np.diff(xs)
    if steps.min() <= 0 or (steps.max() - steps.min()) > 1e-9 * steps.max():
        raise InvalidArgumentError("quadrature grid must be uniform increasing")

    if np.any(c):
        if len(pts) == 1:
            gram_value = float((abs(c[0]) ** 2) * np.real(gens.autocorrelation(gen, 0.0)))
        else:
            diffs = pts[:, None] - pts[None, :]
            keys = np.round(np.abs(diffs), 12)
            uniq, inverse = np.unique(keys, return_inverse=True)
            vals = np.asarray(gens.autocorrelation(gen, uniq), dtype=complex)
            matrix = vals[inverse].reshape(len(pts), len(pts))
            matrix = np.where(diffs >= 0, matrix, np.conj(matrix))
            gram_value = float(np.real(np.conj(c) @ (matrix @ c)))
    else:
        gram_value = 0.0

    fvals = synthesize(gen, descr, window, c, xs)
    h = float(steps.mean())
    density = np.abs(fvals) ** 2
    # composite Simpson needs an even interval count; fall back to one
    # trapezoid panel at the end when it is odd
    if (len(xs) - 1) % 2 == 0:
        quad = float(h / 3 * (density[0] + density[-1]
                              + 4 * density[1:-1:2].sum() + 2 * density[2:-2:2].sum()))
    else:
        quad = float(h / 3 * (density[0] + density[-2]
                              + 4 * density[1:-2:2].sum() + 2 * density[2:-3:2].sum()))
        quad += float(0.5 * h * (density[-2] + density[-1]))

    margin = min(abs(xs[0] - pts.min()), abs(xs[-1] - pts.max()))
    if np.any(c):
        tail = 2.0 * float(np.sum(np.abs(c))) ** 2 * _l2_tail_sup_sum(gen, max(margin, 1.0))
    else:
        tail = 0.0
    if tail_tolerance is not None and tail > tail_tolerance:
        raise UnsupportedRequestError(
            f"quadrature tail bound {tail:.3g} exceeds the requested {tail_tolerance:g}")
    return ConsistencyPair(gram_value=gram_value, quadrature_value=quad,
                           tail_bound=float(tail))


# ---------------------------------------------------------------------------
# l-infinity search

def _hann(n: int) -> np.ndarray:
    if n == 1:
        return np.ones(1)
    return 0.5 - 0.5 * np.cos(2 * math.pi * (np.arange(n) + 0.5) / n)


def linf_stability_search(gen, descr: SeparatedSetDescriptor, window, budget: int,
                          seed: int = 0, grid_step: float = 0.02,
                          pad: float = 4.0) -> LinfSearchBound:
    """Search unit-sup-norm coefficient vectors minimizing the synthesized sup.

    Three stages: all sign patterns (sizes up to 12), deterministic tapered
    modulation ramps plus seeded random phase vectors up to the budget, and a
    per-coordinate multiplier descent from the best candidate.  The result is
    the smallest sup over a dense padded grid, an upper bound on the true
    l-infinity lower constant.
    """
    gens.ensure_time_amalgam(gen)
    if budget < 1:
        raise InvalidArgumentError("budget must be positive")
    pts = np.asarray(enumerate_points(descr, window), dtype=float)
    n = len(pts)
    if n < 1:
        raise InvalidArgumentError("window contains no points")
    xs = np.arange(window[0] - pad, window[1] + pad + grid_step / 2, grid_step)
    basis = np.empty((len(xs), n), dtype=complex)
    for j, g in enumerate(pts):
        basis[:, j] = np.asarray(gens.eval_time(gen, xs - g))

    evaluations = 0

    def ratio(c):
        nonlocal evaluations
        evaluations += 1
        top = float(np.max(np.abs(basis @ c)))
        return top / float(np.max(np.abs(c)))

    best_val = math.inf
    best_c = None

    def consider(c):
        nonlocal best_val, best_c
        if not np.any(c):
            return
        r = ratio(c)
        if r < best_val:
            best_val, best_c = r, np.array(c)

    # stage 1: exhaustive sign patterns for small windows
    if n <= 12:
        for mask in range(1 << (n - 1)):
            c = np.ones(n, dtype=complex)
            for b in range(n - 1):
                if (mask >> b) & 1:
                    c[b + 1] = -1.0
            consider(c)

    # stage 2a: tapered modulation ramps (deterministic)
    gap = float(np.min(np.diff(pts))) if n > 1 else 1.0
    tapers = [np.ones(n), 1.0 - np.abs(np.linspace(-1, 1, n)), _hann(n)]
    theta_max = 1.0 / gap
    for theta in np.linspace(0.0, theta_max, 128, endpoint=False):
        ramp = np.exp(2j * math.pi * theta * pts)
        for taper in tapers:
            if evaluations >= budget:
                break
            consider(taper * ramp)

    # stage 2b: seeded random phases
    rng = np.random.default_rng(seed)
    while evaluations < max(budget - 200, budget // 2):
        kind = rng.integers(0, 2)
        if kind == 0:
            c = rng.choice([-1.0, 1.0], size=n).astype(complex)
        else:
            c = np.exp(2j * math.pi * rng.random(n))
        consider(c)

    # stage 3: per-coordinate multiplier descent
    if best_c is not None:
        scales = [1.0, 0.7, 0.4, 0.15, 0.0]
        improved = True
        while improved and evaluations < budget:
            improved = False
            for j in range(n):
                original = best_c[j]
                for s in scales:
                    for phase in (1.0, -1.0, 1j, -1j):
                        if evaluations >= budget:
                            break
                        trial = np.array(best_c)
                        trial[j] = s * phase * original if s else 0.0
                        if not np.any(trial):
                            continue
                        r = ratio(trial)
                        if r < best_val - 1e-12:
                            best_val, best_c = r, trial
                            improved = True
    witness = best_c / np.max(np.abs(best_c))
    return LinfSearchBound(bound=float(best_val), witness=tuple(map(complex, witness)),
                           evaluations=evaluations, grid_step=grid_step, pad=pad)
