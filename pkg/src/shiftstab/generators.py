"""Generator functions and their frequency-side diagnostics.

A Generator describes a function F on the line together with enough structure
to evaluate it in time and frequency (transform convention
Fhat(t) = integral of e^{-2*pi*i*t*x} F(x) dx), to take autocorrelations, and
to measure amalgam-type norms.  Evaluation functions accept scalars or numpy
arrays and are deterministic: identical inputs produce identical floats.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import optimize

from .errors import InvalidArgumentError, UnsupportedGeneratorError

TIME_DOMAIN = "time"
FREQ_SQUARED = "freq_squared"

# Relative growth per doubling above which a partial sum is declared divergent.
# Two consecutive doublings must exceed it.
_CAUCHY_REL = 0.01

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Generator:
    """Immutable description of a generator function.

    kind is one of "sinc", "sinc_power", "gaussian", "bspline",
    "finite_combination", "sampled".  Only the fields relevant to the kind
    are meaningful; the constructors below fill the rest with defaults.
    """

    kind: str
    power: int = 1                 # sinc_power exponent / bspline order
    sigma: float = 1.0             # gaussian width; sigma=1 is self-dual
    base: Optional["Generator"] = None
    terms: tuple = ()              # ((coeff, shift), ...) for finite_combination
    step: float = 0.0              # sampled grid spacing
    samples: tuple = ()            # sampled values, centered grid
    freq_support: Optional[tuple] = None  # declared (lo, hi) or None


def sinc() -> Generator:
    """sin(pi x)/(pi x); transform is the indicator of [-1/2, 1/2]."""
    return Generator(kind="sinc")


def sinc_power(n: int) -> Generator:
    """sinc(x)**n; transform is the centered B-spline of order n."""
    if not isinstance(n, int) or n < 1:
        raise InvalidArgumentError("sinc_power needs an integer exponent >= 1")
    return Generator(kind="sinc_power", power=n)


def gaussian(sigma: float = 1.0) -> Generator:
    """exp(-pi (x/sigma)^2); transform is sigma * exp(-pi (sigma t)^2)."""
    if not (sigma > 0 and math.isfinite(sigma)):
        raise InvalidArgumentError("gaussian needs sigma > 0")
    return Generator(kind="gaussian", sigma=float(sigma))


def bspline(order: int) -> Generator:
    """Centered B-spline of the given order; transform is sinc(t)**order."""
    if not isinstance(order, int) or order < 1:
        raise InvalidArgumentError("bspline needs an integer order >= 1")
    return Generator(kind="bspline", power=order)


def finite_combination(base: Generator, terms) -> Generator:
    """Finite sum of shifted copies of a base generator.

    terms is an iterable of (coefficient, shift) pairs; the result evaluates
    to sum_j c_j * base(x - s_j), with transform basehat(t) * sum_j c_j
    e^{-2 pi i t s_j}.
    """
    if not isinstance(base, Generator):
        raise InvalidArgumentError("finite_combination needs a base Generator")
    packed = []
    for coeff, shift in terms:
        shift = float(shift)
        if not math.isfinite(shift):
            raise InvalidArgumentError("shifts must be finite")
        packed.append((complex(coeff), shift))
    if not packed:
        raise InvalidArgumentError("finite_combination needs at least one term")
    return Generator(kind="finite_combination", base=base, terms=tuple(packed))


def sampled(step: float, samples, freq_support=None) -> Generator:
    """Piecewise-linear interpolant through samples on a centered grid.

    The grid is x_j = (j - (M-1)/2) * step and the function is zero outside
    the grid extent.  freq_support, when given as (lo, hi), declares that the
    transform may be treated as zero outside that interval; without it the
    transform is a fixed-grid quadrature that is only trustworthy below the
    Nyquist rate 1/(2*step).
    """
    if not (step > 0 and math.isfinite(step)):
        raise InvalidArgumentError("sampled needs step > 0")
    vals = tuple(complex(s) for s in samples)
    if len(vals) < 2:
        raise InvalidArgumentError("sampled needs at least two samples")
    if freq_support is not None:
        lo, hi = float(freq_support[0]), float(freq_support[1])
        if not (lo < hi):
            raise InvalidArgumentError("freq_support must be a nonempty interval")
        freq_support = (lo, hi)
    return Generator(kind="sampled", step=float(step), samples=vals,
                     freq_support=freq_support)


# ---------------------------------------------------------------------------
# result types

@dataclass(frozen=True)
class AmalgamProfile:
    """Per-cell sup profile of |F| (time mode) or |Fhat|^2 (freq_squared mode).

    Cells are the unit intervals (k, k+1) for k in [-cells, cells); sups are
    probe maxima polished by a local bounded search, so they are grid-based
    lower estimates of the true cell sups (exact at interior maxima and at
    cell endpoints).  total = retained sum + tail estimate, or inf when the
    doubling test flags divergence.
    """

    mode: str
    cell_start: int
    cell_sups: tuple
    retained_total: float
    tail_estimate: float
    divergent: bool
    truncation_cells: int
    probes_per_cell: int

    @property
    def total(self) -> float:
        if self.divergent:
            return math.inf
        return self.retained_total + self.tail_estimate


@dataclass(frozen=True)
class FreqZeroSet:
    """Zeros of Fhat inside a window.

    Isolated zeros are refined points; interval_components are maximal
    subintervals where |Fhat| stays below the tolerance (e.g. the complement
    of a compact support).  per_unit_counts counts isolated zeros per integer
    cell [k, k+1) intersected with the window.
    """

    window: tuple
    zeros: tuple
    interval_components: tuple
    per_unit_counts: tuple
    locally_finite: bool


@dataclass(frozen=True)
class LevelSet:
    """Maximal intervals where |Fhat| exceeds a threshold, plus their measure."""

    threshold: float
    intervals: tuple
    measure: float


# ---------------------------------------------------------------------------
# evaluation

def _validate_finite(arr, what):
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{what} requires finite arguments")


def _bspline_values(order: int, t: np.ndarray) -> np.ndarray:
    """Centered B-spline of the given order (support [-order/2, order/2])."""
    if order == 1:
        # indicator of [-1/2, 1/2] with the closed-support convention:
        # both boundary points evaluate to 1
        return np.where(np.abs(t) <= 0.5, 1.0, 0.0)
    acc = np.zeros_like(t, dtype=float)
    half = order / 2.0
    for j in range(order + 1):
        acc += ((-1.0) ** j) * math.comb(order, j) * np.maximum(t + half - j, 0.0) ** (order - 1)
    return acc / math.factorial(order - 1)


def _sampled_grid(gen: Generator) -> np.ndarray:
    m = len(gen.samples)
    return (np.arange(m) - (m - 1) / 2.0) * gen.step


def _eval_time_array(gen: Generator, x: np.ndarray):
    if gen.kind == "sinc":
        return np.sinc(x)
    if gen.kind == "sinc_power":
        return np.sinc(x) ** gen.power
    if gen.kind == "gaussian":
        return np.exp(-math.pi * (x / gen.sigma) ** 2)
    if gen.kind == "bspline":
        return _bspline_values(gen.power, x)
    if gen.kind == "finite_combination":
        out = None
        for coeff, shift in gen.terms:
            part = coeff * _eval_time_array(gen.base, x - shift)
            out = part if out is None else out + part
        return out
    if gen.kind == "sampled":
        grid = _sampled_grid(gen)
        vals = np.asarray(gen.samples)
        re = np.interp(x, grid, vals.real, left=0.0, right=0.0)
        if np.any(vals.imag):
            im = np.interp(x, grid, vals.imag, left=0.0, right=0.0)
            return re + 1j * im
        return re
    raise InvalidArgumentError(f"unknown generator kind {gen.kind!r}")


def _eval_freq_array(gen: Generator, t: np.ndarray):
    if gen.kind == "sinc":
        # closed support convention: the boundary points +-1/2 evaluate to 1
        return np.where(np.abs(t) <= 0.5, 1.0, 0.0)
    if gen.kind == "sinc_power":
        return _bspline_values(gen.power, t)
    if gen.kind == "gaussian":
        return gen.sigma * np.exp(-math.pi * (gen.sigma * t) ** 2)
    if gen.kind == "bspline":
        return np.sinc(t) ** gen.power
    if gen.kind == "finite_combination":
        phase = np.zeros_like(t, dtype=complex)
        for coeff, shift in gen.terms:
            phase += coeff * np.exp(-2j * math.pi * t * shift)
        return _eval_freq_array(gen.base, t) * phase
    if gen.kind == "sampled":
        grid = _sampled_grid(gen)
        vals = np.asarray(gen.samples)
        w = np.full(len(vals), gen.step)
        w[0] *= 0.5
        w[-1] *= 0.5
        wv = w * vals
        tt = np.asarray(t, dtype=float)
        out = np.empty(tt.shape, dtype=complex)
        # block the outer product so memory stays bounded for long t arrays
        block = max(1, (1 << 22) // len(grid))
        for i in range(0, tt.size, block):
            seg = tt[i:i + block]
            out[i:i + block] = np.exp(-2j * math.pi * np.multiply.outer(seg, grid)) @ wv
        if gen.freq_support is not None:
            lo, hi = gen.freq_support
            out = np.where((tt >= lo) & (tt <= hi), out, 0.0)
        return out
    raise InvalidArgumentError(f"unknown generator kind {gen.kind!r}")


def _dispatch(fn, gen, x, what):
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    _validate_finite(arr, what)
    out = fn(gen, arr)
    if scalar:
        return out.reshape(-1)[0].item()
    return out


def eval_time(gen: Generator, x):
    """Evaluate F at x (scalar or array)."""
    return _dispatch(_eval_time_array, gen, x, "eval_time")


def eval_freq(gen: Generator, t):
    """Evaluate Fhat at t (scalar or array)."""
    return _dispatch(_eval_freq_array, gen, t, "eval_freq")


# ---------------------------------------------------------------------------
# support helpers

def frequency_support(gen: Generator):
    """Interval outside which Fhat vanishes, or None when unbounded/undeclared."""
    if gen.kind == "sinc":
        return (-0.5, 0.5)
    if gen.kind == "sinc_power":
        h = gen.power / 2.0
        return (-h, h)
    if gen.kind == "finite_combination":
        return frequency_support(gen.base)
    if gen.kind == "sampled":
        return gen.freq_support
    return None


def time_support(gen: Generator):
    """Interval outside which F vanishes, or None."""
    if gen.kind == "bspline":
        h = gen.power / 2.0
        return (-h, h)
    if gen.kind == "sampled":
        g = _sampled_grid(gen)
        return (float(g[0]), float(g[-1]))
    if gen.kind == "finite_combination":
        base = time_support(gen.base)
        if base is None:
            return None
        shifts = [s for _, s in gen.terms]
        return (base[0] + min(shifts), base[1] + max(shifts))
    return None


# ---------------------------------------------------------------------------
# amalgam norms

def _cell_sups(valfn, cell_start: int, n_cells: int, probes: int) -> np.ndarray:
    """Max of valfn over each unit cell: probe grid plus a bounded polish.

    The probe grid includes both cell endpoints, so boundary maxima (common
    for even decaying generators) are hit exactly.
    """
    ks = np.arange(cell_start, cell_start + n_cells)
    offsets = np.linspace(0.0, 1.0, probes + 1)
    pts = (ks[:, None] + offsets[None, :]).ravel()
    vals = valfn(pts).reshape(n_cells, probes + 1)
    sups = vals.max(axis=1)
    best = vals.argmax(axis=1)
    h = 1.0 / probes
    for i in range(n_cells):
        center = ks[i] + offsets[best[i]]
        lo = max(ks[i], center - h)
        hi = min(ks[i] + 1.0, center + h)
        if hi - lo <= 0:
            continue
        res = optimize.minimize_scalar(lambda u: -float(valfn(np.array([u]))[0]),
                                       bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-12})
        sups[i] = max(sups[i], -res.fun)
    return sups


def _mode_valfn(gen: Generator, mode: str):
    if mode == TIME_DOMAIN:
        return lambda pts: np.abs(_eval_time_array(gen, pts))
    if mode == FREQ_SQUARED:
        return lambda pts: np.abs(_eval_freq_array(gen, pts)) ** 2
    raise InvalidArgumentError(f"unknown amalgam mode {mode!r}")


def wiener_norm(gen: Generator, mode: str, cells: int, probes_per_cell: int) -> AmalgamProfile:
    """Amalgam profile over the symmetric cell range [-cells, cells).

    Divergence is declared when doubling the retained cell count grows the
    partial sum by more than 1% twice in a row; the tail estimate is a
    geometric extrapolation of the last doubling increments (an estimate, not
    a certified bound).
    """
    if cells < 1:
        raise InvalidArgumentError("cells must be >= 1")
    if probes_per_cell < 16:
        raise InvalidArgumentError("probes_per_cell must be >= 16")
    valfn = _mode_valfn(gen, mode)
    sups = _cell_sups(valfn, -cells, 2 * cells, probes_per_cell)

    def partial(c):
        lo = cells - c
        return float(sups[lo:lo + 2 * c].sum())

    total = float(sups.sum())
    divergent = False
    tail = 0.0
    if cells >= 4:
        s1, s2, s3 = partial(cells // 4), partial(cells // 2), total
        inc1, inc2 = s2 - s1, s3 - s2
        r1 = inc1 / s1 if s1 > 0 else 0.0
        r2 = inc2 / s2 if s2 > 0 else 0.0
        divergent = (r1 > _CAUCHY_REL) and (r2 > _CAUCHY_REL)
        if not divergent and inc1 > 0 and inc2 > 0:
            ratio = inc2 / inc1
            if ratio < 1.0:
                tail = inc2 * ratio / (1.0 - ratio)
    return AmalgamProfile(mode=mode, cell_start=-cells, cell_sups=tuple(map(float, sups)),
                          retained_total=total, tail_estimate=tail, divergent=divergent,
                          truncation_cells=cells, probes_per_cell=probes_per_cell)


@lru_cache(maxsize=256)
def _freq_squared_profile(gen: Generator, cells: int = 32) -> AmalgamProfile:
    return wiener_norm(gen, FREQ_SQUARED, cells, 128)


def ensure_freq_squared_summable(gen: Generator) -> None:
    """Raise unless Fhat has compact support or |Fhat|^2 passes the doubling test.

    Sampled generators without a declared support are rejected outright: their
    quadrature transform is a finite exponential sum on a step grid, hence
    exactly (1/step)-periodic, so the squared-spectrum cell sums always
    diverge no matter what a finite probe range shows.
    """
    if _bare_sampled(gen):
        raise UnsupportedGeneratorError(
            "sampled generator without a declared frequency support has a "
            "periodic quadrature spectrum; its squared-spectrum cells never sum")
    if frequency_support(gen) is not None:
        return
    if _freq_squared_profile(gen).divergent:
        raise UnsupportedGeneratorError(
            "squared-spectrum amalgam sums diverge; declare a frequency support "
            "or use a generator with summable spectral cells")


def _bare_sampled(gen: Generator) -> bool:
    if gen.kind == "sampled":
        return gen.freq_support is None
    if gen.kind == "finite_combination":
        return _bare_sampled(gen.base)
    return False


def ensure_time_amalgam(gen: Generator) -> None:
    """Raise unless |F| passes the time-domain amalgam doubling test."""
    if time_support(gen) is not None:
        return
    prof = wiener_norm(gen, TIME_DOMAIN, 32, 128)
    if prof.divergent:
        raise UnsupportedGeneratorError(
            "time-domain amalgam sums diverge for this generator")


def freq_squared_tail(gen: Generator, beyond: float, pad_cells: int = 16) -> float:
    """Estimated sum of |Fhat|^2 cell sups over cells fully beyond |t| > beyond."""
    sup = frequency_support(gen)
    if sup is not None and beyond >= max(abs(sup[0]), abs(sup[1])):
        return 0.0
    valfn = _mode_valfn(gen, FREQ_SQUARED)
    start = int(math.floor(beyond))
    right = _cell_sups(valfn, start, pad_cells, 64)
    left = _cell_sups(valfn, -start - pad_cells, pad_cells, 64)
    total = float(right.sum() + left.sum())
    inc1 = float(right[:pad_cells // 2].sum() + left[pad_cells // 2:].sum())
    inc2 = total - inc1
    if 0 < inc2 < inc1:
        total += inc2 * (inc2 / inc1) / (1.0 - inc2 / inc1)
    return total


# ---------------------------------------------------------------------------
# autocorrelation

_leggauss_cache = {}


def _gl_nodes(n: int):
    if n not in _leggauss_cache:
        _leggauss_cache[n] = np.polynomial.legendre.leggauss(n)
    return _leggauss_cache[n]


def _quad_gl(fn, lo: float, hi: float, nodes: int) -> complex:
    x, w = _gl_nodes(nodes)
    mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
    pts = mid + half * x
    return half * complex(np.sum(w * fn(pts)))


def _freq_quad_autocorr(gen: Generator, xs: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """integral of |Fhat(t)|^2 e^{2 pi i t x} dt over [lo, hi], piecewise GL.

    Panels are unit-length so the node count can track the oscillation e^{2
    pi i t x} panel by panel.
    """
    edges = [lo + k for k in range(int(math.ceil(hi - lo)))] + [hi]
    edges = [e for e in edges if e <= hi]
    if edges[-1] != hi:
        edges.append(hi)
    out = np.zeros(len(xs), dtype=complex)
    for i, x in enumerate(xs):
        nodes = min(260, max(24, int(10 + 4 * abs(x))))
        acc = 0.0 + 0.0j
        for a, b in zip(edges[:-1], edges[1:]):
            if b <= a:
                continue
            acc += _quad_gl(
                lambda t, x=x: np.abs(_eval_freq_array(gen, t)) ** 2 * np.exp(2j * math.pi * t * x),
                a, b, nodes)
        out[i] = acc
    return out


def _autocorr_array(gen: Generator, x: np.ndarray):
    if gen.kind == "sinc":
        return np.sinc(x)
    if gen.kind == "gaussian":
        s = gen.sigma
        return (s / math.sqrt(2.0)) * np.exp(-math.pi * x ** 2 / (2.0 * s ** 2))
    if gen.kind == "bspline":
        # correlation of two order-n splines is the order-2n spline
        return _bspline_values(2 * gen.power, x)
    if gen.kind == "sinc_power":
        h = gen.power / 2.0
        return _freq_quad_autocorr(gen, x, -h, h)
    if gen.kind == "finite_combination":
        out = np.zeros_like(x, dtype=complex)
        for cj, sj in gen.terms:
            for cl, sl in gen.terms:
                out += cj * np.conj(cl) * np.asarray(
                    _autocorr_array(gen.base, x - (sj - sl)), dtype=complex)
        return out
    if gen.kind == "sampled":
        if gen.freq_support is None:
            # the quadrature transform of a sampled grid is (1/step)-periodic,
            # so |Fhat|^2 is never integrable without a declared cutoff
            raise UnsupportedGeneratorError(
                "sampled generator needs a declared frequency support for autocorrelation")
        lo, hi = gen.freq_support
        return _freq_quad_autocorr(gen, x, lo, hi)
    raise InvalidArgumentError(f"unknown generator kind {gen.kind!r}")


def autocorrelation(gen: Generator, x):
    """(F correlated with itself)(x) = integral of F(t) * conj(F(t - x)) dt.

    Evaluated by closed form where one exists, otherwise by frequency-side
    quadrature of |Fhat(t)|^2 e^{2 pi i t x} over the (declared) support.
    Values at -x are the conjugates of values at x.
    """
    return _dispatch(lambda g, a: np.asarray(_autocorr_array(g, a)), gen, x,
                     "autocorrelation")


# ---------------------------------------------------------------------------
# zero sets and level sets

def _refine_crossing(absfn, lo: float, hi: float, level: float) -> float:
    """Bisect |Fhat| - level over [lo, hi]; robust across jumps."""
    f = lambda u: float(absfn(np.array([u]))[0]) - level
    a, b = lo, hi
    fa = f(a)
    for _ in range(80):
        m = 0.5 * (a + b)
        fm = f(m)
        if (fa <= 0) == (fm <= 0):
            a, fa = m, fm
        else:
            b = m
        if b - a < 1e-13:
            break
    return 0.5 * (a + b)


def freq_zero_set(gen: Generator, window, grid_step: float = 0.005,
                  zero_tol: float = 1e-9, candidate_threshold: float = 0.05,
                  count_cap: int = 64) -> FreqZeroSet:
    """Locate zeros of Fhat in a window.

    Maximal grid runs with |Fhat| < zero_tol become interval components when
    longer than two grid steps, otherwise they collapse to isolated zeros.
    Isolated zeros between grid points are found two ways: sign changes of a
    (numerically) real transform, and local dips of |Fhat| below
    candidate_threshold polished to 1e-12 and accepted only if the polished
    value is below zero_tol.
    """
    lo, hi = float(window[0]), float(window[1])
    if not (hi > lo):
        raise InvalidArgumentError("window must be a nonempty interval")
    if grid_step > 0.01:
        raise InvalidArgumentError("grid_step must be <= 0.01")
    n = int(math.ceil((hi - lo) / grid_step))
    grid = np.linspace(lo, hi, n + 1)
    fvals = np.atleast_1d(np.asarray(_eval_freq_array(gen, grid)))
    avals = np.abs(fvals)
    absfn = lambda pts: np.abs(np.atleast_1d(np.asarray(_eval_freq_array(gen, pts))))

    below = avals < zero_tol
    intervals = []
    isolated = []
    i = 0
    while i <= n:
        if not below[i]:
            i += 1
            continue
        j = i
        while j + 1 <= n and below[j + 1]:
            j += 1
        left = grid[i] if i == 0 else _refine_crossing(absfn, grid[i - 1], grid[i], zero_tol)
        right = grid[j] if j == n else _refine_crossing(absfn, grid[j], grid[j + 1], zero_tol)
        if right - left > 2 * grid_step:
            intervals.append((float(left), float(right)))
        else:
            k = i + int(np.argmin(avals[i:j + 1]))
            isolated.append(float(grid[k]))
        i = j + 1

    def in_component(u):
        return any(a - 1e-12 <= u <= b + 1e-12 for a, b in intervals)

    # sign changes of a real-valued transform
    if np.max(np.abs(fvals.imag)) <= 1e-13 * max(np.max(avals), 1e-300):
        re = fvals.real
        for idx in np.nonzero(np.sign(re[:-1]) * np.sign(re[1:]) < 0)[0]:
            root = optimize.brentq(
                lambda u: float(np.real(np.atleast_1d(_eval_freq_array(gen, np.array([u])))[0])),
                grid[idx], grid[idx + 1], xtol=1e-12)
            if not in_component(root):
                isolated.append(float(root))

    # local dips of |Fhat|
    interior = np.arange(1, n)
    dips = interior[(avals[interior] <= avals[interior - 1])
                    & (avals[interior] <= avals[interior + 1])
                    & (avals[interior] < candidate_threshold)
                    & ~below[interior]]
    for idx in dips:
        res = optimize.minimize_scalar(lambda u: float(absfn(np.array([u]))[0]),
                                       bounds=(grid[idx - 1], grid[idx + 1]),
                                       method="bounded", options={"xatol": 1e-12})
        if res.fun < zero_tol and not in_component(res.x):
            isolated.append(float(res.x))

    zeros = []
    for z in sorted(isolated):
        if not zeros or z - zeros[-1] > 1e-9:
            zeros.append(z)

    counts = []
    for k in range(int(math.floor(lo)), int(math.ceil(hi))):
        counts.append(sum(1 for z in zeros if k <= z < k + 1))
    # an interval component is a continuum of zeros, never locally finite
    locally_finite = not intervals and all(c <= count_cap for c in counts)
    return FreqZeroSet(window=(lo, hi), zeros=tuple(zeros),
                       interval_components=tuple(intervals),
                       per_unit_counts=tuple(counts), locally_finite=locally_finite)


def level_set(gen: Generator, threshold: float, window, grid_step: float = 1e-3) -> LevelSet:
    """Maximal intervals of {|Fhat| > threshold} inside the window.

    Boundaries between grid points are refined by bisection; features
    narrower than the grid step can be missed.
    """
    if not (threshold > 0):
        raise InvalidArgumentError("threshold must be positive")
    lo, hi = float(window[0]), float(window[1])
    if not (hi > lo):
        raise InvalidArgumentError("window must be a nonempty interval")
    n = int(math.ceil((hi - lo) / grid_step))
    grid = np.linspace(lo, hi, n + 1)
    absfn = lambda pts: np.abs(np.atleast_1d(np.asarray(_eval_freq_array(gen, pts))))
    above = absfn(grid) > threshold
    intervals = []
    i = 0
    while i <= n:
        if not above[i]:
            i += 1
            continue
        j = i
        while j + 1 <= n and above[j + 1]:
            j += 1
        left = grid[i] if i == 0 else _refine_crossing(absfn, grid[i - 1], grid[i], threshold)
        right = grid[j] if j == n else _refine_crossing(absfn, grid[j], grid[j + 1], threshold)
        intervals.append((float(left), float(right)))
        i = j + 1
    measure = float(sum(b - a for a, b in intervals))
    return LevelSet(threshold=float(threshold), intervals=tuple(intervals), measure=measure)


def frequency_window(gen: Generator, threshold: float, max_cells: int = 512) -> float:
    """Half-width W such that |Fhat| <= threshold certifiably holds beyond |t| > W.

    Uses the analytic support when available, otherwise grows the squared
    amalgam profile until three consecutive cell pairs stay below threshold^2.
    """
    sup = frequency_support(gen)
    if sup is not None:
        return max(abs(sup[0]), abs(sup[1]))
    if gen.kind == "gaussian":
        s = gen.sigma
        if threshold >= s:
            return 1.0
        return math.sqrt(math.log(s / threshold) / math.pi) / s
    valfn = _mode_valfn(gen, FREQ_SQUARED)
    level = threshold ** 2
    run = 0
    for k in range(max_cells):
        sup_pair = max(_cell_sups(valfn, k, 1, 64)[0], _cell_sups(valfn, -k - 1, 1, 64)[0])
        if sup_pair < level:
            run += 1
            if run >= 3:
                return float(k + 1)
        else:
            run = 0
    raise UnsupportedGeneratorError(
        "could not certify a frequency window below the threshold")
