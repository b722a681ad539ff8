"""Generalized Poisson combs and their closed-form Fourier transforms.

A comb is an atomic measure sum_k sum_n P_k(n) delta_{a n + x_k} whose node
weights P_k are exponential polynomials P_k(n) = sum_j c_j e^{2 pi i w_j n}
with frequencies w_j in [0, 1).  The transform of such a comb is again a comb
(period 1/a), which makes the summation formula checkable with closed-form
Gaussian test functions.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import generators as gens
from . import point_sets
from .errors import InvalidArgumentError, UnsupportedGeneratorError

_OFFSET_TOL = 1e-10
_FREQ_TOL = 1e-12


@dataclass(frozen=True)
class CombComponent:
    """One family of nodes offset + period*Z with weights P(n) = sum c_j e^{2 pi i w_j n}."""

    offset: float
    terms: tuple            # ((coefficient complex, frequency in [0,1)), ...)

    def weight(self, n):
        """P evaluated at integer index n (scalar or array)."""
        nn = np.asarray(n, dtype=float)
        out = np.zeros(nn.shape, dtype=complex)
        for c, w in self.terms:
            out += c * np.exp(2j * math.pi * w * nn)
        return complex(out) if np.ndim(n) == 0 else out


@dataclass(frozen=True)
class PoissonComb:
    period: float
    components: tuple

    def __post_init__(self):
        if not (self.period > 0 and math.isfinite(self.period)):
            raise InvalidArgumentError("comb period must be positive")
        comps = _canonicalize(self.period, self.components)
        object.__setattr__(self, "components", comps)

    def coefficient_bound(self) -> float:
        """sup_n |P_k(n)| is at most the coefficient l1 norm, per component."""
        return max((sum(abs(c) for c, _ in comp.terms) for comp in self.components),
                   default=0.0)


def _canonical_freq(w: float) -> float:
    w = w % 1.0
    if w > 1.0 - _FREQ_TOL:
        w = 0.0
    return w


def _canonicalize(period: float, components) -> tuple:
    """Normalize offsets into [0, period), frequencies into [0, 1), and merge.

    Moving an offset by m periods re-indexes the nodes (n -> n + m), which
    multiplies each term coefficient by e^{-2 pi i w m}; this keeps the measure
    itself unchanged, so equal measures get equal canonical forms.
    """
    by_offset = {}
    for comp in components:
        if isinstance(comp, CombComponent):
            x, terms = comp.offset, comp.terms
        else:
            x, terms = comp
        x = float(x)
        m = math.floor(x / period + 0.5 * _OFFSET_TOL / period)
        x_new = x - m * period
        if x_new >= period - _OFFSET_TOL:
            x_new -= period
            m += 1
        if abs(x_new) < _OFFSET_TOL:
            x_new = 0.0
        key = round(x_new / period / _OFFSET_TOL)
        bucket = by_offset.setdefault(key, (x_new, {}))
        for c, w in terms:
            c = complex(c) * np.exp(-2j * math.pi * float(w) * m)
            w = _canonical_freq(float(w))
            fkey = round(w / _FREQ_TOL)
            bucket[1][fkey] = (bucket[1].get(fkey, (0.0, w))[0] + c, w)
    comps = []
    for _, (x, terms) in sorted(by_offset.items()):
        kept = tuple(sorted(((complex(c), float(w)) for (c, w) in terms.values()
                             if abs(c) > 1e-14), key=lambda t: t[1]))
        if kept:
            comps.append(CombComponent(offset=float(x), terms=kept))
    return tuple(comps)


def dirac_comb(period: float = 1.0) -> PoissonComb:
    return PoissonComb(period=period, components=(CombComponent(0.0, ((1.0, 0.0),)),))


def alternating_comb() -> PoissonComb:
    """Weights (-1)^n on the integers."""
    return PoissonComb(period=1.0, components=(CombComponent(0.0, ((1.0, 0.5),)),))


@dataclass(frozen=True)
class GaussianTest:
    sigma: float = 1.0

    @property
    def label(self) -> str:
        return f"gaussian(sigma={self.sigma:g})"

    def time(self, x):
        return np.exp(-math.pi * (np.asarray(x, dtype=float) / self.sigma) ** 2).astype(complex)

    def freq(self, t):
        tt = np.asarray(t, dtype=float)
        return (self.sigma * np.exp(-math.pi * (self.sigma * tt) ** 2)).astype(complex)


@dataclass(frozen=True)
class ModulatedGaussianTest:
    """e^{2 pi i modulation x} times a Gaussian bump centered at `center`."""

    sigma: float = 1.0
    center: float = 0.0
    modulation: float = 0.0

    @property
    def label(self) -> str:
        return (f"modulated_gaussian(sigma={self.sigma:g}, center={self.center:g}, "
                f"modulation={self.modulation:g})")

    def time(self, x):
        xx = np.asarray(x, dtype=float)
        bump = np.exp(-math.pi * ((xx - self.center) / self.sigma) ** 2)
        return bump * np.exp(2j * math.pi * self.modulation * xx)

    def freq(self, t):
        tt = np.asarray(t, dtype=float)
        shifted = tt - self.modulation
        return (self.sigma * np.exp(-math.pi * (self.sigma * shifted) ** 2)
                * np.exp(-2j * math.pi * shifted * self.center))


@dataclass(frozen=True)
class CrystallineCheckReport:
    truncation: int
    left_value: complex
    right_value: complex
    residual: float
    test_id: str


def comb_points(comb: PoissonComb, bound: float):
    """Support points with |point| <= bound and their weights, sorted."""
    pts = []
    wts = []
    for comp in comb.components:
        n_lo = math.ceil((-bound - comp.offset - 1e-12) / comb.period)
        n_hi = math.floor((bound - comp.offset + 1e-12) / comb.period)
        if n_hi < n_lo:
            continue
        ns = np.arange(n_lo, n_hi + 1)
        pts.append(comp.offset + comb.period * ns)
        wts.append(comp.weight(ns))
    if not pts:
        return np.empty(0), np.empty(0, dtype=complex)
    pts = np.concatenate(pts)
    wts = np.concatenate(wts)
    order = np.argsort(pts)
    return pts[order], wts[order]


def comb_fourier(comb: PoissonComb) -> PoissonComb:
    """Closed-form transform: again a comb, with period 1/a.

    A term c e^{2 pi i w n} at nodes a n + x transforms to atoms at
    (w + m)/a with coefficient (c/a) e^{-2 pi i (w + m) x / a}: node family
    offset w/a, coefficient (c/a) e^{-2 pi i w x / a}, frequency (-x/a) mod 1.
    """
    a = comb.period
    new_components = []
    for comp in comb.components:
        for c, w in comp.terms:
            coeff = (c / a) * np.exp(-2j * math.pi * w * comp.offset / a)
            freq = (-comp.offset / a) % 1.0
            new_components.append((w / a, ((coeff, freq),)))
    return PoissonComb(period=1.0 / a, components=tuple(new_components))


def reflect(comb: PoissonComb) -> PoissonComb:
    """The comb of the reflected measure (atom at -p for every atom at p)."""
    new_components = []
    for comp in comb.components:
        terms = tuple((c, _canonical_freq(-w)) for c, w in comp.terms)
        new_components.append((-comp.offset, terms))
    return PoissonComb(period=comb.period, components=tuple(new_components))


def combs_close(lhs: PoissonComb, rhs: PoissonComb, tol: float = 1e-9) -> bool:
    """Compare canonical forms: same period, offsets, frequencies, coefficients."""
    if abs(lhs.period - rhs.period) > tol:
        return False
    if len(lhs.components) != len(rhs.components):
        return False
    for cl, cr in zip(lhs.components, rhs.components):
        if abs(cl.offset - cr.offset) > tol:
            return False
        if len(cl.terms) != len(cr.terms):
            return False
        for (c1, w1), (c2, w2) in zip(cl.terms, cr.terms):
            if abs(c1 - c2) > tol or abs(w1 - w2) > tol:
                return False
    return True


def verify_poisson(comb: PoissonComb, test, truncation: int) -> CrystallineCheckReport:
    """Check sum over atoms of weight * testhat against the transformed comb.

    Left: sum of comb weights times the test transform over atoms in
    [-N, N].  Right: the same pairing of the transformed comb against the
    test's time side.  For Gaussian-type tests the truncation error decays
    like the Gaussian tail, so the residual should shrink as N grows.
    """
    if truncation < 10:
        raise InvalidArgumentError("truncation must be at least 10")
    pts, wts = comb_points(comb, float(truncation))
    left = complex(np.sum(wts * test.freq(pts))) if len(pts) else 0.0 + 0.0j

    hat = comb_fourier(comb)
    hpts, hwts = comb_points(hat, float(truncation))
    right = complex(np.sum(hwts * test.time(hpts))) if len(hpts) else 0.0 + 0.0j
    return CrystallineCheckReport(truncation=truncation, left_value=left,
                                  right_value=right, residual=abs(left - right),
                                  test_id=test.label)


# ---------------------------------------------------------------------------
# vanishing combinations

@dataclass(frozen=True)
class VanishingResidual:
    sup_residual: float
    tail_bound: float
    truncation: int


def _is_continuous(gen) -> bool:
    if gen.kind == "bspline" and gen.power == 1:
        return False
    if gen.kind == "finite_combination":
        return _is_continuous(gen.base)
    return True


def vanishing_combination_residual(gen, comb: PoissonComb, truncation: int,
                                   probe_grid) -> VanishingResidual:
    """Sup over the probe grid of |sum_{|p| <= N} weight(p) F(x - p)|.

    The comb supplies the coefficient sequence; the tail bound is the product
    of the generator's time-domain amalgam total and the coefficient sup,
    which dominates the discarded |p| > N terms for any x in the grid.
    """
    if not _is_continuous(gen):
        raise UnsupportedGeneratorError(
            "vanishing-combination residuals need a continuous generator")
    gens.ensure_time_amalgam(gen)
    if truncation < 1:
        raise InvalidArgumentError("truncation must be positive")
    xs = np.asarray(probe_grid, dtype=float)
    pts, wts = comb_points(comb, float(truncation))
    acc = np.zeros(len(xs), dtype=complex)
    for p, w in zip(pts, wts):
        if w != 0:
            acc += w * np.asarray(gens.eval_time(gen, xs - p))
    sup = float(np.max(np.abs(acc))) if len(xs) else 0.0

    tsup = gens.time_support(gen)
    if tsup is not None:
        wiener_total = gens.wiener_norm(
            gen, gens.TIME_DOMAIN, max(4, math.ceil(max(abs(tsup[0]), abs(tsup[1]))) + 1),
            64).total
    else:
        wiener_total = gens.wiener_norm(gen, gens.TIME_DOMAIN, 32, 64).total
    tail = float(wiener_total * comb.coefficient_bound())
    return VanishingResidual(sup_residual=sup, tail_bound=tail, truncation=truncation)


# ---------------------------------------------------------------------------
# trig zero set diagnostics

@dataclass(frozen=True)
class TrigZeroDiagnostics:
    points: tuple
    separation: float
    per_unit_counts: tuple


def trig_zero_set(a: float, b: float, window) -> TrigZeroDiagnostics:
    """Zero set of sin(pi z + a) - (1/2) sin(z + b) with count diagnostics."""
    descr = point_sets.TrigZeroSet(a=float(a), b=float(b))
    pts = point_sets.enumerate_points(descr, window)
    sep = point_sets.separation_constant(descr, window)
    lo, hi = float(window[0]), float(window[1])
    counts = []
    for k in range(int(math.floor(lo)), int(math.ceil(hi))):
        counts.append(int(np.sum((pts >= k) & (pts < k + 1))))
    return TrigZeroDiagnostics(points=tuple(map(float, pts)), separation=sep,
                               per_unit_counts=tuple(counts))


@dataclass(frozen=True)
class APIntersection:
    hit_count: int
    hits: tuple


def ap_intersection_diagnostic(points, alpha: float, beta: float,
                               eps: float) -> APIntersection:
    """Count points lying within eps of the progression alpha Z + beta."""
    if not (alpha > 0):
        raise InvalidArgumentError("alpha must be positive")
    if not (0 < eps < alpha / 2):
        raise InvalidArgumentError("need 0 < eps < alpha/2")
    pts = np.asarray(points, dtype=float)
    if len(pts) == 0:
        return APIntersection(hit_count=0, hits=())
    frac = np.mod(pts - beta + alpha / 2, alpha) - alpha / 2
    mask = np.abs(frac) <= eps
    return APIntersection(hit_count=int(mask.sum()),
                          hits=tuple(map(float, pts[mask])))
