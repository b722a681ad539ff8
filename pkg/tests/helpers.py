"""Shared oracles: closed forms and brute-force references used across tests.

Everything here is computed independently of the package under test, so the
expected values cannot inherit a bug from the code they are checking.
"""

import math

import numpy as np


def bspline_by_convolution(order: int, xs, step: float = 2.5e-4):
    """B-spline values via repeated numerical convolution of unit indicators.

    Exact up to quadrature error: the order-1 spline is the indicator of
    [-1/2, 1/2]; each further order convolves one more indicator in.  Probe
    at points where the factors' jumps do not align (for order 2 that means
    x not in {0, -1, 1}); aligned jumps are sampled at a quarter instead of
    a half weight and cost O(step) there.
    """
    half = order / 2.0 + 1.0
    n = int(round(2.0 * half / step))
    grid = np.linspace(-half, half, n + 1)
    vals = (np.abs(grid) < 0.5).astype(float)
    vals[np.abs(np.abs(grid) - 0.5) <= step / 4] = 0.5   # trapezoid edge weights
    unit = np.ones(int(round(1.0 / step)) + 1)
    unit[0] = unit[-1] = 0.5
    for _ in range(order - 1):
        vals = np.convolve(vals, unit, mode="same") * step
    return np.interp(np.asarray(xs, dtype=float), grid, vals)


def quartic_periodization(t):
    """Closed form for sum_k sinc^4(t + k): (2 + cos 2 pi t) / 3."""
    return (2.0 + np.cos(2.0 * math.pi * np.asarray(t, dtype=float))) / 3.0


def triangle_sq_periodization(t):
    """Closed form for sum_k triangle(t+k)^2 on the frequency side: (1-u)^2 + u^2."""
    u = np.mod(np.asarray(t, dtype=float), 1.0)
    return (1.0 - u) ** 2 + u ** 2


def autocorr_squared_sinc(x):
    """Closed form for the autocorrelation of sinc^2: 4 (u - sin u) / u^3, u = 2 pi x."""
    u = 2.0 * math.pi * np.asarray(x, dtype=float)
    out = np.where(np.abs(u) < 1e-6, 2.0 / 3.0 - u ** 2 / 15.0,
                   4.0 * (u - np.sin(u)) / np.where(u == 0, 1.0, u) ** 3)
    return out


def gaussian_autocorr(x, sigma: float = 1.0):
    xs = np.asarray(x, dtype=float)
    return (sigma / math.sqrt(2.0)) * np.exp(-math.pi * xs ** 2 / (2.0 * sigma ** 2))


def theta_alternating(terms: int = 40) -> float:
    """sum_n (-1)^n e^{-pi n^2}."""
    return sum((-1) ** n * math.exp(-math.pi * n * n)
               for n in range(-terms, terms + 1))


def theta_half_shift(terms: int = 40) -> float:
    """sum_k e^{-pi (k + 1/2)^2}."""
    return sum(math.exp(-math.pi * (k + 0.5) ** 2)
               for k in range(-terms, terms + 1))


def trig_zeros_reference(a: float, b: float, lo: float, hi: float):
    """Zeros of sin(pi z + a) - (1/2) sin(z + b) by dense scan plus bisection."""
    def h(z):
        return math.sin(math.pi * z + a) - 0.5 * math.sin(z + b)

    zs = []
    step = 0.005
    z = lo
    prev = h(z)
    while z < hi:
        nxt = z + step
        cur = h(nxt)
        if prev == 0.0:
            zs.append(z)
        elif prev * cur < 0:
            left, right = z, nxt
            for _ in range(80):
                mid = 0.5 * (left + right)
                if h(left) * h(mid) <= 0:
                    right = mid
                else:
                    left = mid
            zs.append(0.5 * (left + right))
        z, prev = nxt, cur
    if prev == 0.0 and (not zs or abs(zs[-1] - hi) > 1e-9):
        zs.append(hi)
    return np.array(zs)


def exponential_gram_entry(p: float, q: float, intervals) -> complex:
    """Integral of e^{2 pi i (p - q) t} over a union of intervals, in closed form."""
    d = p - q
    if abs(d) < 1e-15:
        return complex(sum(b - a for a, b in intervals))
    total = 0.0 + 0.0j
    for a, b in intervals:
        total += (np.exp(2j * math.pi * d * b) - np.exp(2j * math.pi * d * a)) \
            / (2j * math.pi * d)
    return complex(total)
