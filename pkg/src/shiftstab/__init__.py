"""Stability and interpolation diagnostics for shifted-generator systems.

Submodules:

- ``generators``: generator definitions, transforms, amalgam norms, zero sets
- ``point_sets``: separated point sets, densities, translates, weak limits
- ``stability``: periodization profiles, Gramian ladders, verdicts
- ``interpolation``: exponential Grams, density verdicts, r-scans
- ``crystalline``: Poisson combs, summation checks, trig zero diagnostics
- ``scenario`` / ``ops`` / ``suites`` / ``reports`` / ``cli``: TOML-driven runner

Submodules load lazily so the command line can cap BLAS thread pools before
numpy comes in.
"""

from importlib import import_module

__version__ = "0.1.0"

_SUBMODULES = ("generators", "point_sets", "stability", "interpolation",
               "crystalline", "scenario", "ops", "suites", "reports", "cli",
               "errors")

__all__ = list(_SUBMODULES) + ["__version__"]


def __getattr__(name):
    if name in _SUBMODULES:
        return import_module(f".{name}", __name__)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(set(list(globals()) + list(_SUBMODULES)))
