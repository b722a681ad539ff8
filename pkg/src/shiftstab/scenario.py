"""Scenario files: TOML descriptions of one operation on one generator/set/comb.

Layout:

    seed = 1234                        # optional, default 0

    [generator]
    kind = "sinc_power"                # + kind-specific fields
    power = 2

    [set]                              # optional, operation-dependent
    kind = "lattice"
    step = 0.5

    [comb]                             # optional, for crystalline operations
    period = 1.0
    [[comb.components]]
    offset = 0.0
    terms = [[1.0, 0.0, 0.0]]          # [coeff_re, coeff_im, frequency]

    [operation]
    name = "periodization"             # + operation parameters

    [output]
    json = "report.json"               # optional csv = "profile.csv"

Unknown keys anywhere are rejected; so are missing required fields.  Parse
errors carry the line/column from the TOML decoder when available.
"""

import math
import re
from dataclasses import dataclass, field

try:
    import tomllib
except ImportError:                      # Python < 3.11
    import tomli as tomllib

from . import generators as gens
from . import point_sets
from .crystalline import PoissonComb
from .errors import InvalidArgumentError


class ScenarioError(InvalidArgumentError):
    """Configuration problem: bad syntax, unknown key, missing field."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


@dataclass
class Scenario:
    generator: object = None
    set_descriptor: object = None
    comb: object = None
    operation: str = ""
    params: dict = field(default_factory=dict)
    output_json: str = ""
    output_csv: str = ""
    seed: int = 0
    echo: dict = field(default_factory=dict)


def _reject_unknown(table: dict, allowed, where: str) -> None:
    unknown = sorted(set(table) - set(allowed))
    if unknown:
        raise ScenarioError(f"unknown key(s) {unknown} in {where}; "
                            f"allowed: {sorted(allowed)}")


def _need(table: dict, key: str, where: str):
    if key not in table:
        raise ScenarioError(f"missing required key '{key}' in {where}")
    return table[key]


def _as_float(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{where} must be a number, got {value!r}")
    out = float(value)
    if not math.isfinite(out):
        raise ScenarioError(f"{where} must be finite")
    return out


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{where} must be an integer, got {value!r}")
    return value


def build_generator(table: dict, where: str = "[generator]"):
    kind = _need(table, "kind", where)
    if kind == "sinc":
        _reject_unknown(table, {"kind"}, where)
        return gens.sinc()
    if kind == "sinc_power":
        _reject_unknown(table, {"kind", "power"}, where)
        return gens.sinc_power(_as_int(_need(table, "power", where), where + ".power"))
    if kind == "gaussian":
        _reject_unknown(table, {"kind", "sigma"}, where)
        return gens.gaussian(_as_float(table.get("sigma", 1.0), where + ".sigma"))
    if kind == "bspline":
        _reject_unknown(table, {"kind", "order"}, where)
        return gens.bspline(_as_int(_need(table, "order", where), where + ".order"))
    if kind == "finite_combination":
        _reject_unknown(table, {"kind", "base", "terms"}, where)
        base = build_generator(_need(table, "base", where), where + ".base")
        raw = _need(table, "terms", where)
        terms = []
        for i, item in enumerate(raw):
            spot = f"{where}.terms[{i}]"
            if not isinstance(item, list) or len(item) not in (2, 3):
                raise ScenarioError(
                    f"{spot} must be [coeff, shift] or [coeff_re, coeff_im, shift]")
            if len(item) == 2:
                coeff = complex(_as_float(item[0], spot), 0.0)
                shift = _as_float(item[1], spot)
            else:
                coeff = complex(_as_float(item[0], spot), _as_float(item[1], spot))
                shift = _as_float(item[2], spot)
            terms.append((coeff, shift))
        return gens.finite_combination(base, terms)
    if kind == "sampled":
        _reject_unknown(table, {"kind", "step", "samples", "freq_support"}, where)
        step = _as_float(_need(table, "step", where), where + ".step")
        samples = [_as_float(s, where + ".samples") for s in _need(table, "samples", where)]
        support = table.get("freq_support")
        if support is not None:
            if not isinstance(support, list) or len(support) != 2:
                raise ScenarioError(f"{where}.freq_support must be [lo, hi]")
            support = (_as_float(support[0], where), _as_float(support[1], where))
        return gens.sampled(step, samples, freq_support=support)
    raise ScenarioError(f"{where}.kind {kind!r} not recognized")


def build_set(table: dict, where: str = "[set]"):
    kind = _need(table, "kind", where)
    if kind == "lattice":
        _reject_unknown(table, {"kind", "step", "offset"}, where)
        return point_sets.Lattice(step=_as_float(_need(table, "step", where), where),
                                  offset=_as_float(table.get("offset", 0.0), where))
    if kind == "union":
        _reject_unknown(table, {"kind", "progressions"}, where)
        raw = _need(table, "progressions", where)
        progs = []
        for i, item in enumerate(raw):
            if not isinstance(item, list) or len(item) != 2:
                raise ScenarioError(f"{where}.progressions[{i}] must be [step, offset]")
            progs.append((_as_float(item[0], where), _as_float(item[1], where)))
        return point_sets.UnionOfProgressions(progressions=tuple(progs))
    if kind == "perturbed_lattice":
        _reject_unknown(table, {"kind", "step", "amplitude", "phase", "frequency",
                                "offset"}, where)
        return point_sets.PerturbedLattice(
            step=_as_float(_need(table, "step", where), where),
            amplitude=_as_float(_need(table, "amplitude", where), where),
            phase=_as_float(table.get("phase", 0.0), where),
            frequency=_as_float(table.get("frequency", 1.0), where),
            offset=_as_float(table.get("offset", 0.0), where))
    if kind == "trig_zero":
        _reject_unknown(table, {"kind", "a", "b"}, where)
        return point_sets.TrigZeroSet(a=_as_float(_need(table, "a", where), where),
                                      b=_as_float(_need(table, "b", where), where))
    if kind == "explicit":
        _reject_unknown(table, {"kind", "points"}, where)
        pts = [_as_float(p, where + ".points") for p in _need(table, "points", where)]
        return point_sets.Explicit(points=tuple(pts))
    raise ScenarioError(f"{where}.kind {kind!r} not recognized")


def build_comb(table: dict, where: str = "[comb]") -> PoissonComb:
    _reject_unknown(table, {"period", "components"}, where)
    period = _as_float(_need(table, "period", where), where + ".period")
    raw = _need(table, "components", where)
    comps = []
    for i, item in enumerate(raw):
        spot = f"{where}.components[{i}]"
        if not isinstance(item, dict):
            raise ScenarioError(f"{spot} must be a table")
        _reject_unknown(item, {"offset", "terms"}, spot)
        offset = _as_float(_need(item, "offset", spot), spot + ".offset")
        terms = []
        for j, term in enumerate(_need(item, "terms", spot)):
            tspot = f"{spot}.terms[{j}]"
            if not isinstance(term, list) or len(term) != 3:
                raise ScenarioError(f"{tspot} must be [coeff_re, coeff_im, frequency]")
            terms.append((complex(_as_float(term[0], tspot), _as_float(term[1], tspot)),
                          _as_float(term[2], tspot)))
        comps.append((offset, tuple(terms)))
    return PoissonComb(period=period, components=tuple(comps))


def parse_scenario(path: str) -> Scenario:
    from . import ops                       # late import: ops pulls in the math modules

    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ScenarioError(f"scenario file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        match = re.search(r"line (\d+), column (\d+)", str(exc))
        line = int(match.group(1)) if match else None
        column = int(match.group(2)) if match else None
        raise ScenarioError(f"TOML parse error: {exc}", line=line, column=column)

    _reject_unknown(data, {"seed", "generator", "set", "comb", "operation", "output"},
                    "scenario")
    seed = data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2 ** 64:
        raise ScenarioError("seed must be an unsigned 64-bit integer")

    op_table = _need(data, "operation", "scenario")
    if not isinstance(op_table, dict):
        raise ScenarioError("[operation] must be a table")
    name = _need(op_table, "name", "[operation]")
    spec = ops.OPERATIONS.get(name)
    if spec is None:
        raise ScenarioError(f"[operation].name {name!r} not recognized; "
                            f"available: {sorted(ops.OPERATIONS)}")
    params = {k: v for k, v in op_table.items() if k != "name"}
    _reject_unknown(params, spec.params, "[operation]")

    scenario = Scenario(operation=name, params=params, seed=seed, echo=data)
    if "generator" in data:
        scenario.generator = build_generator(data["generator"])
    if "set" in data:
        scenario.set_descriptor = build_set(data["set"])
    if "comb" in data:
        scenario.comb = build_comb(data["comb"])

    if "output" in data:
        out = data["output"]
        _reject_unknown(out, {"json", "csv"}, "[output]")
        scenario.output_json = str(out.get("json", ""))
        scenario.output_csv = str(out.get("csv", ""))

    for requirement in spec.needs:
        if getattr(scenario, requirement) is None:
            section = {"generator": "[generator]", "set_descriptor": "[set]",
                       "comb": "[comb]"}[requirement]
            raise ScenarioError(f"operation {name!r} requires a {section} section")
    return scenario
