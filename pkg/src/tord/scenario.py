"""JSON scenario files: parsing, validation and serialization.

See ``docs/scenario_format.md`` for the schema. Matrices are lists of rows;
each entry is a number or a ``[re, im]`` pair. The names ``sigma_x``,
``sigma_y``, ``sigma_z`` and ``identity`` are accepted as shorthands.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import TordError, ValidationError
from .matcore import SIGMA_X, SIGMA_Y, SIGMA_Z, as_state
from .propagate import DEFAULT_TOL, MAX_STEPS, MAX_DYSON_ORDER, GridSpec
from .system import DEGENERACY_TOL, BasisSpec, CouplingTerm, Envelope, KickSpec, SystemSpec

TASK_TYPES = ("evolve", "compare", "dyson", "split", "spectral", "report", "sweep")

DEFAULT_SETTINGS = {
    "tol": DEFAULT_TOL,
    "max_steps": MAX_STEPS,
    "degeneracy_tol": DEGENERACY_TOL,
    "pair_samples": 16,
}

_NAMED = {"sigma_x": SIGMA_X, "sigma_y": SIGMA_Y, "sigma_z": SIGMA_Z}


class ScenarioError(TordError, ValueError):
    """A scenario file failed to load; ``where`` names the offending field or line."""

    def __init__(self, where, message):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass
class Scenario:
    name: str
    system: SystemSpec
    grid: GridSpec
    initial_state: object = 0  # basis index or tuple of complex amplitudes
    tasks: list = field(default_factory=list)
    settings: dict = field(default_factory=lambda: dict(DEFAULT_SETTINGS))

    def psi0(self):
        if isinstance(self.initial_state, int):
            return self.initial_state
        return np.array(self.initial_state, dtype=complex)


def _number(value, where, positive=False, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(where, f"expected a number, got {value!r}")
    if integer and int(value) != value:
        raise ScenarioError(where, f"expected an integer, got {value!r}")
    if not np.isfinite(value):
        raise ScenarioError(where, "must be finite")
    if positive and not value > 0:
        raise ScenarioError(where, "must be positive")
    return int(value) if integer else float(value)


def _complex(value, where):
    if isinstance(value, list):
        if len(value) != 2:
            raise ScenarioError(where, "complex entries are [re, im] pairs")
        return complex(_number(value[0], where), _number(value[1], where))
    return complex(_number(value, where))


def _matrix(value, dim, where):
    if isinstance(value, str):
        if value == "identity":
            return np.eye(dim, dtype=complex)
        if value not in _NAMED:
            raise ScenarioError(where, f"unknown matrix name {value!r}")
        if dim != 2:
            raise ScenarioError(where, f"{value} needs a two-level basis, basis has {dim} states")
        return _NAMED[value].copy()
    if not isinstance(value, list) or len(value) != dim:
        raise ScenarioError(where, f"expected {dim} rows")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != dim:
            raise ScenarioError(f"{where}[{i}]", f"expected {dim} entries")
        rows.append([_complex(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)])
    return np.array(rows, dtype=complex)


def _require(obj, key, where):
    if not isinstance(obj, dict):
        raise ScenarioError(where, "expected an object")
    if key not in obj:
        raise ScenarioError(f"{where}.{key}", "missing")
    return obj[key]


def _envelope(doc, where):
    kind = _require(doc, "kind", where)
    amp = _number(doc.get("amplitude", 1.0), f"{where}.amplitude")
    try:
        if kind == "constant":
            return Envelope.constant(amp)
        if kind == "rectangular":
            return Envelope.rectangular(
                amp,
                _number(_require(doc, "t_on", where), f"{where}.t_on"),
                _number(_require(doc, "t_off", where), f"{where}.t_off"),
            )
        if kind == "gaussian":
            return Envelope.gaussian(
                amp,
                _number(_require(doc, "t0", where), f"{where}.t0"),
                _number(_require(doc, "sigma", where), f"{where}.sigma"),
            )
        if kind == "tabulated":
            times = [_number(x, f"{where}.times[{i}]") for i, x in enumerate(_require(doc, "times", where))]
            values = [_number(x, f"{where}.values[{i}]") for i, x in enumerate(_require(doc, "values", where))]
            return Envelope.tabulated(times, values, amp)
    except ValidationError as exc:
        raise ScenarioError(where, str(exc)) from None
    raise ScenarioError(f"{where}.kind", f"unknown envelope kind {kind!r}")


def _task(doc, i, dim):
    where = f"tasks[{i}]"
    kind = _require(doc, "type", where)
    if kind not in TASK_TYPES:
        raise ScenarioError(f"{where}.type", f"unknown task {kind!r}; expected one of {TASK_TYPES}")
    task = dict(doc)
    if kind == "evolve":
        task["samples"] = _number(doc.get("samples", 101), f"{where}.samples", positive=True, integer=True)
    elif kind == "dyson":
        n = _number(_require(doc, "n", where), f"{where}.n", integer=True)
        if not 0 <= n <= MAX_DYSON_ORDER:
            raise ScenarioError(f"{where}.n", f"order must be in 0..{MAX_DYSON_ORDER}")
        task["n"] = n
    elif kind == "spectral":
        etas = _require(doc, "etas", where)
        if not isinstance(etas, list) or not etas:
            raise ScenarioError(f"{where}.etas", "expected a non-empty list")
        task["etas"] = [_number(e, f"{where}.etas[{j}]", positive=True) for j, e in enumerate(etas)]
        xr = _require(doc, "x_range", where)
        if not isinstance(xr, list) or len(xr) != 3:
            raise ScenarioError(f"{where}.x_range", "expected [start, stop, count]")
        task["x_range"] = [
            _number(xr[0], f"{where}.x_range[0]"),
            _number(xr[1], f"{where}.x_range[1]"),
            _number(xr[2], f"{where}.x_range[2]", positive=True, integer=True),
        ]
    elif kind == "sweep":
        axis = _require(doc, "axis", where)
        if not isinstance(axis, str):
            raise ScenarioError(f"{where}.axis", "expected a dotted parameter path")
        values = _require(doc, "values", where)
        if not isinstance(values, list) or not values:
            raise ScenarioError(f"{where}.values", "expected a non-empty list")
        task["values"] = [_number(v, f"{where}.values[{j}]") for j, v in enumerate(values)]
    return task


def from_dict(doc) -> Scenario:
    """Build a :class:`Scenario`, re-checking every model invariant."""
    if not isinstance(doc, dict):
        raise ScenarioError("<root>", "expected a JSON object")
    name = doc.get("name", "scenario")
    if not isinstance(name, str):
        raise ScenarioError("name", "expected a string")

    bdoc = _require(doc, "basis", "<root>")
    energies = _require(bdoc, "energies", "basis")
    if not isinstance(energies, list) or not energies:
        raise ScenarioError("basis.energies", "expected a non-empty list")
    energies = [_number(e, f"basis.energies[{i}]") for i, e in enumerate(energies)]
    labels = bdoc.get("labels", [str(i + 1) for i in range(len(energies))])
    if not isinstance(labels, list) or len(labels) != len(energies):
        raise ScenarioError("basis.labels", "must match basis.energies in length")
    basis = BasisSpec(tuple(str(x) for x in labels), energies)
    dim = basis.dim

    terms = []
    for i, tdoc in enumerate(doc.get("terms", [])):
        where = f"terms[{i}]"
        env = _envelope(_require(tdoc, "envelope", where), f"{where}.envelope")
        w = _matrix(_require(tdoc, "matrix", where), dim, f"{where}.matrix")
        try:
            terms.append(CouplingTerm(env, w))
        except ValidationError as exc:
            raise ScenarioError(f"{where}.matrix", str(exc)) from None

    kicks = []
    for i, kdoc in enumerate(doc.get("kicks", [])):
        where = f"kicks[{i}]"
        t0 = _number(_require(kdoc, "t0", where), f"{where}.t0")
        theta = _number(_require(kdoc, "theta", where), f"{where}.theta")
        w = _matrix(_require(kdoc, "matrix", where), dim, f"{where}.matrix")
        try:
            kicks.append(KickSpec(t0, theta, w))
        except ValidationError as exc:
            raise ScenarioError(f"{where}.matrix", str(exc)) from None

    try:
        system = SystemSpec(basis, terms, kicks)
    except ValidationError as exc:
        raise ScenarioError("<system>", str(exc)) from None

    gdoc = _require(doc, "grid", "<root>")
    try:
        grid = GridSpec(
            _number(_require(gdoc, "t1", "grid"), "grid.t1"),
            _number(_require(gdoc, "t2", "grid"), "grid.t2"),
            _number(gdoc.get("steps", 64), "grid.steps", positive=True, integer=True),
        )
    except ValidationError as exc:
        raise ScenarioError("grid", str(exc)) from None

    init = doc.get("initial_state", 0)
    if isinstance(init, bool):
        raise ScenarioError("initial_state", "expected an index or amplitude list")
    if isinstance(init, int):
        if not 0 <= init < dim:
            raise ScenarioError("initial_state", f"index {init} out of range for {dim} states")
    elif isinstance(init, list):
        amps = [_complex(a, f"initial_state[{i}]") for i, a in enumerate(init)]
        try:
            as_state(amps, dim, "initial_state")
        except (ValidationError, ValueError) as exc:
            raise ScenarioError("initial_state", str(exc)) from None
        init = tuple(amps)
    else:
        raise ScenarioError("initial_state", "expected an index or amplitude list")

    tasks = doc.get("tasks", [])
    if not isinstance(tasks, list):
        raise ScenarioError("tasks", "expected a list")
    tasks = [_task(t, i, dim) for i, t in enumerate(tasks)]

    settings = dict(DEFAULT_SETTINGS)
    sdoc = doc.get("settings", {})
    if not isinstance(sdoc, dict):
        raise ScenarioError("settings", "expected an object")
    for key, value in sdoc.items():
        if key not in DEFAULT_SETTINGS:
            raise ScenarioError(f"settings.{key}", "unknown setting")
        integer = key in ("max_steps", "pair_samples")
        settings[key] = _number(value, f"settings.{key}", positive=True, integer=integer)

    scenario = Scenario(name, system, grid, init, tasks, settings)
    for task in tasks:
        if task["type"] == "sweep":
            resolve_axis(doc, task["axis"])
    return scenario


def _encode_complex(z):
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def _encode_matrix(m):
    return [[_encode_complex(z) for z in row] for row in np.asarray(m)]


def _encode_envelope(env: Envelope):
    out = {"kind": env.kind, "amplitude": env.amplitude}
    if env.kind == "rectangular":
        out.update(t_on=env.t_on, t_off=env.t_off)
    elif env.kind == "gaussian":
        out.update(t0=env.t0, sigma=env.sigma)
    elif env.kind == "tabulated":
        out.update(times=[float(x) for x in env.times], values=[float(x) for x in env.values])
    return out


def to_dict(sc: Scenario) -> dict:
    """Serialize with explicit matrices; ``from_dict(to_dict(s))`` reproduces ``s``."""
    b = sc.system.basis
    init = sc.initial_state
    return {
        "name": sc.name,
        "basis": {"labels": list(b.labels), "energies": [float(e) for e in b.energies]},
        "terms": [
            {"envelope": _encode_envelope(t.envelope), "matrix": _encode_matrix(t.w)}
            for t in sc.system.terms
        ],
        "kicks": [
            {"t0": k.t0, "theta": k.theta, "matrix": _encode_matrix(k.w)} for k in sc.system.kicks
        ],
        "grid": {"t1": sc.grid.t1, "t2": sc.grid.t2, "steps": sc.grid.steps},
        "initial_state": init if isinstance(init, int) else [_encode_complex(a) for a in init],
        "tasks": copy.deepcopy(sc.tasks),
        "settings": dict(sc.settings),
    }


def load(path) -> tuple:
    """Read a scenario file; returns ``(Scenario, raw_document)``."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return from_dict(doc), doc


def _split_path(path):
    return [int(p) if p.lstrip("-").isdigit() else p for p in path.split(".")]


def resolve_axis(doc, path):
    """Return the numeric value at a dotted path such as ``kicks.0.theta``."""
    node = doc
    for part in _split_path(path):
        try:
            node = node[part]
        except (KeyError, IndexError, TypeError):
            raise ScenarioError(f"axis {path!r}", "does not resolve to an existing parameter") from None
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        raise ScenarioError(f"axis {path!r}", f"resolves to {node!r}, which is not numeric")
    return node


def with_value(doc, path, value) -> dict:
    """Deep copy of ``doc`` with the parameter at ``path`` replaced."""
    resolve_axis(doc, path)
    out = copy.deepcopy(doc)
    parts = _split_path(path)
    node = out
    for part in parts[:-1]:
        node = node[part]
    node[parts[-1]] = value
    return out
