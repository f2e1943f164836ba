"""JSON scenario documents: validation into :class:`Scenario` and export.

Complex numbers are ``[re, im]`` pairs.  Every validation failure raises
:class:`SchemaError` carrying the dotted path of the offending field.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .errors import SchemaError, WeakValueError
from .hilbert import MAX_DIMENSION, HERMITIAN_TOL, Observable, StateVector, make_state, projector_onto
from .scenarios import ALL_CHECKS, Scenario

SCHEMA_VERSION = "1"
DEFAULT_TOLERANCE = 1e-10


def _complex(value, path: str) -> complex:
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        raise SchemaError(path, "expected a [re, im] pair of numbers")
    z = complex(float(value[0]), float(value[1]))
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise SchemaError(path, "non-finite number")
    return z


def _vector(value, dim: int, path: str) -> np.ndarray:
    if not isinstance(value, list):
        raise SchemaError(path, "expected a list of [re, im] pairs")
    if len(value) != dim:
        raise SchemaError(path, f"expected {dim} amplitudes, got {len(value)}")
    return np.array([_complex(v, f"{path}[{i}]") for i, v in enumerate(value)])


def _state(value, labels, path: str) -> StateVector:
    raw = _vector(value, len(labels), path)
    try:
        return make_state(labels, raw)
    except WeakValueError as exc:
        raise SchemaError(path, str(exc)) from None


def _require(doc: dict, key: str, kind, path: str = ""):
    if key not in doc:
        raise SchemaError(f"{path}{key}", "missing required field")
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise SchemaError(f"{path}{key}", f"expected {getattr(kind, '__name__', kind)}")
    return value


def _observable(name: str, spec, labels, posts: dict, path: str) -> Observable:
    dim = len(labels)
    if not isinstance(spec, dict):
        raise SchemaError(path, "expected an object with 'matrix' or 'projector_onto'")
    keys = set(spec) & {"matrix", "projector_onto"}
    if len(keys) != 1:
        raise SchemaError(path, "exactly one of 'matrix' or 'projector_onto' is required")
    if "matrix" in spec:
        mpath = f"{path}.matrix"
        rows = spec["matrix"]
        if not isinstance(rows, list) or len(rows) != dim:
            raise SchemaError(mpath, f"expected {dim} rows")
        m = np.array([_vector(r, dim, f"{mpath}[{i}]") for i, r in enumerate(rows)])
        if np.max(np.abs(m - m.conj().T)) >= HERMITIAN_TOL:
            raise SchemaError(mpath, "not Hermitian")
        return Observable(m, name)
    target = spec["projector_onto"]
    ppath = f"{path}.projector_onto"
    if isinstance(target, str):
        if target not in posts:
            raise SchemaError(ppath, f"unknown post state {target!r}")
        return projector_onto(posts[target], name)
    return projector_onto(_state(target, labels, ppath), name)


def _state_ref(value, scenario_labels, posts, path):
    if isinstance(value, str):
        if value in posts:
            return posts[value]
        if value in scenario_labels:
            raw = np.zeros(len(scenario_labels))
            raw[scenario_labels.index(value)] = 1
            return StateVector(tuple(scenario_labels), raw)
        raise SchemaError(path, f"unknown state {value!r}")
    return _state(value, scenario_labels, path)


def _check(entry, i: int, labels, posts, observables) -> dict:
    path = f"checks[{i}]"
    if isinstance(entry, str):
        entry = {"name": entry}
    if not isinstance(entry, dict) or not isinstance(entry.get("name"), str):
        raise SchemaError(path, "expected a check name or an object with a 'name'")
    name = entry["name"]
    if name not in ALL_CHECKS:
        raise SchemaError(f"{path}.name", f"unknown check {name!r}; valid: {', '.join(ALL_CHECKS)}")
    out: dict[str, Any] = {"name": name}
    if "observables" in entry:
        names = entry["observables"]
        if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
            raise SchemaError(f"{path}.observables", "expected a list of observable names")
        for j, n in enumerate(names):
            if n not in observables:
                raise SchemaError(f"{path}.observables[{j}]", f"unknown observable {n!r}")
        out["observables"] = list(names)
    if name == "equivalence" and len(out.get("observables", [])) != 2:
        raise SchemaError(f"{path}.observables", "equivalence needs exactly two observable names")
    if name == "consistency2" and "observables" in out and len(out["observables"]) != 2:
        raise SchemaError(f"{path}.observables", "consistency2 takes exactly two observable names")
    for key in ("projectors", "intermediates"):
        if key in entry:
            refs = entry[key]
            if not isinstance(refs, list) or not refs:
                raise SchemaError(f"{path}.{key}", "expected a non-empty list of states")
            out[key] = [_state_ref(r, labels, posts, f"{path}.{key}[{j}]") for j, r in enumerate(refs)]
            out[f"{key}_raw"] = refs
    return out


def scenario_from_document(doc: Any) -> Scenario:
    """Validate a parsed document and build the corresponding :class:`Scenario`."""
    if not isinstance(doc, dict):
        raise SchemaError("", "document must be a JSON object")
    version = _require(doc, "schema_version", str)
    if version != SCHEMA_VERSION:
        raise SchemaError("schema_version", f"unsupported version {version!r}; expected {SCHEMA_VERSION!r}")
    dim = _require(doc, "dimension", int)
    if not 1 <= dim <= MAX_DIMENSION:
        raise SchemaError("dimension", f"must be between 1 and {MAX_DIMENSION}")
    labels = _require(doc, "labels", list)
    if len(labels) != dim or not all(isinstance(l, str) for l in labels):
        raise SchemaError("labels", f"expected {dim} strings")
    if len(set(labels)) != dim:
        raise SchemaError("labels", "labels must be unique")
    labels = tuple(labels)
    pre = _state(doc.get("pre_state"), labels, "pre_state") if "pre_state" in doc else None
    if pre is None:
        raise SchemaError("pre_state", "missing required field")

    raw_posts = _require(doc, "post_states", dict)
    posts = {name: _state(v, labels, f"post_states.{name}") for name, v in raw_posts.items()}

    raw_obs = _require(doc, "observables", dict)
    observables = {name: _observable(name, spec, labels, posts, f"observables.{name}")
                   for name, spec in raw_obs.items()}

    raw_checks = doc.get("checks", [])
    if not isinstance(raw_checks, list):
        raise SchemaError("checks", "expected a list")
    checks = [_check(c, i, labels, posts, observables) for i, c in enumerate(raw_checks)]

    tol = doc.get("tolerance", DEFAULT_TOLERANCE)
    if not isinstance(tol, (int, float)) or isinstance(tol, bool) or not tol > 0:
        raise SchemaError("tolerance", "expected a positive number")
    floor = doc.get("overlap_floor", 1e-12)
    if not isinstance(floor, (int, float)) or isinstance(floor, bool) or not floor > 0:
        raise SchemaError("overlap_floor", "expected a positive number")
    return Scenario(labels, pre, posts, observables, checks, float(tol), float(floor))


def load_document(path: str | Path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError("", f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"invalid JSON: {exc}") from None
    return scenario_from_document(doc)


def _pairs(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in v]


def _export_check(check) -> Any:
    if isinstance(check, str):
        return check
    if set(check) == {"name"}:
        return check["name"]
    out = {"name": check["name"]}
    if "observables" in check:
        out["observables"] = list(check["observables"])
    for key in ("projectors", "intermediates"):
        if f"{key}_raw" in check:
            out[key] = check[f"{key}_raw"]
        elif key in check:
            out[key] = [_pairs(s.amplitudes) for s in check[key]]
    return out


def scenario_to_document(scenario: Scenario) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "dimension": scenario.dimension,
        "labels": list(scenario.labels),
        "pre_state": _pairs(scenario.pre_state.amplitudes),
        "post_states": {n: _pairs(s.amplitudes) for n, s in scenario.post_states.items()},
        "observables": {n: {"matrix": [_pairs(r) for r in A.matrix]}
                        for n, A in scenario.observables.items()},
        "checks": [_export_check(c) for c in scenario.checks],
        "tolerance": scenario.tolerance,
        "overlap_floor": scenario.overlap_floor,
    }


def dump_document(scenario: Scenario) -> str:
    return json.dumps(scenario_to_document(scenario), indent=2) + "\n"
