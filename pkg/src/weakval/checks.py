"""Run the residual checks requested by a scenario."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import engine
from .errors import SchemaError
from .hilbert import StateVector, basis_state, is_orthonormal_basis
from .scenarios import Scenario

NEEDS_BASIS = ("consistency2", "born", "variance")


@dataclass(frozen=True)
class CheckResult:
    name: str
    detail: str
    residual: float
    passed: bool
    skipped: tuple[str, ...] = ()


def _computational_basis(scenario: Scenario) -> list[StateVector]:
    return [basis_state(scenario.labels, l) for l in scenario.labels]


def _normalize(check) -> dict:
    return {"name": check} if isinstance(check, str) else check


def run_check(scenario: Scenario, check, index: int = 0) -> CheckResult:
    check = _normalize(check)
    name = check["name"]
    pre = scenario.pre_state
    posts = scenario.post_basis
    labels = scenario.post_labels
    floor = scenario.overlap_floor
    obs = scenario.observables
    if name in NEEDS_BASIS and not is_orthonormal_basis(posts, engine.BASIS_TOL):
        raise SchemaError("post_states", f"not a complete orthonormal basis (required by checks[{index}] {name})")

    skipped: tuple[str, ...] = ()
    if name == "consistency1":
        projectors = check.get("projectors") or _computational_basis(scenario)
        if not is_orthonormal_basis(projectors, engine.BASIS_TOL):
            raise SchemaError(f"checks[{index}].projectors", "not a complete orthonormal set")
        report = engine.check_consistency_one(pre, posts, projectors, labels, floor)
        residual, skipped = report.max, tuple(report.skipped)
        detail = f"{len(projectors)} projectors x {len(posts)} post states"
    elif name == "consistency2":
        pairs = ([tuple(check["observables"])] if "observables" in check
                 else list(product(obs, repeat=2)))
        residual = max(engine.check_consistency_two(pre, posts, obs[a], obs[b], floor) for a, b in pairs)
        detail = f"{len(pairs)} observable pairs"
    elif name == "born":
        names = check.get("observables") or list(obs)
        residual = max(engine.born_residual(pre, posts, obs[n], overlap_floor=floor) for n in names)
        detail = f"{len(names)} observables"
    elif name == "variance":
        names = check.get("observables") or list(obs)
        residual = max(abs(engine.variance_via_weak_values(pre, posts, obs[n], floor)
                           - engine.variance(pre, obs[n])) for n in names)
        detail = f"{len(names)} observables"
    elif name == "abl":
        intermediates = check.get("intermediates") or _computational_basis(scenario)
        residual, missing = 0.0, []
        for label, post in zip(labels, posts):
            if abs(engine.inner_product(post, pre)) < floor:
                missing.append(label)
                continue
            for a in intermediates:
                residual = max(residual, engine.abl_probability(pre, post, a, floor).residual)
        skipped = tuple(missing)
        detail = f"{len(intermediates)} intermediates x {len(posts)} post states"
    elif name == "equivalence":
        a, b = check["observables"]
        report = engine.weak_equivalence_residual(pre, posts, obs[a], obs[b], labels, floor)
        distance = engine.observable_distance(pre, obs[a], obs[b])
        residual, skipped = max(report.max, distance), tuple(report.skipped)
        detail = f"{a} vs {b}"
    else:
        raise SchemaError(f"checks[{index}].name", f"unknown check {name!r}")
    return CheckResult(name, detail, float(residual), residual < scenario.tolerance, skipped)


def run_checks(scenario: Scenario) -> list[CheckResult]:
    return [run_check(scenario, c, i) for i, c in enumerate(scenario.checks)]
