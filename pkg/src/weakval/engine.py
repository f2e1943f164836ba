"""Weak values, weak-value tables and the probabilistic identities they obey.

Every identity is exposed as a residual so callers can decide on tolerances.
Columns whose post-selected state is orthogonal to the pre-selected state
have no weak value; they are marked undefined and, wherever a sum over the
basis is needed, contribute through the product form ``<psi|x><x|A|psi>``
(the finite limit of ``Pr(x) * h_A(x)``) rather than ``0 * inf``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidBasis, NullPostSelection
from .hilbert import (
    Observable,
    StateVector,
    _same_space,
    inner_product,
    is_orthonormal_basis,
    projector_onto,
)

OVERLAP_FLOOR = 1e-12
BASIS_TOL = 1e-10


def weak_value(pre: StateVector, post: StateVector, A: Observable,
               overlap_floor: float = OVERLAP_FLOOR) -> complex:
    """<post|A|pre> / <post|pre>."""
    overlap = inner_product(post, pre)
    if abs(overlap) < overlap_floor:
        raise NullPostSelection(
            f"|<post|pre>| = {abs(overlap):.3g} is below the overlap floor {overlap_floor:g}")
    return complex(np.vdot(post.amplitudes, A.apply(pre))) / overlap


def _require_basis(states: Sequence[StateVector], what: str = "post_basis"):
    if not is_orthonormal_basis(states, BASIS_TOL):
        raise InvalidBasis(f"{what} is not a complete orthonormal basis")


@dataclass(frozen=True, eq=False)
class WeakValueTable:
    """Weak values of several observables over a set of post-selections.

    ``cells[i, j]`` is the weak value of row ``i`` at post-state ``j``; it is
    NaN where ``defined[j]`` is false.  ``summary_rows`` holds extra rows such
    as ``"Sum"`` (over a projector resolution) or ``"Sum of squared"``, with
    the matching reduction of the Average column in ``summary_averages``.
    """

    post_labels: tuple[str, ...]
    row_labels: tuple[str, ...]
    weights: np.ndarray
    cells: np.ndarray
    defined: np.ndarray
    row_averages: np.ndarray
    summary_rows: dict[str, np.ndarray] = field(default_factory=dict)
    summary_averages: dict[str, complex] = field(default_factory=dict)
    formulas: dict[tuple[str, str], str] | None = None

    @property
    def column_sums(self) -> np.ndarray | None:
        return self.summary_rows.get("Sum")

    def cell(self, row: str, post: str) -> complex | None:
        j = self.post_labels.index(post)
        if not self.defined[j]:
            return None
        return complex(self.cells[self.row_labels.index(row), j])

    def row(self, row: str) -> np.ndarray:
        return self.cells[self.row_labels.index(row)]

    def average(self, row: str) -> complex:
        return complex(self.row_averages[self.row_labels.index(row)])


def _is_projector_resolution(observables: Sequence[Observable], tol: float = 1e-10) -> bool:
    dim = observables[0].dimension
    total = np.zeros((dim, dim), dtype=complex)
    for A in observables:
        m = A.matrix
        if np.max(np.abs(m @ m - m)) > tol:
            return False
        total += m
    return bool(np.max(np.abs(total - np.eye(dim))) < tol)


def weak_value_table(pre: StateVector, post_basis: Sequence[StateVector],
                     observables: Mapping[str, Observable] | Sequence[Observable],
                     post_labels: Sequence[str] | None = None,
                     complete: bool = True,
                     sums: bool | None = None,
                     overlap_floor: float = OVERLAP_FLOOR) -> WeakValueTable:
    """Tabulate weak values of ``observables`` for every state of ``post_basis``.

    With ``complete=True`` the post states must form an orthonormal basis;
    pass ``complete=False`` for column views over arbitrary post states.
    ``sums=None`` adds a ``"Sum"`` row only when the observables resolve the
    identity into orthogonal projectors.
    """
    if isinstance(observables, Mapping):
        rows = list(observables.items())
    else:
        rows = [(A.name, A) for A in observables]
    if not rows:
        raise ValueError("at least one observable is required")
    for _, A in rows:
        if A.dimension != pre.dimension:
            raise DimensionMismatch(f"observable {A.name!r} has dimension {A.dimension}")
    for x in post_basis:
        _same_space(x, pre)
    if complete:
        _require_basis(post_basis)
    if post_labels is None:
        post_labels = [f"x{j}" for j in range(len(post_basis))]

    posts = np.column_stack([x.amplitudes for x in post_basis])
    overlaps = posts.conj().T @ pre.amplitudes                       # <x|psi>
    applied = np.column_stack([A.apply(pre) for _, A in rows])
    numerators = (posts.conj().T @ applied).T                       # <x|A|psi>
    defined = np.abs(overlaps) >= overlap_floor

    cells = np.full(numerators.shape, np.nan + 1j * np.nan)
    cells[:, defined] = numerators[:, defined] / overlaps[defined]
    weights = np.abs(overlaps) ** 2
    averages = (numerators * overlaps.conj()).sum(axis=1)          # sum <psi|x><x|A|psi>

    summary: dict[str, np.ndarray] = {}
    summary_avg: dict[str, complex] = {}
    if sums is None:
        sums = _is_projector_resolution([A for _, A in rows])
    if sums:
        summary["Sum"] = cells.sum(axis=0)  # NaN stays NaN in undefined columns
        summary_avg["Sum"] = complex(averages.sum())
    return WeakValueTable(
        post_labels=tuple(post_labels),
        row_labels=tuple(name for name, _ in rows),
        weights=weights,
        cells=cells,
        defined=defined,
        row_averages=averages,
        summary_rows=summary,
        summary_averages=summary_avg,
    )


@dataclass(frozen=True)
class ResidualReport:
    """Per-post-state residuals; ``None`` marks a skipped null post-selection."""

    labels: tuple[str, ...]
    residuals: tuple[float | None, ...]

    @property
    def evaluated(self) -> list[float]:
        return [r for r in self.residuals if r is not None]

    @property
    def skipped(self) -> list[str]:
        return [l for l, r in zip(self.labels, self.residuals) if r is None]

    @property
    def max(self) -> float:
        return max(self.evaluated, default=0.0)

    def __getitem__(self, label: str) -> float | None:
        return self.residuals[self.labels.index(label)]


def _labels_for(states: Sequence[StateVector], labels: Sequence[str] | None):
    return tuple(labels) if labels is not None else tuple(f"x{j}" for j in range(len(states)))


def check_consistency_one(pre: StateVector, post_basis: Sequence[StateVector],
                          projector_states: Sequence[StateVector],
                          post_labels: Sequence[str] | None = None,
                          overlap_floor: float = OVERLAP_FLOOR) -> ResidualReport:
    """|sum_m w(|m><m|; x) - 1| for every post state x."""
    _require_basis(projector_states, "projector_states")
    projectors = [projector_onto(m) for m in projector_states]
    residuals: list[float | None] = []
    for x in post_basis:
        try:
            total = sum(weak_value(pre, x, P, overlap_floor) for P in projectors)
        except NullPostSelection:
            residuals.append(None)
            continue
        residuals.append(abs(total - 1.0))
    return ResidualReport(_labels_for(post_basis, post_labels), tuple(residuals))


def _weighted_pairs(pre: StateVector, post_basis: Sequence[StateVector],
                    A: Observable, B: Observable, overlap_floor: float) -> complex:
    """sum_x conj(h_A(x)) Pr(x) h_B(x) with the product-form limit on null columns."""
    total = 0j
    a_psi, b_psi = A.apply(pre), B.apply(pre)
    for x in post_basis:
        overlap = inner_product(x, pre)
        if abs(overlap) < overlap_floor:
            total += np.vdot(a_psi, x.amplitudes) * np.vdot(x.amplitudes, b_psi)
            continue
        h_a = weak_value(pre, x, A, overlap_floor)
        h_b = weak_value(pre, x, B, overlap_floor)
        total += h_a.conjugate() * abs(overlap) ** 2 * h_b
    return complex(total)


def check_consistency_two(pre: StateVector, post_basis: Sequence[StateVector],
                          A: Observable, B: Observable,
                          overlap_floor: float = OVERLAP_FLOOR) -> float:
    """|sum_x conj(h_A) Pr h_B - <psi|AB|psi>|."""
    _require_basis(post_basis)
    target = np.vdot(pre.amplitudes, A.matrix @ B.matrix @ pre.amplitudes)
    return float(abs(_weighted_pairs(pre, post_basis, A, B, overlap_floor) - target))


def born_residual(pre: StateVector, post_basis: Sequence[StateVector], A: Observable,
                  real_part_only: bool = False,
                  overlap_floor: float = OVERLAP_FLOOR) -> float:
    """|sum_x Pr(x) h_A(x) - <psi|A|psi>| over a complete basis.

    ``real_part_only`` averages Re h_A instead, which is sufficient whenever
    the expectation value is real.
    """
    table = weak_value_table(pre, post_basis, [A], overlap_floor=overlap_floor, sums=False)
    if real_part_only:
        cells = np.where(table.defined, table.cells[0].real, 0.0)
        average = float(np.sum(table.weights * cells))
    else:
        average = table.row_averages[0]
    return float(abs(average - A.expectation(pre)))


def variance_via_weak_values(pre: StateVector, post_basis: Sequence[StateVector],
                             A: Observable, overlap_floor: float = OVERLAP_FLOOR) -> float:
    """sum |h_A|^2 Pr - (sum h_A Pr)^2, the second term squared as a complex number."""
    _require_basis(post_basis)
    second = _weighted_pairs(pre, post_basis, A, A, overlap_floor)
    first = 0j
    for x in post_basis:
        overlap = inner_product(x, pre)
        if abs(overlap) < overlap_floor:
            continue  # contributes <psi|x><x|A|psi> = 0
        first += abs(overlap) ** 2 * weak_value(pre, x, A, overlap_floor)
    var = second - first ** 2
    if abs(var.imag) > 1e-10:
        raise ArithmeticError(f"variance has imaginary part {var.imag:.3g}")
    return float(var.real)


def variance(pre: StateVector, A: Observable) -> float:
    """<psi|(A - <A>)^2|psi> computed directly."""
    shifted = A.matrix - A.expectation(pre).real * np.eye(A.dimension)
    v = shifted @ pre.amplitudes
    return float(np.vdot(v, v).real)


def joint_probability(pre: StateVector, a: StateVector, B: Observable) -> complex:
    """<psi|a><a|B|psi>; equals <psi|AB|psi> for A = |a><a|."""
    _same_space(a, pre)
    return complex(np.vdot(pre.amplitudes, a.amplitudes) * np.vdot(a.amplitudes, B.apply(pre)))


@dataclass(frozen=True)
class ABLResult:
    modulus_squared: float
    factual_probability: float
    transition_form: float
    residual: float


def abl_probability(pre: StateVector, post: StateVector, intermediate: StateVector,
                    overlap_floor: float = OVERLAP_FLOOR) -> ABLResult:
    """Squared modulus of the projector weak value and the factual probability.

    The modulus is computed from the weak value and, independently, from the
    three transition probabilities; ``residual`` is their difference.
    """
    w = weak_value(pre, post, projector_onto(intermediate), overlap_floor)
    mod2 = abs(w) ** 2
    p_a_psi = abs(inner_product(intermediate, pre)) ** 2
    p_phi_a = abs(inner_product(post, intermediate)) ** 2
    p_phi_psi = abs(inner_product(post, pre)) ** 2
    transition = p_a_psi * p_phi_a / p_phi_psi
    return ABLResult(mod2, mod2 * p_phi_psi, transition, abs(mod2 - transition))


def observable_distance(pre: StateVector, A: Observable, B: Observable) -> float:
    """<psi|(A - B)^2|psi>; zero iff A and B act identically on psi."""
    if A.dimension != B.dimension or A.dimension != pre.dimension:
        raise DimensionMismatch("observables and state must share a dimension")
    v = (A.matrix - B.matrix) @ pre.amplitudes
    return float(np.vdot(v, v).real)


def distance_via_weak_values(pre: StateVector, post_basis: Sequence[StateVector],
                             A: Observable, B: Observable,
                             overlap_floor: float = OVERLAP_FLOOR) -> float:
    """sum_x Pr(x) |h_A(x) - h_B(x)|^2 over a complete basis."""
    _require_basis(post_basis)
    diff = Observable(A.matrix - B.matrix, f"{A.name}-{B.name}")
    return float(_weighted_pairs(pre, post_basis, diff, diff, overlap_floor).real)


def weak_equivalence_residual(pre: StateVector, post_basis: Sequence[StateVector],
                              A: Observable, B: Observable,
                              post_labels: Sequence[str] | None = None,
                              overlap_floor: float = OVERLAP_FLOOR) -> ResidualReport:
    """|w_A(x) - w_B(x)| per post state; null post-selections are skipped."""
    residuals: list[float | None] = []
    for x in post_basis:
        try:
            residuals.append(abs(weak_value(pre, x, A, overlap_floor)
                                 - weak_value(pre, x, B, overlap_floor)))
        except NullPostSelection:
            residuals.append(None)
    return ResidualReport(_labels_for(post_basis, post_labels), tuple(residuals))
