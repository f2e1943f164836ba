"""Built-in Hardy-paradox and spin-1/2 scenarios and their weak-value tables.

Hardy basis ordering is positron path (x) electron path over
``I_pI_e, I_pO_e, O_pI_e, O_pO_e``.  Detector states are
``B = (I + O)/sqrt(2)`` and ``D = (I - O)/sqrt(2)`` for both particles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import engine
from .engine import (
    WeakValueTable,
    abl_probability,
    observable_distance,
    weak_value,
    weak_value_table,
)
from .hilbert import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    Observable,
    StateVector,
    basis_state,
    identity,
    make_state,
    projector_onto,
    spectral_decomposition,
    tensor_operator,
    tensor_product,
)

HARDY_LABELS = ("I_pI_e", "I_pO_e", "O_pI_e", "O_pO_e")
DETECTOR_LABELS = ("D_pD_e", "D_pB_e", "B_pD_e", "B_pB_e")
SQRT1_2 = 1 / math.sqrt(2)

ALL_CHECKS = ("consistency1", "consistency2", "born", "variance", "abl", "equivalence")


@dataclass(frozen=True, eq=False)
class Scenario:
    """A pre-selection together with named post-selections and observables.

    ``checks`` holds check specifications as understood by the CLI: plain
    names or dicts with a ``"name"`` key plus parameters.
    """

    labels: tuple[str, ...]
    pre_state: StateVector
    post_states: dict[str, StateVector]
    observables: dict[str, Observable]
    checks: list = field(default_factory=list)
    tolerance: float = 1e-10
    overlap_floor: float = engine.OVERLAP_FLOOR

    def __post_init__(self):
        for name, s in self.post_states.items():
            if s.labels != self.labels:
                raise ValueError(f"post state {name!r} uses different labels")
        if self.pre_state.labels != self.labels:
            raise ValueError("pre_state uses different labels")
        for name, A in self.observables.items():
            if A.dimension != self.dimension:
                raise ValueError(f"observable {name!r} has dimension {A.dimension}")

    @property
    def dimension(self) -> int:
        return len(self.labels)

    @property
    def post_basis(self) -> list[StateVector]:
        return list(self.post_states.values())

    @property
    def post_labels(self) -> tuple[str, ...]:
        return tuple(self.post_states)


# -- Hardy ---------------------------------------------------------------

@dataclass(frozen=True)
class HardyCoefficients:
    """Amplitudes of |I_pI_e>, |I_pO_e>, |O_pI_e>, |O_pO_e>."""

    eta: complex
    x: complex
    y: complex
    z: complex

    def __post_init__(self):
        norm = abs(self.eta) ** 2 + abs(self.x) ** 2 + abs(self.y) ** 2 + abs(self.z) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"Hardy coefficients are not normalized (norm^2 = {norm!r})")

    @classmethod
    def from_raw(cls, eta, x, y, z) -> "HardyCoefficients":
        v = make_state(HARDY_LABELS, [eta, x, y, z]).amplitudes
        return cls(*(complex(c) for c in v))

    @classmethod
    def standard(cls) -> "HardyCoefficients":
        return cls.from_raw(0, 1, 1, 1)

    def as_array(self) -> np.ndarray:
        return np.array([self.eta, self.x, self.y, self.z], dtype=complex)

    @property
    def zetas(self) -> dict[str, complex]:
        e, x, y, z = self.eta, self.x, self.y, self.z
        return {
            "D_pD_e": (e - x - y + z) / 2,
            "D_pB_e": (e + x - y - z) / 2,
            "B_pD_e": (e - x + y - z) / 2,
            "B_pB_e": (e + x + y + z) / 2,
        }


def _path(label: str) -> StateVector:
    return basis_state(("I", "O"), label)


_B = StateVector(("I", "O"), np.array([1, 1]) * SQRT1_2)
_D = StateVector(("I", "O"), np.array([1, -1]) * SQRT1_2)
_I, _O = _path("I"), _path("O")


def _hardy_state(positron: StateVector, electron: StateVector) -> StateVector:
    return tensor_product(positron, electron).relabel(HARDY_LABELS)


def hardy_detector_states() -> dict[str, StateVector]:
    det = {"D": _D, "B": _B}
    return {f"{p}_p{e}_e": _hardy_state(det[p], det[e]) for p in "DB" for e in "DB"}


def hardy_path_states() -> dict[str, StateVector]:
    return {lab: basis_state(HARDY_LABELS, lab) for lab in HARDY_LABELS}


def hardy_observables() -> dict[str, Observable]:
    """Projectors used in the Hardy analysis, keyed by their registry name."""
    paths = hardy_path_states()
    id2 = identity(2)
    P_I, P_O = projector_onto(_I), projector_onto(_O)
    entangled = make_state(HARDY_LABELS, [0, 1, 1, 0])
    ops = {
        "P[O_p(I_e+O_e)]": projector_onto(_hardy_state(_O, _B)),
        "P[O_p(I_e-O_e)]": projector_onto(_hardy_state(_O, _D)),
        "P[(I_p+O_p)O_e]": projector_onto(_hardy_state(_B, _O)),
        "P[I_pI_e]": projector_onto(paths["I_pI_e"]),
        "P[I_pO_e]": projector_onto(paths["I_pO_e"]),
        "P[O_pI_e]": projector_onto(paths["O_pI_e"]),
        "P[O_pO_e]": projector_onto(paths["O_pO_e"]),
        "P[I_pO_e+O_pI_e]": projector_onto(entangled),
        "P[O_p*id]": tensor_operator(P_O, id2),
        "P[I_p*id]": tensor_operator(P_I, id2),
        "P[id*O_e]": tensor_operator(id2, P_O),
        "P[id*I_e]": tensor_operator(id2, P_I),
    }
    return {name: A.renamed(name) for name, A in ops.items()}


# Counter-factual equivalences: (non-local, local) pairs that must agree on psi.
HARDY_EQUIVALENCES = {
    "InPositron": ("P[I_pO_e]", "P[I_p*id]"),
    "InElectron": ("P[O_pI_e]", "P[id*I_e]"),
    "OutPositron": ("P[O_p(I_e+O_e)]", "P[O_p*id]"),
    "OutElectron": ("P[(I_p+O_p)O_e]", "P[id*O_e]"),
}


def build_hardy(coeffs: HardyCoefficients | None = None) -> Scenario:
    coeffs = coeffs or HardyCoefficients.standard()
    pre = StateVector(HARDY_LABELS, coeffs.as_array())
    checks: list = ["consistency1", "consistency2", "born", "variance", "abl"]
    checks += [{"name": "equivalence", "observables": list(pair)}
               for pair in HARDY_EQUIVALENCES.values()]
    return Scenario(
        labels=HARDY_LABELS,
        pre_state=pre,
        post_states=hardy_detector_states(),
        observables=hardy_observables(),
        checks=checks,
    )


# Rows of the general table: display name -> (registry name, formula per detector).
_GENERAL_ROWS = {
    "O_p(I_e+O_e)": ("P[O_p(I_e+O_e)]", ("0", "-(y+z)/(2 zeta_DpBe)", "0", "(y+z)/(2 zeta_BpBe)")),
    "(I_p+O_p)O_e": ("P[(I_p+O_p)O_e]", ("0", "0", "-(x+z)/(2 zeta_BpDe)", "(x+z)/(2 zeta_BpBe)")),
    "I_pO_e": ("P[I_pO_e]", ("-x/(2 zeta_DpDe)", "x/(2 zeta_DpBe)", "-x/(2 zeta_BpDe)", "x/(2 zeta_BpBe)")),
    "O_pI_e": ("P[O_pI_e]", ("-y/(2 zeta_DpDe)", "-y/(2 zeta_DpBe)", "y/(2 zeta_BpDe)", "y/(2 zeta_BpBe)")),
    "O_p*id": ("P[O_p*id]", ("(-y+z)/(2 zeta_DpDe)", "(-y-z)/(2 zeta_DpBe)", "(y-z)/(2 zeta_BpDe)", "(y+z)/(2 zeta_BpBe)")),
    "I_p*id": ("P[I_p*id]", ("(eta-x)/(2 zeta_DpDe)", "(eta+x)/(2 zeta_DpBe)", "(eta-x)/(2 zeta_BpDe)", "(eta+x)/(2 zeta_BpBe)")),
    "id*O_e": ("P[id*O_e]", ("(-x+z)/(2 zeta_DpDe)", "(x-z)/(2 zeta_DpBe)", "(-x-z)/(2 zeta_BpDe)", "(x+z)/(2 zeta_BpBe)")),
    "id*I_e": ("P[id*I_e]", ("(eta-y)/(2 zeta_DpDe)", "(eta-y)/(2 zeta_DpBe)", "(eta+y)/(2 zeta_BpDe)", "(eta+y)/(2 zeta_BpBe)")),
}


def hardy_general_table(coeffs: HardyCoefficients | None = None) -> WeakValueTable:
    """Weak values of eight path projectors for arbitrary Hardy coefficients.

    Cells carry the evaluated number and, in ``formulas``, the closed form in
    terms of eta, x, y, z and the detector overlaps zeta.  Weights are
    ``|zeta|^2``.
    """
    scenario = build_hardy(coeffs)
    registry = scenario.observables
    rows = {display: registry[key] for display, (key, _) in _GENERAL_ROWS.items()}
    table = weak_value_table(scenario.pre_state, scenario.post_basis, rows,
                             post_labels=scenario.post_labels, sums=False)
    formulas = {(display, post): f
                for display, (_, fs) in _GENERAL_ROWS.items()
                for post, f in zip(DETECTOR_LABELS, fs)}
    return WeakValueTable(**{**table.__dict__, "formulas": formulas})


HardyVariant = Literal["general", "noncommuting", "cancellation", "orthogonal"]
HARDY_VARIANTS = ("general", "noncommuting", "cancellation", "orthogonal")

_HARDY_ROWS = {
    "noncommuting": {
        "O_p(I_e+O_e)": "P[O_p(I_e+O_e)]",
        "(I_p+O_p)O_e": "P[(I_p+O_p)O_e]",
        "I_pO_e+O_pI_e": "P[I_pO_e+O_pI_e]",
    },
    # completed with the two projectors whose weak values vanish on this basis
    "cancellation": {
        "O_p(I_e+O_e)": "P[O_p(I_e+O_e)]",
        "I_pO_e": "P[I_pO_e]",
        "O_p(I_e-O_e)": "P[O_p(I_e-O_e)]",
        "I_pI_e": "P[I_pI_e]",
    },
    "orthogonal": {
        "I_pO_e": "P[I_pO_e]",
        "O_pI_e": "P[O_pI_e]",
        "O_pO_e": "P[O_pO_e]",
        "I_pI_e": "P[I_pI_e]",
    },
}


def hardy_table(variant: HardyVariant = "orthogonal",
                coeffs: HardyCoefficients | None = None) -> WeakValueTable:
    if variant == "general":
        return hardy_general_table(coeffs)
    if variant not in _HARDY_ROWS:
        raise ValueError(f"unknown Hardy table {variant!r}; valid: {', '.join(HARDY_VARIANTS)}")
    scenario = build_hardy(coeffs)
    rows = {display: scenario.observables[key] for display, key in _HARDY_ROWS[variant].items()}
    return weak_value_table(scenario.pre_state, scenario.post_basis, rows,
                            post_labels=scenario.post_labels)


# -- pre-state from the counter-factual constraints ----------------------

def _phase_fixed(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v) > 1e-12))
    return v * (abs(v[k]) / v[k])


def _null_vector(gram: np.ndarray) -> np.ndarray:
    """Unit vector spanning the one-dimensional kernel of a PSD matrix."""
    spec = spectral_decomposition(Observable(gram))
    kernel = [v for a, v in zip(spec.eigenvalues, spec.eigenvectors) if a < 1e-10]
    if len(kernel) != 1:
        raise ArithmeticError(f"constraint kernel has dimension {len(kernel)}, expected 1")
    return _phase_fixed(kernel[0].amplitudes)


def prestate_from_expectations() -> np.ndarray:
    """Solve <psi|(A - B)^2|psi> = 0 for every counter-factual pair.

    Each (A - B)^2 is positive semidefinite, so the condition is
    (A - B)|psi> = 0: the solution is the common kernel, found from the sum
    of the four squared differences.
    """
    ops = hardy_observables()
    total = np.zeros((4, 4), dtype=complex)
    for a, b in HARDY_EQUIVALENCES.values():
        d = ops[a].matrix - ops[b].matrix
        total += d @ d
    return _null_vector(total)


def prestate_from_weak_values(post: str = "D_pD_e") -> np.ndarray:
    """Solve w_A(post) = w_B(post) for every counter-factual pair.

    With <post|psi> nonzero each condition is the linear equation
    <post|(A - B)|psi> = 0.
    """
    ops = hardy_observables()
    bra = hardy_detector_states()[post].amplitudes.conj()
    rows = np.array([bra @ (ops[a].matrix - ops[b].matrix) for a, b in HARDY_EQUIVALENCES.values()])
    return _null_vector(rows.conj().T @ rows)


@dataclass(frozen=True)
class PrestateDerivation:
    coefficients: HardyCoefficients
    expectation_route: np.ndarray
    weak_route: np.ndarray
    expectation_residuals: dict[str, float]
    weak_residuals: dict[str, float]

    @property
    def agreement(self) -> float:
        return float(np.max(np.abs(self.expectation_route - self.weak_route)))


def hardy_prestate_routes() -> PrestateDerivation:
    a = prestate_from_expectations()
    b = prestate_from_weak_values()
    coeffs = HardyCoefficients(*(complex(c) for c in a))
    pre = StateVector(HARDY_LABELS, a)
    ops = hardy_observables()
    post = hardy_detector_states()["D_pD_e"]
    exp_res = {k: observable_distance(pre, ops[p], ops[q]) for k, (p, q) in HARDY_EQUIVALENCES.items()}
    weak_res = {k: abs(weak_value(pre, post, ops[p]) - weak_value(pre, post, ops[q]))
                for k, (p, q) in HARDY_EQUIVALENCES.items()}
    return PrestateDerivation(coeffs, a, b, exp_res, weak_res)


def derive_hardy_prestate(tol: float = 1e-12) -> HardyCoefficients:
    """Pre-selected state forced by the four counter-factual equivalences."""
    routes = hardy_prestate_routes()
    if routes.agreement > tol:
        raise ArithmeticError(f"constraint routes disagree by {routes.agreement:.3g}")
    return routes.coefficients


# -- factual (projectively measured) probabilities -----------------------

@dataclass(frozen=True)
class FactualProbabilities:
    detectors: tuple[str, ...]
    born: dict[str, np.ndarray]
    abl: dict[str, np.ndarray]
    unconditional: dict[str, float]


def hardy_factual_probabilities(coeffs: HardyCoefficients | None = None) -> FactualProbabilities:
    """Detector probabilities after a projective positron-path measurement.

    ``born`` is the sequential Born rule (collapse onto the measured path,
    then detect).  ``abl`` rebuilds the same numbers as
    ``|w|^2 * Pr(detector)`` using the intermediate state the measurement
    leaves behind.
    """
    scenario = build_hardy(coeffs)
    pre = scenario.pre_state
    ops = scenario.observables
    measured = {"O_p": ops["P[O_p*id]"], "I_p": ops["P[I_p*id]"]}
    born, abl = {}, {}
    for path, P in measured.items():
        collapsed = P.apply(pre)
        born[path] = np.array([abs(np.vdot(x.amplitudes, collapsed)) ** 2
                               for x in scenario.post_basis])
        intermediate = make_state(HARDY_LABELS, collapsed)
        abl[path] = np.array([abl_probability(pre, x, intermediate, scenario.overlap_floor).factual_probability
                              for x in scenario.post_basis])
    uncond = {lab: abs(np.vdot(x.amplitudes, pre.amplitudes)) ** 2
              for lab, x in scenario.post_states.items()}
    return FactualProbabilities(scenario.post_labels, born, abl, uncond)


def hardy_divergent_family(theta: float, floor: float = engine.OVERLAP_FLOOR):
    """Post-selection cos(t)|I_pO_e> + sin(t)(|O_pI_e> + |O_pO_e>)/2 in the psi-n plane.

    Returns ``(literal_overlap, normalized_overlap, weak_value)`` for the
    projector onto |I_pO_e> at the standard pre-state.  The literal overlap
    uses the unnormalized vector as written, (sin t + cos t)/sqrt(3); the
    weak value does not depend on the normalization and diverges at
    t = -pi/4, where it raises :class:`NullPostSelection`.
    """
    raw = np.array([0, math.cos(theta), math.sin(theta) / 2, math.sin(theta) / 2])
    pre = build_hardy().pre_state
    literal = float(raw @ pre.amplitudes.real)
    phi = make_state(HARDY_LABELS, raw)
    w = weak_value(pre, phi, hardy_observables()["P[I_pO_e]"], floor)
    return literal, float(phi.amplitudes.real @ pre.amplitudes.real), w


# -- spin 1/2 ------------------------------------------------------------

SPIN_LABELS = ("0", "1")


@dataclass(frozen=True)
class SpinScenarioParams:
    alpha: float
    beta: float

    def __post_init__(self):
        if abs(self.alpha ** 2 + self.beta ** 2 - 1.0) > 1e-12:
            raise ValueError("alpha^2 + beta^2 must be 1")

    @classmethod
    def from_raw(cls, alpha: float, beta: float) -> "SpinScenarioParams":
        norm = math.hypot(alpha, beta)
        if norm < 1e-14:
            raise ValueError("alpha and beta cannot both vanish")
        return cls(alpha / norm, beta / norm)


def spin_states() -> dict[str, StateVector]:
    s = SQRT1_2
    return {
        "0": StateVector(SPIN_LABELS, [1, 0]),
        "1": StateVector(SPIN_LABELS, [0, 1]),
        "0_x": StateVector(SPIN_LABELS, [s, s]),
        "1_x": StateVector(SPIN_LABELS, [s, -s]),
        "0_y": StateVector(SPIN_LABELS, [s, 1j * s]),
        "1_y": StateVector(SPIN_LABELS, [s, -1j * s]),
    }


def spin_observables() -> dict[str, Observable]:
    one = identity(2)
    return {
        "sigma_x": SIGMA_X,
        "sigma_y": SIGMA_Y,
        "sigma_z": SIGMA_Z,
        "sigma_x+sigma_y": (SIGMA_X + SIGMA_Y).renamed("sigma_x+sigma_y"),
        "P_+": Observable((one.matrix + SIGMA_X.matrix) / 2, "P_+"),
        "P_-": Observable((one.matrix - SIGMA_X.matrix) / 2, "P_-"),
    }


def build_spin(params: SpinScenarioParams | None = None,
               post_basis: Literal["computational", "y_basis"] = "computational") -> Scenario:
    states = spin_states()
    if params is None:
        pre = states["0_x"]
    else:
        pre = StateVector(SPIN_LABELS, [params.alpha, params.beta])
    if post_basis == "computational":
        posts = {"0": states["0"], "1": states["1"]}
    elif post_basis == "y_basis":
        posts = {"0_y": states["0_y"], "1_y": states["1_y"]}
    else:
        raise ValueError(f"unknown post basis {post_basis!r}")
    return Scenario(
        labels=SPIN_LABELS,
        pre_state=pre,
        post_states=posts,
        observables=spin_observables(),
        checks=["consistency1", "consistency2", "born", "variance", "abl"],
    )


SPIN_VARIANTS = ("pauli-y", "composite", "pauli", "projectors")


def spin_table(variant: str = "pauli-y", params: SpinScenarioParams | None = None) -> WeakValueTable:
    """Spin-1/2 weak-value tables.

    ``pauli-y`` and ``composite`` use pre |0_x> with the sigma_y eigenbasis
    as post-selections; ``pauli`` and ``projectors`` use the general real
    pre alpha|0> + beta|1> (default 0.6, 0.8) with the computational basis.
    ``pauli`` carries a ``"Sum of squared"`` row of w_x^2 + w_y^2 + w_z^2.
    """
    if variant not in SPIN_VARIANTS:
        raise ValueError(f"unknown spin table {variant!r}; valid: {', '.join(SPIN_VARIANTS)}")
    ops = spin_observables()
    if variant in ("pauli-y", "composite"):
        scenario = build_spin(None, "y_basis")
        names = ["sigma_x", "sigma_y", "sigma_z"] if variant == "pauli-y" else ["sigma_x", "sigma_x+sigma_y"]
    else:
        scenario = build_spin(params or SpinScenarioParams(0.6, 0.8), "computational")
        names = ["sigma_x", "sigma_y", "sigma_z"] if variant == "pauli" else ["P_+", "P_-"]
    table = weak_value_table(scenario.pre_state, scenario.post_basis,
                             {n: ops[n] for n in names}, post_labels=scenario.post_labels)
    if variant == "pauli":
        squares = np.sum(table.cells ** 2, axis=0)
        table = WeakValueTable(**{**table.__dict__,
                                  "summary_rows": {"Sum of squared": squares},
                                  "summary_averages": {"Sum of squared": complex(np.sum(table.row_averages ** 2))}})
    return table


def bloch_vector(pre: StateVector) -> np.ndarray:
    return np.array([A.expectation(pre).real for A in (SIGMA_X, SIGMA_Y, SIGMA_Z)])


def spin_square_sum(pre: StateVector, post: StateVector) -> complex:
    """w_x^2 + w_y^2 + w_z^2 (complex squares), identically 1 for a qubit."""
    return sum(weak_value(pre, post, A) ** 2 for A in (SIGMA_X, SIGMA_Y, SIGMA_Z))
