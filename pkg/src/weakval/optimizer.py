"""Post-selections that make weak values negative or strange.

All routines here work in the real span of the scenario: amplitudes of the
pre-selected state and matrix entries of the observable must be real.  The
post-selection is constrained to the cone ``<phi|psi> = cos(xi)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .engine import weak_value
from .errors import (
    ComplexGeometry,
    NullPostSelection,
    OrthogonalIntermediate,
    ResolutionTooCoarse,
)
from .hilbert import Observable, Spectrum, StateVector, spectral_decomposition

XI_CEILING = math.pi / 2 - 1e-3
REAL_TOL = 1e-10
BOUND_TOL = 1e-10
MIN_RESOLUTION = 8
MAX_GRID_POINTS = 50_000_000

Objective = Literal["minimize", "maximize"]


def _real_vector(state: StateVector, what: str) -> np.ndarray:
    if np.max(np.abs(state.amplitudes.imag), initial=0.0) > REAL_TOL:
        raise ComplexGeometry(f"{what} has complex amplitudes")
    return state.amplitudes.real.copy()


def _real_matrix(A: Observable) -> np.ndarray:
    if np.max(np.abs(A.matrix.imag), initial=0.0) > REAL_TOL:
        raise ComplexGeometry(f"observable {A.name!r} has complex entries")
    return A.matrix.real.copy()


def check_xi(xi: float, ceiling: float = XI_CEILING):
    """Reject angles outside (0, pi/2); angles past the ceiling diverge."""
    if not (0.0 < xi < math.pi / 2):
        raise ValueError(f"xi must be in (0, xi_ceiling); got {xi!r}")
    if xi >= ceiling:
        raise NullPostSelection(
            f"xi = {xi:.6g} is beyond xi_ceiling = {ceiling:.6g}; cos(xi) -> 0 diverges")


def _cone_point(psi: np.ndarray, direction: np.ndarray, xi: float) -> np.ndarray:
    """cos(xi) psi + sin(xi) e, with e the normalized part of ``direction`` orthogonal to psi."""
    perp = direction - np.dot(psi, direction) * psi
    norm = np.linalg.norm(perp)
    if norm < 1e-14:
        raise ValueError("direction is parallel to the pre-selected state")
    return math.cos(xi) * psi + math.sin(xi) * perp / norm


# -- the planar construction ---------------------------------------------

@dataclass(frozen=True)
class PlanarGeometry:
    theta_n: float
    xi: float


def planar_postselection(pre: StateVector, n: StateVector, xi: float,
                         sign: Literal["+", "-"] = "-",
                         ceiling: float = XI_CEILING):
    """Post-selection in span{psi, n} at angle ``xi`` from psi.

    ``sign="-"`` turns phi away from ``n`` so the angle between them is
    ``theta_n + xi`` and the weak value of ``|n><n|`` is
    ``cos(theta_n + xi) cos(theta_n) / cos(xi)``; this is negative exactly
    when ``theta_n + xi`` is obtuse.  ``sign="+"`` gives the
    ``cos(theta_n - xi)`` branch.  Returns ``(phi, weak_value, geometry)``.
    """
    check_xi(xi, ceiling)
    psi = _real_vector(pre, "pre-selected state")
    nv = _real_vector(n, "intermediate state")
    c = float(np.dot(nv, psi))
    if abs(c) < REAL_TOL:
        raise OrthogonalIntermediate("<n|psi> vanishes; the projector weak value is 0")
    if c < 0:
        nv, c = -nv, -c  # same projector, theta_n taken acute
    c = min(c, 1.0)
    theta = math.acos(c)
    if theta < 1e-12:
        # n = psi: every cone point gives the same weak value
        direction = np.eye(psi.size)[int(np.argmin(np.abs(psi)))]
    else:
        direction = (nv - c * psi) / math.sin(theta)
    if sign == "-":
        direction = -direction
    elif sign != "+":
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    phi = _cone_point(psi, direction, xi)
    angle = theta + xi if sign == "-" else theta - xi
    value = math.cos(angle) * c / math.cos(xi)
    return StateVector(pre.labels, phi), value, PlanarGeometry(theta, xi)


# -- strangeness ---------------------------------------------------------

@dataclass(frozen=True)
class StrangenessReport:
    value: float
    spectrum_min: float
    spectrum_max: float
    classification: Literal["within", "above_max", "below_min"]


def classify_strangeness(value: float, spectrum: Spectrum,
                         tol: float = BOUND_TOL) -> StrangenessReport:
    lo, hi = spectrum.minimum, spectrum.maximum
    if value > hi + tol:
        label = "above_max"
    elif value < lo - tol:
        label = "below_min"
    else:
        label = "within"
    return StrangenessReport(float(value), lo, hi, label)


def two_level_weak_value(A: Observable, alpha: float, beta: float) -> float:
    """Weak value of ``A`` for pre alpha|N> + beta|1> and post (|N> + |1>)/sqrt(2).

    ``|N>`` and ``|1>`` are the eigenvectors of the largest and smallest
    eigenvalue.  The result is ``a_N + (a_1 - a_N) w_1`` with
    ``w_1 = beta / (alpha + beta)``, so it exceeds ``a_N`` when
    ``alpha / beta < -1``.
    """
    spec = spectral_decomposition(A)
    top, bottom = spec.eigenvectors[-1], spec.eigenvectors[0]
    pre = StateVector(top.labels, alpha * top.amplitudes + beta * bottom.amplitudes)
    pre = StateVector(pre.labels, pre.amplitudes / np.linalg.norm(pre.amplitudes))
    post = StateVector(top.labels, (top.amplitudes + bottom.amplitudes) / math.sqrt(2))
    return float(weak_value(pre, post, A).real)


# -- constrained extremum ------------------------------------------------

@dataclass(frozen=True)
class OptimalPostSelection:
    phi: StateVector
    weak_value: float
    lam: float
    mu: float
    stationarity_residual: float
    iterations: int
    converged: bool


def lagrange_multipliers(psi: np.ndarray, matrix: np.ndarray, phi: np.ndarray,
                         xi: float, eig=None) -> tuple[float, float]:
    """Multipliers of the overlap and norm constraints at ``phi``.

    Evaluated from the spectral data of ``matrix`` (pass ``eig`` to reuse a
    decomposition).
    """
    values, vecs = eig if eig is not None else _eig_real(matrix)
    n_psi = vecs.T @ psi
    phi_n = vecs.T @ phi
    c, s2 = math.cos(xi), math.sin(xi) ** 2
    lam = float(np.sum(values / s2 * (n_psi ** 2 / c - phi_n * n_psi)))
    mu = float(-np.sum(values / s2 * (n_psi ** 2 - phi_n * n_psi / c)))
    return lam, mu


def _eig_real(matrix: np.ndarray):
    spec = spectral_decomposition(Observable(matrix))
    vecs = np.column_stack([v.amplitudes.real for v in spec.eigenvectors])
    return spec.eigenvalues, vecs


def stationarity_vector(psi: np.ndarray, matrix: np.ndarray, phi: np.ndarray,
                        xi: float, lam: float, mu: float) -> np.ndarray:
    """sum_n a_n |n><n|psi>/cos(xi) - lam psi - mu phi; zero at an extremum."""
    return matrix @ psi / math.cos(xi) - lam * psi - mu * phi


def _fixed_point(psi, matrix, xi, seed, damping, max_iterations, tol, eig):
    phi = seed
    for it in range(1, max_iterations + 1):
        lam, mu = lagrange_multipliers(psi, matrix, phi, xi, eig)
        if mu == 0.0:
            return phi, it, False
        candidate = (matrix @ psi / math.cos(xi) - lam * psi) / mu
        candidate = _cone_point(psi, candidate, xi)
        blended = _cone_point(psi, damping * phi + (1 - damping) * candidate, xi)
        step = np.linalg.norm(blended - phi)
        phi = blended
        if step < tol:
            return phi, it, True
    return phi, max_iterations, False


def solve_optimal_postselection(pre: StateVector, A: Observable, xi: float,
                                objective: Objective = "minimize",
                                damping: float = 0.5,
                                max_iterations: int = 1000,
                                tol: float = 1e-12,
                                fallback_resolution: int = 64,
                                ceiling: float = XI_CEILING) -> OptimalPostSelection:
    """Extremize the real weak value of ``A`` over the cone ``<phi|psi> = cos(xi)``.

    Damped fixed-point iteration on the stationarity condition: from the
    current phi compute the multipliers, form the formal solution, push it
    back onto the cone and blend it with the previous iterate.  Two seeds
    (the planar post-selection for the dominant eigenvector and its mirror
    image) reach the two stationary branches; ``objective`` picks one.  If no
    seed converges the best grid point is returned with ``converged=False``.
    """
    if objective not in ("minimize", "maximize"):
        raise ValueError(f"objective must be 'minimize' or 'maximize', got {objective!r}")
    check_xi(xi, ceiling)
    psi = _real_vector(pre, "pre-selected state")
    matrix = _real_matrix(A)
    better = min if objective == "minimize" else max

    a_psi = matrix @ psi
    spread = a_psi - np.dot(psi, a_psi) * psi
    if np.linalg.norm(spread) < 1e-13:
        # psi is an eigenvector: the weak value is constant on the cone
        phi = _cone_point(psi, _any_orthogonal(psi), xi)
        lam, mu = lagrange_multipliers(psi, matrix, phi, xi)
        res = stationarity_vector(psi, matrix, phi, xi, lam, mu)
        return OptimalPostSelection(StateVector(pre.labels, phi),
                                    float(np.dot(phi, a_psi) / np.dot(phi, psi)),
                                    lam, mu, float(np.linalg.norm(res)), 0, True)

    eig = _eig_real(matrix)
    seed = _seed(pre, A, psi, xi, ceiling)
    mirror = 2 * math.cos(xi) * psi - seed   # reflect the orthogonal part
    candidates = []
    total_iterations = 0
    starts = [seed, mirror]
    # extra seeds along the cone frame, used only if the first pair stalls at mu = 0
    frame = cone_frame(pre, A)[:, 1:].T
    extra = [_cone_point(psi, s * e, xi) for e in frame for s in (1.0, -1.0)]
    for start in starts + extra:
        if len(candidates) >= 2 or (start is extra[0] and candidates):
            break
        phi, iters, ok = _fixed_point(psi, matrix, xi, start, damping, max_iterations, tol, eig)
        total_iterations += iters
        if ok:
            candidates.append(phi)
    if not candidates:
        value, best = grid_oracle_extremal(pre, A, xi, fallback_resolution, objective)
        phi = best.amplitudes.real
        lam, mu = lagrange_multipliers(psi, matrix, phi, xi)
        res = stationarity_vector(psi, matrix, phi, xi, lam, mu)
        return OptimalPostSelection(best, value, lam, mu, float(np.linalg.norm(res)),
                                    total_iterations, False)

    def value_of(phi):
        return float(np.dot(phi, a_psi) / np.dot(phi, psi))

    phi = better(candidates, key=value_of)
    lam, mu = lagrange_multipliers(psi, matrix, phi, xi)
    res = stationarity_vector(psi, matrix, phi, xi, lam, mu)
    return OptimalPostSelection(StateVector(pre.labels, phi), value_of(phi), lam, mu,
                                float(np.linalg.norm(res)), total_iterations, True)


def _any_orthogonal(psi: np.ndarray) -> np.ndarray:
    return np.eye(psi.size)[int(np.argmin(np.abs(psi)))]


def _dominant_order(pre: StateVector, A: Observable) -> list[StateVector]:
    """Eigenvectors sorted by decreasing |a_n <n|psi>| (ties keep ascending a_n)."""
    spec = spectral_decomposition(A, pre.labels)
    psi = pre.amplitudes
    weight = [abs(a * np.vdot(v.amplitudes, psi)) for a, v in zip(spec.eigenvalues, spec.eigenvectors)]
    order = sorted(range(len(weight)), key=lambda i: -round(weight[i], 12))
    return [spec.eigenvectors[i] for i in order]


def _seed(pre, A, psi, xi, ceiling):
    for n in _dominant_order(pre, A):
        try:
            phi, _, geom = planar_postselection(pre, n, xi, "-", ceiling)
        except OrthogonalIntermediate:
            continue
        if geom.theta_n > 1e-9:
            return phi.amplitudes.real
    return _cone_point(psi, _any_orthogonal(psi), xi)


# -- brute-force oracle --------------------------------------------------

def cone_frame(pre: StateVector, A: Observable) -> np.ndarray:
    """Orthonormal real frame {psi, e_2, ..., e_N} as columns.

    Built by Gram-Schmidt over psi followed by the eigenvectors of ``A`` in
    dominant order, then the computational basis for any remaining gaps.
    """
    psi = _real_vector(pre, "pre-selected state")
    candidates = [v.amplitudes.real for v in _dominant_order(pre, A)]
    candidates += list(np.eye(psi.size))
    frame = [psi]
    for c in candidates:
        w = c.copy()
        for u in frame:
            w = w - np.dot(u, w) * u
        norm = np.linalg.norm(w)
        if norm > 1e-8:
            frame.append(w / norm)
        if len(frame) == psi.size:
            break
    return np.column_stack(frame)


def _sphere_points(k: int, resolution: int, first_angles: np.ndarray | None = None):
    """Unit vectors in R^k on a hyperspherical grid, rows in lexicographic angle order."""
    if k == 1:
        return np.array([[1.0], [-1.0]])
    polar = np.linspace(0.0, math.pi, resolution)
    azimuth = np.linspace(0.0, 2 * math.pi, resolution, endpoint=False)
    axes = [polar] * (k - 2) + [azimuth]
    if first_angles is not None:
        axes[0] = first_angles
    grids = np.meshgrid(*axes, indexing="ij")
    angles = [g.ravel() for g in grids]
    pts = np.empty((angles[0].size, k))
    running = np.ones(angles[0].size)
    for i, ang in enumerate(angles):
        pts[:, i] = running * np.cos(ang)
        running = running * np.sin(ang)
    pts[:, k - 1] = running
    return pts


def grid_oracle_extremal(pre: StateVector, A: Observable, xi: float,
                         resolution: int = 2000,
                         objective: Objective = "minimize"):
    """Exhaustive search for the extremal real weak value on the cone.

    phi = cos(xi) psi + sin(xi) u with u running over a hyperspherical grid
    of unit vectors orthogonal to psi (``resolution`` points per angle).
    The weak value is evaluated from its defining ratio at each grid point.
    Ties keep the first point in lexicographic angle order.  Returns
    ``(value, phi)``.
    """
    if resolution < MIN_RESOLUTION:
        raise ResolutionTooCoarse(f"resolution {resolution} < {MIN_RESOLUTION}")
    if not (0.0 < xi < math.pi / 2):
        raise ValueError(f"xi must be in (0, pi/2); got {xi!r}")
    if objective not in ("minimize", "maximize"):
        raise ValueError(f"objective must be 'minimize' or 'maximize', got {objective!r}")
    psi = _real_vector(pre, "pre-selected state")
    matrix = _real_matrix(A)
    n = psi.size
    k = n - 1
    if k >= 2 and float(resolution) ** (k - 1) > MAX_GRID_POINTS:
        raise ValueError(f"grid of {resolution}^{k - 1} points is too large for N = {n}")
    frame = cone_frame(pre, A)[:, 1:]
    a_psi = matrix @ psi
    cos_xi, sin_xi = math.cos(xi), math.sin(xi)
    sign = 1.0 if objective == "minimize" else -1.0

    best_value, best_phi = math.inf, None
    if k >= 3:
        # chunk over the first polar angle to bound memory
        polar = np.linspace(0.0, math.pi, resolution)
        chunks = np.array_split(polar, max(1, polar.size // 64))
    else:
        chunks = [None]
    for chunk in chunks:
        u = _sphere_points(k, resolution, chunk)
        phis = cos_xi * psi[None, :] + sin_xi * (u @ frame.T)
        values = (phis @ a_psi) / (phis @ psi)
        i = int(np.argmin(sign * values))
        if sign * values[i] < best_value:
            best_value, best_phi = sign * values[i], phis[i]
    return float(sign * best_value), StateVector(pre.labels, best_phi)
