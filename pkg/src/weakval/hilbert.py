"""Dense complex linear algebra over small labelled Hilbert spaces.

States and observables are immutable numpy-backed values.  Everything here is
deliberately small-scale: dimensions are capped at ``MAX_DIMENSION`` and all
storage is dense.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NonFiniteValue,
    NotHermitian,
    ZeroVector,
)

MAX_DIMENSION = 64
ZERO_NORM = 1e-14
HERMITIAN_TOL = 1e-12
DEGENERACY_TOL = 1e-9


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


def default_labels(dimension: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(dimension))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized ket over an ordered set of basis labels."""

    labels: tuple[str, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1:
            raise DimensionMismatch("amplitudes must be one-dimensional")
        if len(self.labels) != amps.size:
            raise DimensionMismatch(
                f"{len(self.labels)} labels for {amps.size} amplitudes")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("basis labels must be unique")
        if not np.all(np.isfinite(amps)):
            raise NonFiniteValue("amplitudes must be finite")
        object.__setattr__(self, "labels", tuple(str(l) for l in self.labels))
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    def __len__(self):
        return self.amplitudes.size

    def __repr__(self):
        terms = ", ".join(f"{l}: {a:.6g}" for l, a in zip(self.labels, self.amplitudes))
        return f"StateVector({terms})"

    def relabel(self, labels: Sequence[str]) -> "StateVector":
        return StateVector(tuple(labels), self.amplitudes)

    def amplitude(self, label: str) -> complex:
        return complex(self.amplitudes[self.labels.index(label)])


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian operator given by a dense matrix."""

    matrix: np.ndarray
    name: str = "A"

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"observable {self.name!r} must be square, got {m.shape}")
        if m.shape[0] > MAX_DIMENSION:
            raise DimensionMismatch(f"dimension {m.shape[0]} exceeds {MAX_DIMENSION}")
        if not np.all(np.isfinite(m)):
            raise NonFiniteValue(f"observable {self.name!r} has non-finite entries")
        if np.max(np.abs(m - m.conj().T), initial=0.0) >= HERMITIAN_TOL:
            raise NotHermitian(f"observable {self.name!r} is not Hermitian")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self):
        return f"Observable({self.name!r}, dim={self.dimension})"

    def __add__(self, other: "Observable") -> "Observable":
        _same_dimension(self.dimension, other.dimension)
        return Observable(self.matrix + other.matrix, f"{self.name}+{other.name}")

    def __sub__(self, other: "Observable") -> "Observable":
        _same_dimension(self.dimension, other.dimension)
        return Observable(self.matrix - other.matrix, f"{self.name}-{other.name}")

    def scaled(self, factor: float, name: str | None = None) -> "Observable":
        return Observable(float(factor) * self.matrix, name or f"{factor:g}*{self.name}")

    def renamed(self, name: str) -> "Observable":
        return Observable(self.matrix, name)

    def apply(self, state: StateVector) -> np.ndarray:
        """Unnormalized vector A|state>."""
        _same_dimension(self.dimension, state.dimension)
        return self.matrix @ state.amplitudes

    def expectation(self, state: StateVector) -> complex:
        return complex(np.vdot(state.amplitudes, self.apply(state)))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues with matching orthonormal eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: tuple[StateVector, ...]

    @property
    def minimum(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def maximum(self) -> float:
        return float(self.eigenvalues[-1])

    def reconstruct(self) -> np.ndarray:
        vecs = np.column_stack([v.amplitudes for v in self.eigenvectors])
        return (vecs * self.eigenvalues) @ vecs.conj().T


def _same_dimension(a: int, b: int):
    if a != b:
        raise DimensionMismatch(f"dimension {a} != {b}")


def _same_space(a: StateVector, b: StateVector):
    _same_dimension(a.dimension, b.dimension)
    if a.labels != b.labels:
        raise DimensionMismatch(f"label sets differ: {a.labels} vs {b.labels}")


def make_state(labels: Iterable[str] | None, raw_amplitudes) -> StateVector:
    """Normalize ``raw_amplitudes`` into a :class:`StateVector`.

    ``labels=None`` uses ``"0", "1", ...``.  Input that is already unit
    length to rounding is kept bit-for-bit, so exported states reload exactly.
    """
    raw = np.asarray(raw_amplitudes, dtype=complex).ravel()
    labels = default_labels(raw.size) if labels is None else tuple(labels)
    if len(labels) != raw.size:
        raise DimensionMismatch(f"{len(labels)} labels for {raw.size} amplitudes")
    if raw.size > MAX_DIMENSION:
        raise DimensionMismatch(f"dimension {raw.size} exceeds {MAX_DIMENSION}")
    if not np.all(np.isfinite(raw)):
        raise NonFiniteValue("amplitudes must be finite")
    norm = np.linalg.norm(raw)
    if norm < ZERO_NORM:
        raise ZeroVector("cannot normalize a zero vector")
    if abs(norm - 1.0) <= 4 * np.finfo(float).eps:
        return StateVector(labels, raw)
    return StateVector(labels, raw / norm)


def basis_state(labels: Sequence[str], label: str) -> StateVector:
    raw = np.zeros(len(labels), dtype=complex)
    raw[list(labels).index(label)] = 1.0
    return StateVector(tuple(labels), raw)


def inner_product(bra: StateVector, ket: StateVector) -> complex:
    """<bra|ket>, conjugate-linear in ``bra``."""
    _same_space(bra, ket)
    return complex(np.vdot(bra.amplitudes, ket.amplitudes))


def tensor_product(a: StateVector, b: StateVector) -> StateVector:
    labels = tuple(la + lb for la in a.labels for lb in b.labels)
    return StateVector(labels, np.kron(a.amplitudes, b.amplitudes))


def tensor_operator(a: Observable, b: Observable, name: str | None = None) -> Observable:
    return Observable(np.kron(a.matrix, b.matrix), name or f"{a.name}*{b.name}")


def identity(dimension: int, name: str = "id") -> Observable:
    return Observable(np.eye(dimension, dtype=complex), name)


def projector_onto(state: StateVector, name: str | None = None) -> Observable:
    v = state.amplitudes
    return Observable(np.outer(v, v.conj()), name or "P")


def projector_sum(states: Sequence[StateVector], name: str | None = None) -> Observable:
    """Projector onto the span of mutually orthonormal ``states``."""
    m = sum(np.outer(s.amplitudes, s.amplitudes.conj()) for s in states)
    return Observable(m, name or "P")


def gram_matrix(states: Sequence[StateVector]) -> np.ndarray:
    vecs = np.column_stack([s.amplitudes for s in states])
    return vecs.conj().T @ vecs


def is_orthonormal_basis(states: Sequence[StateVector], tol: float = 1e-10) -> bool:
    if not states:
        return False
    dim = states[0].dimension
    if len(states) != dim or any(s.dimension != dim for s in states):
        return False
    return bool(np.max(np.abs(gram_matrix(states) - np.eye(dim))) < tol)


# -- eigen-solver ---------------------------------------------------------

def jacobi_eigh(matrix: np.ndarray, tol: float = 1e-15, max_sweeps: int = 100):
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies a real Givens rotation, so the sweep order (row-major over
    ``p < q``) fully determines the result.  Returns unsorted eigenvalues and
    the unitary whose columns are the eigenvectors.
    """
    a = np.array(matrix, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(a), 1.0)
    for _ in range(max_sweeps):
        if np.linalg.norm(a - np.diag(np.diag(a))) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                phase = apq / r
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # diag(1, conj(phase)) followed by [[c, s], [-s, c]]
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                v[:, idx] = v[:, idx] @ g
    return np.real(np.diag(a)).copy(), v


def _fix_phase(vec: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    for x in vec:
        if abs(x) > tol:
            return vec * (abs(x) / x)
    return vec


def _gram_schmidt(columns: list[np.ndarray]) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for col in columns:
        w = col.astype(complex)
        for u in out:
            w = w - np.vdot(u, w) * u
        w = w / np.linalg.norm(w)
        out.append(w)
    return out


def spectral_decomposition(A: Observable, labels: Sequence[str] | None = None) -> Spectrum:
    """Eigen-decomposition of ``A`` with ascending eigenvalues.

    Eigenvectors are phase-fixed (first non-negligible component real and
    positive).  Inside a degenerate cluster the basis is re-orthonormalized by
    ordered Gram-Schmidt; any orthonormal basis of that eigenspace is valid.
    """
    if not isinstance(A, Observable):
        A = Observable(A)
    labels = default_labels(A.dimension) if labels is None else tuple(labels)
    values, vecs = jacobi_eigh(A.matrix)
    order = np.argsort(values, kind="stable")
    values = values[order]
    columns = [vecs[:, i] for i in order]

    start = 0
    fixed: list[np.ndarray] = []
    while start < len(values):
        stop = start + 1
        while stop < len(values) and values[stop] - values[stop - 1] < DEGENERACY_TOL:
            stop += 1
        block = columns[start:stop]
        if len(block) > 1:
            block = _gram_schmidt(block)
        fixed.extend(_fix_phase(c) for c in block)
        start = stop
    states = tuple(StateVector(labels, c / np.linalg.norm(c)) for c in fixed)
    return Spectrum(values, states)


# -- Pauli operators ------------------------------------------------------

SIGMA_X = Observable(np.array([[0, 1], [1, 0]]), "sigma_x")
SIGMA_Y = Observable(np.array([[0, -1j], [1j, 0]]), "sigma_y")
SIGMA_Z = Observable(np.array([[1, 0], [0, -1]]), "sigma_z")
