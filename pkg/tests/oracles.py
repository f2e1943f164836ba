"""Independent reference computations used to derive expected values.

Nothing here imports the package under test: these are direct numpy
transcriptions of the defining formulas.
"""
import math

import numpy as np


def weak_value(psi, phi, m):
    return np.vdot(phi, m @ psi) / np.vdot(phi, psi)


def random_state(rng, n, real=False):
    v = rng.normal(size=n) if real else rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def random_hermitian(rng, n, real=False):
    if real:
        a = rng.normal(size=(n, n))
    else:
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def random_unitary(rng, n):
    """Haar-distributed unitary via QR with the phase correction."""
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def cone_extremum(psi, m, xi, objective="minimize"):
    """Extremal weak value over real unit phi with <phi|psi> = cos(xi).

    On that cone w(phi) = <A> + tan(xi) <u|A psi> with u a unit vector
    orthogonal to psi, so the extremum is <A> -/+ tan(xi) * Delta A.
    """
    mean = float(psi @ m @ psi)
    spread = math.sqrt(max(float(psi @ m @ m @ psi) - mean ** 2, 0.0))
    sign = -1.0 if objective == "minimize" else 1.0
    return mean + sign * math.tan(xi) * spread


def planar_value(theta_n, xi):
    return math.cos(theta_n + xi) * math.cos(theta_n) / math.cos(xi)


# Hardy setting in the path basis (I_pI_e, I_pO_e, O_pI_e, O_pO_e)
I = np.array([1.0, 0.0])
O = np.array([0.0, 1.0])
B_DET = (I + O) / math.sqrt(2)
D_DET = (I - O) / math.sqrt(2)


def hardy_detectors():
    det = {"D": D_DET, "B": B_DET}
    return {f"{p}_p{e}_e": np.kron(det[p], det[e]) for p in "DB" for e in "DB"}


def hardy_zetas(eta, x, y, z):
    """Detector overlaps written out by hand."""
    return {
        "D_pD_e": (eta - x - y + z) / 2,
        "D_pB_e": (eta + x - y - z) / 2,
        "B_pD_e": (eta - x + y - z) / 2,
        "B_pB_e": (eta + x + y + z) / 2,
    }


def hardy_closed_forms(eta, x, y, z):
    """General-coefficient weak values, keyed by (row, detector)."""
    zt = hardy_zetas(eta, x, y, z)
    dd, db, bd, bb = zt["D_pD_e"], zt["D_pB_e"], zt["B_pD_e"], zt["B_pB_e"]
    rows = {
        "P[O_p(I_e+O_e)]": (0, -(y + z) / (2 * db), 0, (y + z) / (2 * bb)),
        "P[(I_p+O_p)O_e]": (0, 0, -(x + z) / (2 * bd), (x + z) / (2 * bb)),
        "P[I_pO_e]": (-x / (2 * dd), x / (2 * db), -x / (2 * bd), x / (2 * bb)),
        "P[O_pI_e]": (-y / (2 * dd), -y / (2 * db), y / (2 * bd), y / (2 * bb)),
        "P[O_p*id]": ((-y + z) / (2 * dd), (-y - z) / (2 * db), (y - z) / (2 * bd), (y + z) / (2 * bb)),
        "P[I_p*id]": ((eta - x) / (2 * dd), (eta + x) / (2 * db), (eta - x) / (2 * bd), (eta + x) / (2 * bb)),
        "P[id*O_e]": ((-x + z) / (2 * dd), (x - z) / (2 * db), (-x - z) / (2 * bd), (x + z) / (2 * bb)),
        "P[id*I_e]": ((eta - y) / (2 * dd), (eta - y) / (2 * db), (eta + y) / (2 * bd), (eta + y) / (2 * bb)),
    }
    return rows
