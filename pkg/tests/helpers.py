
from oracles import random_hermitian, random_state, random_unitary
from weakval.hilbert import Observable, make_state


def labels(n):
    return tuple(f"e{k}" for k in range(n))


def state(vec):
    return make_state(labels(len(vec)), vec)


def random_setup(rng, n):
    """Pre-state, a random orthonormal post basis and two random observables."""
    pre = state(random_state(rng, n))
    u = random_unitary(rng, n)
    basis = [state(u[:, k]) for k in range(n)]
    a = Observable(random_hermitian(rng, n), "A")
    b = Observable(random_hermitian(rng, n), "B")
    return pre, basis, a, b
