import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from helpers import state
from weakval.errors import ComplexGeometry, NullPostSelection, OrthogonalIntermediate, ResolutionTooCoarse
from weakval.hilbert import SIGMA_X, SIGMA_Y, Observable, projector_onto, spectral_decomposition
from weakval.optimizer import (
    XI_CEILING,
    check_xi,
    classify_strangeness,
    grid_oracle_extremal,
    lagrange_multipliers,
    planar_postselection,
    solve_optimal_postselection,
    stationarity_vector,
    two_level_weak_value,
)
from weakval.scenarios import build_hardy

seeds = st.integers(0, 2 ** 32 - 1)


def on_cone(phi, pre, xi):
    return (abs(np.linalg.norm(phi.amplitudes) - 1) < 1e-12
            and abs(np.vdot(phi.amplitudes, pre.amplitudes) - math.cos(xi)) < 1e-12)


def test_xi_bounds():
    for bad in (0.0, -0.1, math.pi / 2, 2.0):
        with pytest.raises(ValueError, match=r"xi must be in \(0, xi_ceiling\)"):
            check_xi(bad)
    with pytest.raises(NullPostSelection):
        check_xi(XI_CEILING + 1e-4)
    check_xi(1.0)


def test_planar_formula_and_cone():
    pre = state([1, 1, 1])
    n = state([1, 0, 0])
    xi = 0.4
    phi, value, geom = planar_postselection(pre, n, xi)
    assert geom.theta_n == pytest.approx(math.acos(1 / math.sqrt(3)))
    assert value == pytest.approx(oracles.planar_value(geom.theta_n, xi), abs=1e-14)
    assert on_cone(phi, pre, xi)
    literal = np.vdot(phi.amplitudes, projector_onto(n).matrix @ pre.amplitudes) / math.cos(xi)
    assert abs(literal - value) < 1e-12


def test_planar_plus_branch():
    pre = state([1, 2])
    n = state([1, 0])
    phi, value, geom = planar_postselection(pre, n, 0.3, sign="+")
    assert value == pytest.approx(math.cos(geom.theta_n - 0.3) * math.cos(geom.theta_n) / math.cos(0.3))


def test_negativity_boundary_gives_zero():
    # theta_n + xi = pi/2
    theta = 0.5
    pre = state([math.cos(theta), math.sin(theta)])
    n = state([1, 0])
    _, value, _ = planar_postselection(pre, n, math.pi / 2 - theta)
    assert abs(value) < 1e-10


def test_planar_errors():
    with pytest.raises(OrthogonalIntermediate):
        planar_postselection(state([1, 0]), state([0, 1]), 0.3)
    with pytest.raises(ComplexGeometry):
        planar_postselection(state([1, 1j]), state([1, 0]), 0.3)


@pytest.mark.parametrize("objective", ["minimize", "maximize"])
def test_sigma_x_matches_closed_form(objective):
    pre = state([1, 0])
    xi = math.pi / 3
    result = solve_optimal_postselection(pre, SIGMA_X, xi, objective)
    expected = -math.sqrt(3) if objective == "minimize" else math.sqrt(3)
    assert result.converged
    assert result.weak_value == pytest.approx(expected, abs=1e-10)
    assert on_cone(result.phi, pre, xi)


def test_hardy_projector_matches_oracle():
    hardy = build_hardy()
    A = hardy.observables["P[I_pO_e]"]
    xi = math.pi / 3
    result = solve_optimal_postselection(hardy.pre_state, A, xi)
    # DERIVED: <P> - tan(xi) Delta P with <P> = 1/3, Delta P = sqrt(2)/3
    assert result.weak_value == pytest.approx((1 - math.sqrt(6)) / 3, abs=1e-12)
    assert result.stationarity_residual < 1e-8


def test_degenerate_eigenstate_prestate():
    pre = state([1, 1])
    result = solve_optimal_postselection(pre, SIGMA_X, 0.7)
    assert result.converged and result.weak_value == pytest.approx(1)


def test_complex_scenario_rejected():
    with pytest.raises(ComplexGeometry):
        solve_optimal_postselection(state([1, 0]), SIGMA_Y, 0.5)


def test_multipliers_satisfy_stationarity(rng):
    psi = oracles.random_state(rng, 4, real=True)
    m = oracles.random_hermitian(rng, 4, real=True)
    xi = 0.6
    result = solve_optimal_postselection(state(psi), Observable(m), xi)
    phi = result.phi.amplitudes.real
    lam, mu = lagrange_multipliers(psi, m, phi, xi)
    assert np.linalg.norm(stationarity_vector(psi, m, phi, xi, lam, mu)) < 1e-8
    assert (lam, mu) == pytest.approx((result.lam, result.mu))


@given(st.sampled_from([2, 3, 4, 6]), seeds, st.floats(0.05, 1.4), st.sampled_from(["minimize", "maximize"]))
def test_solver_matches_cone_extremum(n, seed, xi, objective):
    rng = np.random.default_rng(seed)
    psi = oracles.random_state(rng, n, real=True)
    m = oracles.random_hermitian(rng, n, real=True)
    result = solve_optimal_postselection(state(psi), Observable(m), xi, objective)
    expected = oracles.cone_extremum(psi, m, xi, objective)
    assert result.converged
    assert abs(result.weak_value - expected) < 1e-8 * max(1.0, abs(expected))
    assert result.stationarity_residual < 1e-8
    assert on_cone(result.phi, state(psi), xi)


@given(st.sampled_from([2, 3, 4, 5]), seeds, st.floats(0.05, 1.4))
def test_rank_one_matches_planar(n, seed, xi):
    rng = np.random.default_rng(seed)
    psi = oracles.random_state(rng, n, real=True)
    nvec = oracles.random_state(rng, n, real=True)
    pre, proj = state(psi), state(nvec)
    _, planar, _ = planar_postselection(pre, proj, xi)
    result = solve_optimal_postselection(pre, projector_onto(proj), xi)
    assert abs(result.weak_value - planar) < 1e-8


@given(st.sampled_from([2, 3, 4]), seeds, st.floats(0.1, 1.3))
def test_grid_never_beats_solver(n, seed, xi):
    rng = np.random.default_rng(seed)
    psi = oracles.random_state(rng, n, real=True)
    m = oracles.random_hermitian(rng, n, real=True)
    pre, A = state(psi), Observable(m)
    value, phi = grid_oracle_extremal(pre, A, xi, resolution=64)
    assert on_cone(phi, pre, xi)
    assert solve_optimal_postselection(pre, A, xi).weak_value <= value + 1e-9


def test_grid_resolution_floor():
    with pytest.raises(ResolutionTooCoarse):
        grid_oracle_extremal(state([1, 0]), SIGMA_X, 0.5, resolution=4)


def test_classification():
    spec = spectral_decomposition(SIGMA_X)
    assert classify_strangeness(1.5, spec).classification == "above_max"
    assert classify_strangeness(-1.5, spec).classification == "below_min"
    assert classify_strangeness(1.0, spec).classification == "within"


def test_two_level_construction():
    A = Observable(np.diag([-1.0, 0.5, 2.0]))
    spec = spectral_decomposition(A)
    # a_N + (a_1 - a_N) beta / (alpha + beta)
    w = two_level_weak_value(A, -1.5, 1.0)
    assert w == pytest.approx(2.0 + (-3.0) * 1.0 / (-0.5))
    assert classify_strangeness(w, spec).classification == "above_max"
    assert classify_strangeness(two_level_weak_value(A, 0.5, 1.0), spec).classification == "within"
