import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from hybridmem.dynamics import (TimeGrid, default_dt_max, evolve_lindblad, evolve_pure, expectation,
                                expectations, lindblad_rhs)
from hybridmem.errors import NumericalError

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)
SM = np.array([[0, 1], [0, 0]], dtype=complex)  # |0> is ground, lowers |1> -> |0>
N1 = np.diag([0.0, 1.0]).astype(complex)


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def random_state(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def test_constant_hamiltonian_is_exact(rng):
    h = random_hermitian(rng, 6)
    psi0 = random_state(rng, 6)
    grid = TimeGrid(0.0, 3.0, 7, 10.0)
    traj = evolve_pure(h, psi0, grid)
    for t, psi in zip(traj.times, traj.states):
        assert np.allclose(psi, expm(-1j * h * t) @ psi0, atol=1e-12)


def test_piecewise_constant_split_at_breakpoint(rng):
    h1, h2 = random_hermitian(rng, 4), random_hermitian(rng, 4)
    psi0 = random_state(rng, 4)
    t1 = 0.37  # deliberately off the output grid
    grid = TimeGrid(0.0, 1.0, 5, 0.1)
    traj = evolve_pure(lambda t: h1 if t < t1 else h2, psi0, grid, breakpoints=(t1,))
    expected = expm(-1j * h2 * (1.0 - t1)) @ expm(-1j * h1 * t1) @ psi0
    assert np.allclose(traj.final_state(), expected, atol=1e-12)


def driven_qubit(t):
    return 0.5 * SZ + 0.2 * math.cos(1.0 * t) * SX


def test_time_dependent_against_adaptive_oracle():
    psi0 = np.array([1, 0], dtype=complex)
    grid = TimeGrid(0.0, 10.0, 11, 1e-3)
    traj = evolve_pure(driven_qubit, psi0, grid)
    sol = solve_ivp(lambda t, y: -1j * driven_qubit(t) @ y, (0.0, 10.0), psi0, t_eval=grid.times,
                    rtol=1e-12, atol=1e-12, method="DOP853")
    assert np.max(np.abs(traj.states - sol.y.T)) < 1e-6


def test_midpoint_rule_is_second_order():
    psi0 = np.array([1, 0], dtype=complex)
    ref = evolve_pure(driven_qubit, psi0, TimeGrid(0.0, 5.0, 2, 1e-4)).final_state()
    errs = [np.linalg.norm(evolve_pure(driven_qubit, psi0, TimeGrid(0.0, 5.0, 2, dt)).final_state() - ref)
            for dt in (0.04, 0.02)]
    assert 3.5 < errs[0] / errs[1] < 4.5


def test_rejects_unnormalized_state():
    with pytest.raises(ValueError, match="normalized"):
        evolve_pure(SZ, np.array([1.0, 1.0]), TimeGrid(0.0, 1.0, 2, 0.1))


def test_rejects_non_hermitian():
    with pytest.raises(NumericalError):
        evolve_pure(SM, np.array([1.0, 0.0]), TimeGrid(0.0, 1.0, 2, 0.1))


def test_grid_validation():
    with pytest.raises(ValueError):
        TimeGrid(0.0, 1.0, 1, 0.1)
    with pytest.raises(ValueError):
        TimeGrid(1.0, 1.0, 3, 0.1)
    assert default_dt_max(2 * math.pi, 100) == pytest.approx(0.01)


@given(st.integers(0, 10_000))
def test_lindblad_rhs_is_trace_free_and_hermitian(seed):
    rng = np.random.default_rng(seed)
    h = random_hermitian(rng, 4)
    ls = [rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)) for _ in range(2)]
    psi = random_state(rng, 4)
    rho = np.outer(psi, psi.conj())
    d = lindblad_rhs(h, ls)(rho)
    assert abs(np.trace(d)) < 1e-10
    assert np.allclose(d, d.conj().T, atol=1e-10)


def test_single_qubit_decay_is_exponential():
    gamma = 0.3
    rho0 = np.diag([0.0, 1.0]).astype(complex)
    grid = TimeGrid(0.0, 10.0, 101, 0.01)
    traj = evolve_lindblad(0.5 * SZ, [math.sqrt(gamma) * SM], rho0, grid)
    excited = traj.states[:, 1, 1].real
    assert np.max(np.abs(excited - np.exp(-gamma * traj.times))) < 1e-7
    assert np.max(np.abs(traj.observables["trace"] - 1.0)) < 1e-12


def test_lindblad_without_dissipation_matches_unitary(rng):
    h = random_hermitian(rng, 4)
    psi0 = random_state(rng, 4)
    grid = TimeGrid(0.0, 4.0, 9, 0.002)
    pure = evolve_pure(h, psi0, grid)
    mixed = evolve_lindblad(h, [np.zeros((4, 4))], np.outer(psi0, psi0.conj()), grid)
    for psi, rho in zip(pure.states, mixed.states):
        assert np.allclose(rho, np.outer(psi, psi.conj()), atol=1e-9)


def test_lindblad_against_vectorized_oracle(rng):
    h = random_hermitian(rng, 3)
    ls = [0.4 * (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))]
    psi0 = random_state(rng, 3)
    rho0 = np.outer(psi0, psi0.conj())
    grid = TimeGrid(0.0, 2.0, 5, 0.001)
    traj = evolve_lindblad(h, ls, rho0, grid)
    # independent route: superoperator matrix exponential (column stacking)
    eye = np.eye(3)
    sup = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for l in ls:
        ldl = l.conj().T @ l
        sup += np.kron(l.conj(), l) - 0.5 * np.kron(eye, ldl) - 0.5 * np.kron(ldl.T, eye)
    for t, rho in zip(traj.times, traj.states):
        vec = expm(sup * t) @ rho0.reshape(-1, order="F")
        assert np.allclose(rho, vec.reshape(3, 3, order="F"), atol=1e-10)
        assert np.linalg.eigvalsh(rho)[0] > -1e-10


def test_lindblad_rejects_bad_density_matrix():
    grid = TimeGrid(0.0, 1.0, 2, 0.1)
    with pytest.raises(ValueError, match="trace"):
        evolve_lindblad(SZ, [], np.eye(2), grid)
    with pytest.raises(ValueError, match="positive"):
        evolve_lindblad(SZ, [], np.diag([1.5, -0.5]), grid)


def test_trace_drift_detected():
    # a step far too coarse for the decay rate blows up RK4
    rho0 = np.diag([0.0, 1.0]).astype(complex)
    with pytest.raises(NumericalError, match="trace"):
        evolve_lindblad(SZ, [10.0 * SM], rho0, TimeGrid(0.0, 5.0, 2, 1.0))


def test_expectations_agree(rng):
    states = np.array([random_state(rng, 4) for _ in range(3)])
    op = random_hermitian(rng, 4)
    assert np.allclose(expectations(states, op), [expectation(s, op) for s in states])
    rhos = np.array([np.outer(s, s.conj()) for s in states])
    assert np.allclose(expectations(rhos, op), expectations(states, op))
