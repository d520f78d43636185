import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hybridmem.analytic import (dispersive_amplitudes, dispersive_transfer_time, resonant_amplitudes,
                                resonant_transfer_time)
from hybridmem.dynamics import TimeGrid, evolve_pure
from hybridmem.experiments import initial_state
from hybridmem.model import basis_index, build_h_resonant

SITES = [basis_index(1, 0, 0, 2), basis_index(0, 1, 0, 2), basis_index(0, 0, 1, 2)]


@given(st.floats(0.05, 3.0), st.floats(0.05, 3.0), st.floats(0.0, 20.0))
def test_resonant_amplitudes_normalized(j, g, t):
    a = resonant_amplitudes(j, g, t)
    assert sum(abs(c) ** 2 for c in a.as_tuple()) == pytest.approx(1.0, abs=1e-12)


def test_resonant_amplitudes_start_in_c():
    assert resonant_amplitudes(0.7, 1.3, 0.0).as_tuple() == pytest.approx((1, 0, 0))


@given(st.floats(0.1, 3.0), st.floats(0.1, 3.0))
def test_resonant_amplitudes_match_propagator(j, g):
    grid = TimeGrid(0.0, 20.0, 81, 1.0)
    traj = evolve_pure(build_h_resonant(g, j), initial_state(0.0, 1.0), grid)
    for t, psi in zip(traj.times, traj.states):
        assert np.allclose(psi[SITES], resonant_amplitudes(j, g, t).as_tuple(), atol=1e-10)


def test_complete_transfer_at_nominal_time():
    g = 1.0
    t = resonant_transfer_time(g)
    assert t == pytest.approx(math.pi / math.sqrt(2))
    assert resonant_amplitudes(g, g, t).c3 == pytest.approx(-1.0)
    assert resonant_transfer_time(g, 1) == pytest.approx(3 * t)
    with pytest.raises(ValueError):
        resonant_transfer_time(0.0)


def test_dispersive_rabi_resonant_case():
    lam = 0.1
    t = dispersive_transfer_time(lam)
    assert t == pytest.approx(5 * math.pi)
    c_amp, n_amp = dispersive_amplitudes(lam, 0.0, t)
    assert abs(c_amp) == pytest.approx(0.0, abs=1e-12)
    assert n_amp == pytest.approx(-1j)


@given(st.floats(0.01, 1.0), st.floats(-2.0, 2.0), st.floats(0.0, 50.0))
def test_dispersive_amplitudes_match_two_level_propagator(lam, delta, t):
    h = np.array([[0.5 * delta, lam], [lam, -0.5 * delta]])
    evals, evecs = np.linalg.eigh(h)
    psi = evecs @ (np.exp(-1j * evals * t) * evecs[0].conj())
    assert np.allclose(dispersive_amplitudes(lam, delta, t), psi, atol=1e-10)


def test_normalization_over_many_random_inputs():
    rng = np.random.default_rng(11)
    for j, g, t in zip(rng.uniform(0.01, 5, 10_000), rng.uniform(0.01, 5, 10_000), rng.uniform(0, 50, 10_000)):
        a = resonant_amplitudes(j, g, t)
        assert abs(abs(a.c1) ** 2 + abs(a.c2) ** 2 + abs(a.c3) ** 2 - 1) < 1e-12


@given(st.floats(0.01, 3.0), st.floats(0.01, 3.0), st.floats(0.0, 30.0))
def test_stored_amplitude_range(j, g, t):
    c3 = resonant_amplitudes(j, g, t).c3
    assert c3.real <= 1e-15
    assert abs(c3) <= 2 * j * g / (j * j + g * g) + 1e-12


def test_far_off_resonant_rabi_transfer_is_small():
    lam, delta = 0.01, 1.0
    ts = np.linspace(0, 200, 4001)
    pops = [abs(dispersive_amplitudes(lam, delta, t)[1]) ** 2 for t in ts]
    assert max(pops) == pytest.approx(lam ** 2 / (lam ** 2 + 0.25 * delta ** 2), rel=1e-3)
