"""Schroedinger and Lindblad propagation on a uniform output grid.

Pure states are propagated with exact unitaries of a piecewise-constant
Hamiltonian sampled at substep midpoints. Density matrices are integrated with
fixed-step RK4 on the full master equation.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from hybridmem.errors import NumericalError
from hybridmem.linalg import check_hermitian, eig_hermitian, unitary_from_eig

NORM_TOL = 1e-9
TRACE_DRIFT_LIMIT = 1e-6
DEFAULT_STEPS_PER_PERIOD = 200


def default_dt_max(omega_fast, steps_per_period=DEFAULT_STEPS_PER_PERIOD):
    """(1/steps) of the period of the fastest frequency scale."""
    if not omega_fast > 0:
        raise ValueError("fastest frequency scale must be positive")
    return 2.0 * math.pi / (steps_per_period * omega_fast)


@dataclass(frozen=True)
class TimeGrid:
    t_start: float
    t_end: float
    n_points: int
    dt_max: float

    def __post_init__(self):
        if self.n_points < 2:
            raise ValueError("a time grid needs at least two points")
        if not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")
        if not self.dt_max > 0:
            raise ValueError("dt_max must be positive")

    @property
    def times(self):
        return np.linspace(self.t_start, self.t_end, self.n_points)


@dataclass
class Trajectory:
    grid: TimeGrid
    states: np.ndarray
    observables: dict = field(default_factory=dict)

    @property
    def times(self):
        return self.grid.times

    @property
    def is_density(self):
        return self.states.ndim == 3

    def final_state(self):
        return self.states[-1]


def _substeps(t0, t1, dt_max, breakpoints):
    """Split [t0, t1] at breakpoints, then into equal pieces no longer than dt_max."""
    edges = [t0] + [b for b in breakpoints if t0 < b < t1] + [t1]
    steps = []
    for a, b in zip(edges, edges[1:]):
        n = max(1, math.ceil((b - a) / dt_max - 1e-12))
        h = (b - a) / n
        steps.extend((a + k * h, h) for k in range(n))
    return steps


class _UnitaryCache:
    """Remember the last propagator; piecewise-constant schedules repeat H exactly."""

    def __init__(self):
        self.h = None
        self.eig = None
        self.dt = None
        self.u = None

    def get(self, h, dt):
        if self.h is None or not np.array_equal(h, self.h):
            self.h = h
            self.eig = eig_hermitian(h)
            self.dt = None
        if dt != self.dt:
            self.dt = dt
            self.u = unitary_from_eig(*self.eig, dt)
        return self.u


def _check_pure(psi0):
    psi0 = np.asarray(psi0, dtype=complex)
    norm = np.linalg.norm(psi0)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"initial state is not normalized: |psi0| = {norm!r}")
    return psi0


def evolve_pure(h_of_t, psi0, grid, breakpoints=()):
    """Propagate a state vector; ``h_of_t`` is a callable t -> H or a constant matrix."""
    psi0 = _check_pure(psi0)
    times = grid.times
    states = np.empty((len(times), psi0.size), dtype=complex)
    if not callable(h_of_t):
        evals, evecs = eig_hermitian(h_of_t)
        coeffs = evecs.conj().T @ psi0
        phases = np.exp(-1j * np.outer(times - times[0], evals))
        states[:] = (phases * coeffs) @ evecs.T
    else:
        cache = _UnitaryCache()
        psi = psi0.copy()
        states[0] = psi
        for k in range(1, len(times)):
            for t, dt in _substeps(times[k - 1], times[k], grid.dt_max, breakpoints):
                psi = cache.get(h_of_t(t + 0.5 * dt), dt) @ psi
            states[k] = psi
    norms = np.linalg.norm(states, axis=1)
    if np.max(np.abs(norms - 1.0)) > 1e-6:
        raise NumericalError(f"norm drifted to {norms[np.argmax(np.abs(norms - 1))]!r}")
    return Trajectory(grid, states, {"norm": norms})


def _check_density(rho0, atol=1e-10):
    rho0 = check_hermitian(rho0, atol)
    tr = np.trace(rho0).real
    if abs(tr - 1.0) > atol:
        raise ValueError(f"initial density matrix has trace {tr!r}")
    lo = np.linalg.eigvalsh(0.5 * (rho0 + rho0.conj().T))[0]
    if lo < -atol:
        raise ValueError(f"initial density matrix is not positive semidefinite (min eigenvalue {lo:.3e})")
    return rho0


def lindblad_rhs(h, collapse):
    """Right-hand side rho -> -i[H, rho] + sum L rho L^dag - 1/2 {L^dag L, rho}."""
    h = check_hermitian(h)
    ops = [np.asarray(c, dtype=complex) for c in collapse if np.any(c)]
    h_eff = h - 0.5j * sum((c.conj().T @ c for c in ops), np.zeros_like(h))

    def rhs(rho):
        out = -1j * (h_eff @ rho - rho @ h_eff.conj().T)
        for c in ops:
            out += c @ rho @ c.conj().T
        return out

    return rhs


def evolve_lindblad(h_of_t, collapse, rho0, grid, breakpoints=()):
    """Integrate the master equation with fixed-step RK4 (step <= grid.dt_max)."""
    rho = _check_density(np.asarray(rho0, dtype=complex)).copy()
    times = grid.times
    states = np.empty((len(times),) + rho.shape, dtype=complex)
    states[0] = rho
    if callable(h_of_t):
        def rhs_at(t):
            return lindblad_rhs(h_of_t(t), collapse)
    else:
        fixed = lindblad_rhs(h_of_t, collapse)

        def rhs_at(t):
            return fixed
    for k in range(1, len(times)):
        with np.errstate(over="ignore", invalid="ignore"):
            for t, dt in _substeps(times[k - 1], times[k], grid.dt_max, breakpoints):
                f0, fm, f1 = rhs_at(t), rhs_at(t + 0.5 * dt), rhs_at(t + dt)
                k1 = f0(rho)
                k2 = fm(rho + 0.5 * dt * k1)
                k3 = fm(rho + 0.5 * dt * k2)
                k4 = f1(rho + dt * k3)
                rho = rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
                rho = 0.5 * (rho + rho.conj().T)
        drift = abs(np.trace(rho).real - 1.0)
        # written so that a NaN trace also fails
        if not drift <= TRACE_DRIFT_LIMIT:
            raise NumericalError(f"trace drifted by {drift:.3e} at t = {times[k]:.6g}; reduce dt_max")
        states[k] = rho
    traces = np.trace(states, axis1=1, axis2=2).real
    return Trajectory(grid, states, {"trace": traces})


def expectation(state, op):
    """<psi|O|psi> for a vector or Tr(rho O) for a density matrix; real part after a residue check."""
    op = check_hermitian(op)
    state = np.asarray(state, dtype=complex)
    if state.shape[0] != op.shape[0]:
        raise ValueError(f"dimension mismatch: state {state.shape}, operator {op.shape}")
    if state.ndim == 1:
        value = np.vdot(state, op @ state)
    else:
        value = np.trace(state @ op)
    if abs(value.imag) > 1e-10:
        raise NumericalError(f"expectation of a Hermitian operator has imaginary part {value.imag:.3e}")
    return float(value.real)


def expectations(states, op):
    """Vectorized :func:`expectation` over a stack of states."""
    op = check_hermitian(op)
    if states.ndim == 2:
        values = np.einsum("ti,ij,tj->t", states.conj(), op, states)
    else:
        values = np.einsum("tij,ji->t", states, op)
    if np.max(np.abs(values.imag), initial=0.0) > 1e-10:
        raise NumericalError("expectation of a Hermitian operator has an imaginary part")
    return values.real
