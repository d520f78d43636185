"""Parameters, scalar formulas and Hamiltonian builders.

The Hilbert space is always ordered C (computing qubit) x M (coupler qubit) x
NVE (bosonic mode truncated at ``fock_cutoff`` levels), so a basis state
``|i_C, i_M, n>`` has index ``(2 * i_C + i_M) * fock_cutoff + n``. Qubit index
0 is the ground state. hbar = 1: every frequency is an angular frequency in the
config's unit system, and times are in the reciprocal unit.
"""
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from hybridmem.errors import ConfigError
from hybridmem.linalg import dagger, kron

MU_0 = 4e-7 * math.pi  # T m / A
MU_B = 9.274e-24  # J / T
HBAR = 1.0546e-34  # J s
G_E = 2.0
TWO_PI = 2.0 * math.pi

DIMENSIONLESS = "dimensionless-gamma"
SI = "SI-angular"


@dataclass(frozen=True)
class UnitSystem:
    """How frequencies in a config are measured.

    In ``dimensionless-gamma`` mode every frequency is a multiple of ``gamma``
    (rad/s) and times are in units of 1/gamma. In ``SI-angular`` mode
    frequencies are rad/s and times are seconds.
    """

    mode: str = DIMENSIONLESS
    gamma: float = 1.0

    def __post_init__(self):
        if self.mode not in (DIMENSIONLESS, SI):
            raise ConfigError(f"unknown unit mode {self.mode!r}", "unit.mode")
        if not self.gamma > 0:
            raise ConfigError("reference scale must be positive", "unit.gamma")

    def from_angular(self, omega):
        """rad/s -> config units."""
        return omega / self.gamma if self.mode == DIMENSIONLESS else omega

    def to_angular(self, value):
        """config units -> rad/s."""
        return value * self.gamma if self.mode == DIMENSIONLESS else value


@dataclass(frozen=True)
class FluxQubitParams:
    omega: float
    decay_rate: float = 0.0

    def __post_init__(self):
        if not self.omega > 0:
            raise ConfigError("qubit frequency must be positive", "omega")
        if self.decay_rate < 0:
            raise ConfigError("decay rate must be non-negative", "decay_rate")


@dataclass(frozen=True)
class NVEParams:
    omega_nv: float
    g: float
    n_spins: int = 1
    fock_cutoff: int = 2
    zero_field_D: Optional[float] = None
    g_factor: float = G_E
    b_ext_z: Optional[float] = None

    def __post_init__(self):
        if int(self.fock_cutoff) != self.fock_cutoff or self.fock_cutoff < 2:
            raise ConfigError("fock_cutoff must be an integer >= 2", "nve.fock_cutoff")
        if self.g < 0:
            raise ConfigError("collective coupling must be non-negative", "nve.g")
        if self.n_spins < 1:
            raise ConfigError("n_spins must be >= 1", "nve.n_spins")
        if not self.omega_nv > 0:
            raise ConfigError("NV transition frequency must be positive", "nve.omega_nv")


@dataclass(frozen=True)
class DriveParams:
    """Geometry of the external control wire. SI units throughout.

    ``omega_c_override`` (rad/s) pins the qubit Rabi frequency instead of
    computing it from the loop geometry.
    """

    i_ext: float
    d_c: float
    d_n: float
    loop_side: float
    persistent_current: float
    drive_frequency: Optional[float] = None
    omega_c_override: Optional[float] = None

    def __post_init__(self):
        for name in ("d_c", "d_n", "loop_side", "persistent_current"):
            if not getattr(self, name) > 0:
                raise ConfigError("must be positive", f"drive.{name}")
        if self.i_ext < 0:
            raise ConfigError("must be non-negative", "drive.i_ext")


@dataclass(frozen=True)
class DriveWindow:
    start: float
    stop: float
    omega_c: float
    omega_nv: float
    omega_d: Optional[float] = None

    def __post_init__(self):
        if not self.stop > self.start:
            raise ConfigError("drive window must have stop > start", "schedule.drive_window")


@dataclass(frozen=True)
class Schedule:
    """Piecewise time dependence of omega_M, J_t and the drive.

    ``omega_m_initial`` ramps to the qubit's nominal frequency over
    ``[0, ramp_tau]``; ``None`` means omega_M is constant. ``j_t_segments`` is a
    sequence of ``(start_time, value)`` pairs, the first starting at 0; empty
    means J_t is constant.
    """

    omega_m_initial: Optional[float] = None
    ramp_tau: float = 0.0
    ramp_shape: str = "linear"
    j_t_segments: tuple = ()
    drive_window: Optional[DriveWindow] = None

    def __post_init__(self):
        if self.ramp_tau < 0:
            raise ConfigError("ramp time must be non-negative", "schedule.ramp_tau")
        if self.ramp_shape not in ("linear", "cosine"):
            raise ConfigError(f"unknown ramp shape {self.ramp_shape!r}", "schedule.ramp_shape")
        segs = tuple((float(t), float(v)) for t, v in self.j_t_segments)
        object.__setattr__(self, "j_t_segments", segs)
        if segs:
            starts = [t for t, _ in segs]
            if starts[0] != 0.0:
                raise ConfigError("first J_t segment must start at t = 0", "schedule.j_t_segments")
            if any(b <= a for a, b in zip(starts, starts[1:])):
                raise ConfigError("segment boundaries must be strictly increasing",
                                  "schedule.j_t_segments")

    @staticmethod
    def _check_time(t):
        if t < 0 or not math.isfinite(t):
            raise ValueError(f"schedule queried outside its domain t >= 0: t = {t}")

    def omega_m(self, t, nominal):
        self._check_time(t)
        if self.omega_m_initial is None or t >= self.ramp_tau:
            return nominal
        s = t / self.ramp_tau
        if self.ramp_shape == "cosine":
            s = 0.5 * (1.0 - math.cos(math.pi * s))
        return self.omega_m_initial + (nominal - self.omega_m_initial) * s

    def j_t(self, t, nominal):
        self._check_time(t)
        value = nominal
        for start, v in self.j_t_segments:
            if t >= start:
                value = v
        return value

    def drive(self, t):
        """(omega_C, omega_NV, omega_d) active at t, or None outside the window."""
        self._check_time(t)
        w = self.drive_window
        if w is None or not (w.start <= t < w.stop):
            return None
        return w.omega_c, w.omega_nv, w.omega_d

    def breakpoints(self):
        pts = set()
        if self.omega_m_initial is not None and self.ramp_tau > 0:
            pts.add(self.ramp_tau)
        pts.update(t for t, _ in self.j_t_segments[1:])
        if self.drive_window is not None:
            pts.update((self.drive_window.start, self.drive_window.stop))
        pts.discard(0.0)
        return tuple(sorted(pts))


@dataclass(frozen=True)
class SystemConfig:
    qubit_c: FluxQubitParams
    qubit_m: FluxQubitParams
    nve: NVEParams
    j_t: float
    unit: UnitSystem = field(default_factory=UnitSystem)
    drive: Optional[DriveParams] = None
    schedule: Optional[Schedule] = None
    alpha: complex = 1.0
    beta: complex = 0.0
    dt_max: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > 1e-9:
            raise ConfigError(f"|alpha|^2 + |beta|^2 = {norm!r}, expected 1", "initial")
        if self.dt_max is not None and not self.dt_max > 0:
            raise ConfigError("dt_max must be positive", "dt_max")
        nve = self.nve
        if nve.zero_field_D is not None and nve.b_ext_z is not None:
            expected = self.unit.from_angular(
                nv_transition_frequency(self.unit.to_angular(nve.zero_field_D), nve.g_factor, nve.b_ext_z))
            if abs(expected - nve.omega_nv) > 1e-9 * abs(expected):
                raise ConfigError(
                    f"omega_nv = {nve.omega_nv!r} inconsistent with D, g_e, B_z (expected {expected!r})",
                    "nve.omega_nv")

    @property
    def fock_cutoff(self):
        return self.nve.fock_cutoff

    @property
    def dim(self):
        return 4 * self.nve.fock_cutoff

    @property
    def g(self):
        return self.nve.g

    @property
    def delta_c(self):
        return self.qubit_m.omega - self.qubit_c.omega

    @property
    def delta_nv(self):
        return self.qubit_m.omega - self.nve.omega_nv

    @property
    def mismatch(self):
        return (self.j_t - self.nve.g) / self.j_t

    def omega_m_at(self, t):
        if self.schedule is None:
            if t < 0:
                raise ValueError(f"schedule queried outside its domain t >= 0: t = {t}")
            return self.qubit_m.omega
        return self.schedule.omega_m(t, self.qubit_m.omega)

    def j_t_at(self, t):
        if self.schedule is None:
            if t < 0:
                raise ValueError(f"schedule queried outside its domain t >= 0: t = {t}")
            return self.j_t
        return self.schedule.j_t(t, self.j_t)


# ---------------------------------------------------------------- scalar formulas

def nv_transition_frequency(D, g_e, b_z):
    """NV |0> <-> |-1> gap in rad/s for zero-field splitting D (rad/s) and axial field b_z (T)."""
    omega = D - g_e * MU_B * b_z / HBAR
    if not omega > 0:
        raise ValueError(f"non-positive NV transition frequency {omega:.6g} rad/s; "
                         "the two-level reduction does not apply")
    return omega


def field_at_distance(i, d):
    """Field magnitude (T) of a straight wire carrying current i (A) at distance d (m)."""
    if not d > 0:
        raise ValueError(f"distance must be positive, got {d}")
    return MU_0 * i / (TWO_PI * d)


def rabi_frequency_qubit(p):
    """Drive Rabi frequency of the computing qubit, rad/s."""
    return MU_0 * p.loop_side ** 2 * p.persistent_current * p.i_ext / (TWO_PI * HBAR * p.d_c)


def rabi_frequency_nve(p, n, g_e=G_E):
    """Leakage Rabi frequency of the ensemble, rad/s. Grows as sqrt(n)."""
    return math.sqrt(n) * g_e * MU_B * MU_0 * p.i_ext / (2.0 * HBAR * math.pi * p.d_n)


def effective_lambda(g, j_t, delta_nv, delta_c):
    """Coupling between C and the ensemble mediated by a far-detuned M."""
    if delta_nv == 0 or delta_c == 0:
        raise ValueError("effective coupling needs non-zero detunings (dispersive regime)")
    return 0.5 * g * j_t * (1.0 / delta_nv + 1.0 / delta_c)


# ---------------------------------------------------------------- operators

SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.T.copy()
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
NUMBER_2 = np.diag([0.0, 1.0]).astype(complex)
I2 = np.eye(2, dtype=complex)


def annihilation(fock_cutoff):
    return np.diag(np.sqrt(np.arange(1, fock_cutoff)), 1).astype(complex)


def basis_index(i_c, i_m, n, fock_cutoff):
    return (2 * i_c + i_m) * fock_cutoff + n


def on_c(op, fock_cutoff):
    return kron(op, I2, np.eye(fock_cutoff))


def on_m(op, fock_cutoff):
    return kron(I2, op, np.eye(fock_cutoff))


def on_nve(op):
    return kron(I2, I2, op)


def embed_c_nve(op, fock_cutoff):
    """Lift an operator on C x NVE to the full space with identity on M."""
    f = fock_cutoff
    op = np.asarray(op, dtype=complex).reshape(2, f, 2, f)
    full = np.einsum("anbp,mk->amnbkp", op, I2)
    return full.reshape(4 * f, 4 * f)


@lru_cache(maxsize=None)
def number_ops(fock_cutoff):
    """(n_C, n_M, n_NVE) on the full space. Cached and read-only."""
    b = annihilation(fock_cutoff)
    ops = on_c(NUMBER_2, fock_cutoff), on_m(NUMBER_2, fock_cutoff), on_nve(dagger(b) @ b)
    for op in ops:
        op.flags.writeable = False
    return ops


def excitation_number(fock_cutoff):
    return sum(number_ops(fock_cutoff))


@lru_cache(maxsize=None)
def _exchange_ops(fock_cutoff):
    f = fock_cutoff
    b = on_nve(annihilation(f))
    sm_m, sm_c = on_m(SIGMA_MINUS, f), on_c(SIGMA_MINUS, f)
    mb = dagger(sm_m) @ b
    mc = dagger(sm_m) @ sm_c
    ops = mb + dagger(mb), mc + dagger(mc)
    for op in ops:
        op.flags.writeable = False
    return ops


def _exchange_terms(g, j_t, fock_cutoff):
    x_mb, x_mc = _exchange_ops(fock_cutoff)
    return g * x_mb + j_t * x_mc


# ---------------------------------------------------------------- Hamiltonians

def build_h_frame(cfg, t=0.0, omega_ref=0.0):
    """RWA Hamiltonian in a frame rotating at ``omega_ref`` for every excitation.

    Equals the lab-frame RWA Hamiltonian minus ``omega_ref * N``; exchange terms
    commute with N so only the free part and the drive phases change.
    """
    f = cfg.fock_cutoff
    n_c, n_m, n_b = number_ops(f)
    h = ((cfg.qubit_c.omega - omega_ref) * n_c
         + (cfg.omega_m_at(t) - omega_ref) * n_m
         + (cfg.nve.omega_nv - omega_ref) * n_b)
    h = h + _exchange_terms(cfg.g, cfg.j_t_at(t), f)
    drive = cfg.schedule.drive(t) if cfg.schedule is not None else None
    if drive is not None:
        om_c, om_nv, om_d = drive
        if om_d is None:
            om_d = cfg.qubit_c.omega
        phase = np.exp(-1j * (om_d - omega_ref) * t)
        up = om_c * phase * on_c(SIGMA_PLUS, f) + om_nv * phase * on_nve(dagger(annihilation(f)))
        h = h + up + dagger(up)
    return h


def build_h_rwa(cfg, t=0.0):
    """Lab-frame RWA Hamiltonian at time t, with omega_M, J_t and drive read from the schedule."""
    return build_h_frame(cfg, t, 0.0)


def build_h_resonant(g, j_t, fock_cutoff=2):
    """Interaction-picture Hamiltonian at exact three-way resonance."""
    if fock_cutoff < 2:
        raise ValueError("fock_cutoff must be >= 2")
    return _exchange_terms(g, j_t, fock_cutoff)


def build_h_detuned(delta_c, delta_nv, g, j_t, fock_cutoff=2):
    """RWA Hamiltonian seen from qubit M's rotating frame, with C and NVE at +delta.

    This is the orientation whose Froehlich limit is exactly
    :func:`build_h_dispersive`. It equals ``-P (H_rwa - omega_M N) P`` with
    ``P = (-1)**n_M``: a mirror image of the lab dynamics that leaves every
    fidelity against a real target unchanged.
    """
    n_c, _, n_b = number_ops(fock_cutoff)
    return delta_c * n_c + delta_nv * n_b + _exchange_terms(g, j_t, fock_cutoff)


def dispersive_energies(g, j_t, delta_c, delta_nv):
    """Dispersively shifted energies (E_C, E_NVE) of the effective Hamiltonian."""
    if delta_c == 0 or delta_nv == 0:
        raise ValueError("dispersive Hamiltonian needs non-zero detunings")
    return delta_c + j_t ** 2 / delta_c, delta_nv + g ** 2 / delta_nv


def build_h_dispersive(cfg):
    """Effective C-NVE Hamiltonian after eliminating a far-detuned M (M left in its ground state).

    Returned on the full space with identity on M.
    """
    g, j_t, d_c, d_nv = cfg.g, cfg.j_t, cfg.delta_c, cfg.delta_nv
    e_c, e_nv = dispersive_energies(g, j_t, d_c, d_nv)
    if min(abs(d_c), abs(d_nv)) < 5.0 * max(g, j_t):
        warnings.warn(f"detunings ({d_c:.3g}, {d_nv:.3g}) are not >= 5 max(g, J_t); "
                      "the effective Hamiltonian may be inaccurate", RuntimeWarning, stacklevel=2)
    lam = effective_lambda(g, j_t, d_nv, d_c)
    f = cfg.fock_cutoff
    b = annihilation(f)
    sm = kron(SIGMA_MINUS, np.eye(f))
    bb = kron(I2, b)
    h = e_nv * (dagger(bb) @ bb) + e_c * (dagger(sm) @ sm)
    coupling = lam * (sm @ dagger(bb))
    return embed_c_nve(h + coupling + dagger(coupling), f)


def build_h_single(g, fock_cutoff=2):
    """Single flux-qubit / NVE exchange Hamiltonian on C x NVE (no M factor)."""
    if fock_cutoff < 2:
        raise ValueError("fock_cutoff must be >= 2")
    coupling = g * kron(SIGMA_MINUS, dagger(annihilation(fock_cutoff)))
    return coupling + dagger(coupling)


def build_h_lab(cfg):
    """Full Hamiltonian in the persistent-current basis at the degeneracy point (no RWA).

    Qubit factors are in the sigma_z (flux) basis here, unlike every other
    builder; see :func:`flux_to_energy_basis`.
    """
    f = cfg.fock_cutoff
    b = annihilation(f)
    x_b = on_nve(b + dagger(b))
    h = 0.5 * cfg.qubit_c.omega * on_c(SIGMA_X, f) + 0.5 * cfg.qubit_m.omega * on_m(SIGMA_X, f)
    h = h + cfg.nve.omega_nv * on_nve(dagger(b) @ b)
    h = h + cfg.g * on_m(SIGMA_Z, f) @ x_b
    h = h + cfg.j_t * on_m(SIGMA_Z, f) @ on_c(SIGMA_Z, f)
    return h


def flux_to_energy_basis(fock_cutoff):
    """Unitary W with columns = qubit energy eigenstates (ground, excited) in the flux basis.

    A state in the flux basis maps to the energy basis as ``W^dag psi``.
    """
    w = np.array([[1, 1], [-1, 1]], dtype=complex) / math.sqrt(2)
    return kron(w, w, np.eye(fock_cutoff))


def drive_amplitudes(p, n, g_e=G_E):
    """(Omega_C, Omega_NV) in rad/s, honouring ``omega_c_override``."""
    om_c = p.omega_c_override if p.omega_c_override is not None else rabi_frequency_qubit(p)
    return om_c, rabi_frequency_nve(p, n, g_e)


def build_drive_terms(p, n, g_e, fock_cutoff, scale=1.0):
    """Drive Hamiltonian Omega_C sigma_x^C + Omega_NV (b + b^dag) in the drive frame.

    Amplitudes are in rad/s divided by ``scale`` (pass gamma for dimensionless configs).
    """
    om_c, om_nv = drive_amplitudes(p, n, g_e)
    b = annihilation(fock_cutoff)
    return (om_c / scale) * on_c(SIGMA_X, fock_cutoff) + (om_nv / scale) * on_nve(b + dagger(b))


def collapse_operators(cfg):
    """Jump operators sqrt(gamma_M) sigma_M^- and sqrt(gamma_C) sigma_C^-. The ensemble does not decay."""
    f = cfg.fock_cutoff
    return [math.sqrt(cfg.qubit_m.decay_rate) * on_m(SIGMA_MINUS, f),
            math.sqrt(cfg.qubit_c.decay_rate) * on_c(SIGMA_MINUS, f)]
