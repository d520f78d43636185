"""Storage-protocol scenarios, fidelity metrics and the parameter-sweep engine.

Fidelities are computed in a frame where the stored amplitudes do not carry
trivial free-evolution phases:

* resonant family (ramp, detuning maps, separation study): each of C and the
  ensemble rotates at its own bare frequency;
* dispersive family: each rotates at its dispersively shifted energy from the
  effective Hamiltonian, and the full Hamiltonian is taken in qubit M's frame
  (:func:`hybridmem.model.build_h_detuned`).

The frame only moves phases, so populations are frame independent.
"""
import dataclasses
import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from hybridmem import __version__
from hybridmem.analytic import dispersive_transfer_time, resonant_transfer_time
from hybridmem.dynamics import (DEFAULT_STEPS_PER_PERIOD, TimeGrid, Trajectory, default_dt_max,
                                evolve_lindblad, evolve_pure, expectations)
from hybridmem.errors import ConfigError
from hybridmem.model import (Schedule, basis_index, build_drive_terms, build_h_detuned,
                             build_h_dispersive, build_h_frame, build_h_resonant, build_h_single,
                             collapse_operators, dispersive_energies, drive_amplitudes,
                             effective_lambda, embed_c_nve, number_ops)

LINDBLAD_STEPS_PER_PERIOD = 2000


class TargetConvention(str, Enum):
    LITERAL = "paper-literal"
    PHASE_CORRECTED = "phase-corrected"


# phase picked up by the stored |1> amplitude at the nominal transfer time
TRANSFER_PHASE = {"resonant": -1.0 + 0j, "dispersive": -1j, "single": -1j}


# ---------------------------------------------------------------- states and metrics

def initial_state(alpha, beta, fock_cutoff=2):
    """(alpha|0> + beta|1>)_C |0>_M |0>_NVE."""
    psi = np.zeros(4 * fock_cutoff, dtype=complex)
    psi[basis_index(0, 0, 0, fock_cutoff)] = alpha
    psi[basis_index(1, 0, 0, fock_cutoff)] = beta
    return psi


def target_state(alpha, beta, convention=TargetConvention.PHASE_CORRECTED, kind="resonant",
                 fock_cutoff=2):
    """|0>_C |0>_M (alpha|0> + beta|1>)_NVE, with beta times the transfer phase if phase-corrected."""
    norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"|alpha|^2 + |beta|^2 = {norm!r}, expected 1")
    convention = TargetConvention(convention)
    if kind not in TRANSFER_PHASE:
        raise ValueError(f"unknown transfer kind {kind!r}")
    if convention is TargetConvention.PHASE_CORRECTED:
        beta = beta * TRANSFER_PHASE[kind]
    psi = np.zeros(4 * fock_cutoff, dtype=complex)
    psi[basis_index(0, 0, 0, fock_cutoff)] = alpha
    psi[basis_index(0, 0, 1, fock_cutoff)] = beta
    return psi


def fidelity(state, target):
    """|<T|psi>|^2 for a vector, <T|rho|T> for a density matrix."""
    state = np.asarray(state)
    target = np.asarray(target)
    if state.shape[0] != target.shape[0]:
        raise ValueError(f"dimension mismatch: state {state.shape}, target {target.shape}")
    if state.ndim == 1:
        return float(abs(np.vdot(target, state)) ** 2)
    return float(np.vdot(target, state @ target).real)


def fidelities(states, target):
    if states.ndim == 2:
        return np.abs(states @ target.conj()) ** 2
    return np.einsum("i,tij,j->t", target.conj(), states, target).real


def rotate_to_frame(states, times, energies, t0=0.0):
    """Apply exp(+i (t - t0) E) for a diagonal E to each state in the stack."""
    phases = np.exp(1j * np.outer(np.asarray(times) - t0, energies))
    if states.ndim == 2:
        return states * phases
    return states * phases[:, :, None] * phases.conj()[:, None, :]


def frame_energies(e_c, e_nve, fock_cutoff):
    """Diagonal of e_C n_C + e_NVE n_NVE."""
    n_c, _, n_b = number_ops(fock_cutoff)
    return (e_c * n_c + e_nve * n_b).diagonal().real.copy()


def with_observables(traj, fock_cutoff, target, energies=None, t0=0.0, framed=None):
    """Attach fidelity (in the rotating frame) and excitation populations.

    ``framed`` supplies already-rotated states when the frame is not a single
    diagonal rotation.
    """
    states = traj.states if framed is None else framed
    if energies is not None:
        states = rotate_to_frame(states, traj.times, energies, t0)
    obs = dict(traj.observables)
    obs["fidelity"] = fidelities(states, target)
    for name, op in zip(("pop_C", "pop_M", "pop_NVE"), number_ops(fock_cutoff)):
        obs[name] = expectations(traj.states, op)
    return Trajectory(traj.grid, traj.states, obs)


def peak(traj, t_min=None):
    """(time, fidelity) of the largest fidelity sample, optionally only after t_min."""
    t, f = traj.times, traj.observables["fidelity"]
    mask = np.ones_like(t, dtype=bool) if t_min is None else t >= t_min - 1e-12 * max(1.0, abs(t_min))
    k = np.flatnonzero(mask)[np.argmax(f[mask])]
    return float(t[k]), float(f[k])


# ---------------------------------------------------------------- config helpers

def fastest_scale(cfg):
    scales = [math.hypot(cfg.g, cfg.j_t), abs(cfg.delta_c), abs(cfg.delta_nv)]
    sch = cfg.schedule
    if sch is not None:
        if sch.omega_m_initial is not None:
            scales.append(abs(sch.omega_m_initial - cfg.qubit_c.omega))
        if sch.drive_window is not None:
            scales += [abs(sch.drive_window.omega_c), abs(sch.drive_window.omega_nv)]
        scales += [abs(v) for _, v in sch.j_t_segments]
    return max(scales)


def resolve_dt_max(cfg, steps_per_period=DEFAULT_STEPS_PER_PERIOD):
    if cfg.dt_max is not None:
        return cfg.dt_max
    return default_dt_max(fastest_scale(cfg), steps_per_period)


def _require(cond, message, path=None):
    if not cond:
        raise ConfigError(message, path)


def bare_energies(cfg, omega_ref):
    return frame_energies(cfg.qubit_c.omega - omega_ref, cfg.nve.omega_nv - omega_ref, cfg.fock_cutoff)


def dressed_energies(cfg):
    e_c, e_nve = dispersive_energies(cfg.g, cfg.j_t, cfg.delta_c, cfg.delta_nv)
    return frame_energies(e_c, e_nve, cfg.fock_cutoff)


def ideal_lambda(cfg):
    """Effective coupling at the ideal g = J_t for this config's detunings."""
    lam = effective_lambda(cfg.j_t, cfg.j_t, cfg.delta_nv, cfg.delta_c)
    if lam == 0:
        raise ConfigError("ideal effective coupling vanishes; transfer window is degenerate", "detunings")
    return lam


def config_hash(cfg):
    def default(o):
        if isinstance(o, complex):
            return [o.real, o.imag]
        raise TypeError(type(o))

    text = json.dumps(dataclasses.asdict(cfg), sort_keys=True, default=default)
    return hashlib.sha256(text.encode()).hexdigest()


# ---------------------------------------------------------------- scenarios

def run_resonant_storage(cfg, convention=TargetConvention.PHASE_CORRECTED, n_points=401, t_end=None):
    """Ideal three-way resonant storage (constant H, no ramp)."""
    _require(cfg.delta_c == 0 and cfg.delta_nv == 0, "resonant storage needs zero detunings", "detunings")
    f = cfg.fock_cutoff
    t_star = resonant_transfer_time(cfg.g)
    t_end = 4.0 * t_star if t_end is None else t_end
    grid = TimeGrid(0.0, t_end, n_points, resolve_dt_max(cfg))
    traj = evolve_pure(build_h_resonant(cfg.g, cfg.j_t, f), initial_state(cfg.alpha, cfg.beta, f), grid)
    return with_observables(traj, f, target_state(cfg.alpha, cfg.beta, convention, "resonant", f))


def run_detuned_storage(cfg, convention=TargetConvention.PHASE_CORRECTED, n_points=401, t_end=None):
    """Resonant-protocol storage with arbitrary constant detunings (bare C / NVE frame)."""
    f = cfg.fock_cutoff
    t_end = 2.0 * resonant_transfer_time(cfg.j_t) if t_end is None else t_end
    ref = cfg.nve.omega_nv
    grid = TimeGrid(0.0, t_end, n_points, resolve_dt_max(cfg))
    traj = evolve_pure(build_h_frame(cfg, 0.0, ref), initial_state(cfg.alpha, cfg.beta, f), grid)
    return with_observables(traj, f, target_state(cfg.alpha, cfg.beta, convention, "resonant", f),
                            bare_energies(cfg, ref))


def run_ramp_storage(cfg, convention=TargetConvention.PHASE_CORRECTED, n_points=801):
    """Storage with omega_M ramped into resonance over the schedule's ramp time.

    The window runs one ideal transfer period past the end of the ramp.
    """
    _require(cfg.schedule is not None, "ramp scenario needs a schedule", "schedule")
    f = cfg.fock_cutoff
    tau = cfg.schedule.ramp_tau
    t_end = tau + 2.0 * resonant_transfer_time(cfg.g)
    ref = cfg.nve.omega_nv
    grid = TimeGrid(0.0, t_end, n_points, resolve_dt_max(cfg))
    traj = evolve_pure(lambda t: build_h_frame(cfg, t, ref), initial_state(cfg.alpha, cfg.beta, f), grid,
                       breakpoints=cfg.schedule.breakpoints())
    return with_observables(traj, f, target_state(cfg.alpha, cfg.beta, convention, "resonant", f),
                            bare_energies(cfg, ref))


def with_ramp(cfg, tau, delta_max, shape=None):
    """Copy of cfg whose omega_M starts delta_max above omega_C and reaches its nominal value at tau."""
    if tau < 0:
        raise ConfigError("ramp time must be non-negative", "schedule.ramp_tau")
    old = cfg.schedule or Schedule()
    sch = dataclasses.replace(old, omega_m_initial=cfg.qubit_c.omega + delta_max, ramp_tau=tau,
                              ramp_shape=shape or old.ramp_shape)
    return dataclasses.replace(cfg, schedule=sch)


def run_dispersive_storage(cfg, convention=TargetConvention.PHASE_CORRECTED, n_points=2001, t_end=None,
                           effective=False):
    """Dispersive storage with the full (M-frame) or the effective Hamiltonian, dressed frame."""
    f = cfg.fock_cutoff
    lam = ideal_lambda(cfg)
    t_end = math.pi / abs(lam) if t_end is None else t_end
    h = build_h_dispersive(cfg) if effective else build_h_detuned(cfg.delta_c, cfg.delta_nv, cfg.g, cfg.j_t, f)
    grid = TimeGrid(0.0, t_end, n_points, resolve_dt_max(cfg))
    traj = evolve_pure(h, initial_state(cfg.alpha, cfg.beta, f), grid)
    return with_observables(traj, f, target_state(cfg.alpha, cfg.beta, convention, "dispersive", f),
                            dressed_energies(cfg))


def run_dispersive_compare(cfg, convention=TargetConvention.PHASE_CORRECTED, n_points=2001, t_end=None):
    """(full, effective) trajectories on one grid."""
    full = run_dispersive_storage(cfg, convention, n_points, t_end)
    eff = run_dispersive_storage(cfg, convention, n_points, t_end, effective=True)
    return full, eff


# ---------------------------------------------------------------- separation study

@dataclass
class SeparationStudy:
    d_n: np.ndarray
    proposed: np.ndarray
    single: np.ndarray
    trajectory_proposed: Trajectory
    trajectory_single: Trajectory
    t_rotation: float


def _rotated_amplitudes(alpha, beta, theta):
    c, s = math.cos(theta), math.sin(theta)
    return c * alpha - 1j * s * beta, -1j * s * alpha + c * beta


def _two_stage(h1, h2, psi0, t1, t2, n_points, dt_max):
    grid = TimeGrid(0.0, t1 + t2, n_points, dt_max)

    def h_of_t(t):
        return h1 if t < t1 else h2

    return evolve_pure(h_of_t, psi0, grid, breakpoints=(t1,))


def _stage_frame(traj, t1, energies1, energies2, restart):
    """Frame of stage 1 before t1, of stage 2 after; ``restart`` resets the stage-2 clock at t1."""
    t = traj.times
    before = t < t1
    out = np.empty_like(traj.states)
    out[before] = rotate_to_frame(traj.states[before], t[before], energies1)
    out[~before] = rotate_to_frame(traj.states[~before], t[~before], energies2, t1 if restart else 0.0)
    return out


def separation_run(cfg, theta, mode="resonant", convention=TargetConvention.PHASE_CORRECTED, n_points=801):
    """Rotate C by theta with the external drive, then store; both architectures.

    Proposed: J_t = 0 while driving (M still coupled to the ensemble), then the
    resonant or dispersive transfer. Single: C couples to the ensemble with g
    throughout, the drive acting on top during the rotation.
    """
    _require(cfg.drive is not None, "separation study needs drive parameters", "drive")
    _require(mode in ("resonant", "dispersive"), f"unknown mode {mode!r}", "mode")
    f = cfg.fock_cutoff
    unit = cfg.unit
    om_c, om_nv = (unit.from_angular(w) for w in drive_amplitudes(cfg.drive, cfg.nve.n_spins, cfg.nve.g_factor))
    _require(om_c > 0, "qubit Rabi frequency is zero", "drive.i_ext")
    t_rot = theta / om_c
    scale = unit.to_angular(1.0)
    drive = build_drive_terms(cfg.drive, cfg.nve.n_spins, cfg.nve.g_factor, f, scale)
    alpha, beta = _rotated_amplitudes(cfg.alpha, cfg.beta, theta)
    psi0 = initial_state(cfg.alpha, cfg.beta, f)
    ref = cfg.qubit_c.omega if cfg.drive.drive_frequency is None else unit.from_angular(cfg.drive.drive_frequency)
    idle = dataclasses.replace(cfg, j_t=0.0, schedule=None)
    h1 = build_h_frame(idle, 0.0, ref) + drive
    e1 = bare_energies(cfg, ref)
    if mode == "resonant":
        h2 = build_h_frame(dataclasses.replace(cfg, schedule=None), 0.0, ref)
        e2, t2 = e1, 2.0 * resonant_transfer_time(cfg.g)
        steps = math.hypot(cfg.g, cfg.j_t)
    else:
        h2 = build_h_detuned(cfg.delta_c, cfg.delta_nv, cfg.g, cfg.j_t, f)
        e2, t2 = dressed_energies(cfg), math.pi / abs(ideal_lambda(cfg))
        steps = max(abs(cfg.delta_c), abs(cfg.delta_nv))
    dt_max = cfg.dt_max or default_dt_max(max(steps, om_c, om_nv, cfg.g))

    proposed = _two_stage(h1, h2, psi0, t_rot, t2, n_points, dt_max)
    proposed = with_observables(proposed, f, target_state(alpha, beta, convention, mode, f),
                                framed=_stage_frame(proposed, t_rot, e1, e2, mode == "dispersive"))

    h_s = embed_c_nve(build_h_single(cfg.g, f), f)
    single = _two_stage(h_s + drive, h_s, psi0, t_rot, math.pi / cfg.g, n_points, dt_max)
    single = with_observables(single, f, target_state(alpha, beta, convention, "single", f), e1)
    return proposed, single, t_rot


def run_separation_study(cfg, d_n_values, theta=math.pi / 4, mode="resonant",
                         convention=TargetConvention.PHASE_CORRECTED, n_points=801):
    """Max storage fidelity after the rotation stage versus the wire-ensemble distance."""
    _require(cfg.drive is not None, "separation study needs drive parameters", "drive")
    d_n_values = np.asarray(d_n_values, dtype=float)
    _require(d_n_values.size > 0, "need at least one distance", "d_n")
    prop, sing = [], []
    for d in d_n_values:
        c = dataclasses.replace(cfg, drive=dataclasses.replace(cfg.drive, d_n=float(d)))
        p, s, t_rot = separation_run(c, theta, mode, convention, n_points)
        prop.append(peak(p, t_rot)[1])
        sing.append(peak(s, t_rot)[1])
    p, s, t_rot = separation_run(cfg, theta, mode, convention, n_points)
    return SeparationStudy(d_n_values, np.array(prop), np.array(sing), p, s, t_rot)


# ---------------------------------------------------------------- decoherence

def run_decoherence_study(cfg, gammas, kind="resonant", convention=TargetConvention.PHASE_CORRECTED,
                          n_points=401, t_end=None, steps_per_period=LINDBLAD_STEPS_PER_PERIOD):
    """Density-matrix storage runs with gamma_C = gamma_M = Gamma for each Gamma in ``gammas``."""
    f = cfg.fock_cutoff
    psi0 = initial_state(cfg.alpha, cfg.beta, f)
    rho0 = np.outer(psi0, psi0.conj())
    if kind == "resonant":
        _require(cfg.delta_c == 0 and cfg.delta_nv == 0, "resonant storage needs zero detunings", "detunings")
        h = build_h_resonant(cfg.g, cfg.j_t, f)
        energies = None
        t_end = 2.0 * resonant_transfer_time(cfg.g) if t_end is None else t_end
    elif kind == "dispersive":
        h = build_h_detuned(cfg.delta_c, cfg.delta_nv, cfg.g, cfg.j_t, f)
        energies = dressed_energies(cfg)
        t_end = math.pi / abs(ideal_lambda(cfg)) if t_end is None else t_end
    else:
        raise ConfigError(f"unknown kind {kind!r}", "kind")
    target = target_state(cfg.alpha, cfg.beta, convention, kind, f)
    out = {}
    for gamma in gammas:
        _require(gamma >= 0, "decay rates must be non-negative", "gamma")
        c = dataclasses.replace(cfg, qubit_c=dataclasses.replace(cfg.qubit_c, decay_rate=gamma),
                                qubit_m=dataclasses.replace(cfg.qubit_m, decay_rate=gamma))
        grid = TimeGrid(0.0, t_end, n_points, resolve_dt_max(c, steps_per_period))
        traj = evolve_lindblad(h, collapse_operators(c), rho0, grid)
        out[gamma] = with_observables(traj, f, target, energies)
    return out


# ---------------------------------------------------------------- sweeps

@dataclass(frozen=True)
class Axis:
    path: str
    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ConfigError("sweep axis is empty", self.path)
        if not all(math.isfinite(v) for v in vals):
            raise ConfigError("sweep values must be finite", self.path)
        object.__setattr__(self, "values", vals)


SCENARIOS = ("resonant", "dispersive", "ramp")
REDUCTIONS = ("max-over-time", "at-nominal-transfer-time")


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple
    scenario: str = "resonant"
    reduction: str = "at-nominal-transfer-time"
    convention: str = TargetConvention.PHASE_CORRECTED.value

    def __post_init__(self):
        axes = tuple(a if isinstance(a, Axis) else Axis(*a) for a in self.axes)
        object.__setattr__(self, "axes", axes)
        if not 1 <= len(axes) <= 2:
            raise ConfigError("a sweep has one or two axes", "sweep.axes")
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}", "sweep.scenario")
        if self.reduction not in REDUCTIONS:
            raise ConfigError(f"unknown reduction {self.reduction!r}", "sweep.reduction")
        TargetConvention(self.convention)


@dataclass
class SweepResult:
    axes: tuple
    grid: np.ndarray
    metadata: dict = field(default_factory=dict)


def _replace_path(obj, parts, value, full):
    if not dataclasses.is_dataclass(obj):
        raise ConfigError("parameter path does not resolve", full)
    names = {f.name for f in dataclasses.fields(obj)}
    head = parts[0]
    if head not in names:
        raise ConfigError("parameter path does not resolve", full)
    if len(parts) == 1:
        return dataclasses.replace(obj, **{head: value})
    child = getattr(obj, head)
    if child is None:
        raise ConfigError("parameter path does not resolve (section absent)", full)
    return dataclasses.replace(obj, **{head: _replace_path(child, parts[1:], value, full)})


def apply_override(cfg, path, value):
    """Return cfg with one parameter changed.

    Besides dotted field paths (``nve.g``, ``drive.d_n``, ``j_t``) a few derived
    names are understood: ``delta_c``, ``delta_nv``, ``delta`` (both, moving C
    and the ensemble relative to M), ``mismatch`` (sets g = J_t (1 - lambda)),
    ``ramp_tau``, ``delta_max`` and ``gamma_decay`` (both qubit decay rates).
    """
    r = dataclasses.replace
    if path == "delta_c":
        return r(cfg, qubit_c=r(cfg.qubit_c, omega=cfg.qubit_m.omega - value))
    if path == "delta_nv":
        return r(cfg, nve=r(cfg.nve, omega_nv=cfg.qubit_m.omega - value))
    if path == "delta":
        return apply_override(apply_override(cfg, "delta_c", value), "delta_nv", value)
    if path == "mismatch":
        if value >= 1.0:
            raise ConfigError("mismatch >= 1 leaves no M-ensemble coupling", path)
        return r(cfg, nve=r(cfg.nve, g=cfg.j_t * (1.0 - value)))
    if path == "ramp_tau":
        sch = cfg.schedule
        if sch is None or sch.omega_m_initial is None:
            raise ConfigError("ramp_tau needs a schedule with an initial omega_M", path)
        return with_ramp(cfg, value, sch.omega_m_initial - cfg.qubit_c.omega)
    if path == "delta_max":
        tau = cfg.schedule.ramp_tau if cfg.schedule is not None else 0.0
        return with_ramp(cfg, tau, value)
    if path == "gamma_decay":
        return r(cfg, qubit_c=r(cfg.qubit_c, decay_rate=value), qubit_m=r(cfg.qubit_m, decay_rate=value))
    if path.endswith("fock_cutoff"):
        value = int(value)
    return _replace_path(cfg, path.split("."), value, path)


def evaluate(cfg, scenario, reduction, convention=TargetConvention.PHASE_CORRECTED):
    """Scalar storage fidelity of one configuration."""
    f = cfg.fock_cutoff
    if scenario == "ramp":
        traj = run_ramp_storage(cfg, convention)
        return peak(traj, cfg.schedule.ramp_tau)[1]
    if scenario == "resonant":
        t_star = resonant_transfer_time(cfg.j_t)
        if reduction == "at-nominal-transfer-time":
            traj = run_detuned_storage(cfg, convention, n_points=2, t_end=t_star)
            return float(traj.observables["fidelity"][-1])
        return peak(run_detuned_storage(cfg, convention))[1]
    if scenario == "dispersive":
        lam = ideal_lambda(cfg)
        if reduction == "at-nominal-transfer-time":
            traj = run_dispersive_storage(cfg, convention, n_points=2, t_end=dispersive_transfer_time(lam))
            return float(traj.observables["fidelity"][-1])
        return peak(run_dispersive_storage(cfg, convention, n_points=1201, t_end=3 * math.pi / (2 * abs(lam))))[1]
    raise ConfigError(f"unknown scenario {scenario!r}", "scenario")


def _cell(args):
    cfg, overrides, scenario, reduction, convention = args
    for path, value in overrides:
        cfg = apply_override(cfg, path, value)
    return evaluate(cfg, scenario, reduction, convention)


def sweep(cfg, spec, workers=1):
    """Evaluate the scenario on the full axis grid, row-major, deterministically."""
    started = time.time()
    axes = spec.axes
    cells = []
    shape = tuple(len(a.values) for a in axes)
    for idx in np.ndindex(*shape):
        overrides = tuple((a.path, a.values[i]) for a, i in zip(axes, idx))
        cells.append((cfg, overrides, spec.scenario, spec.reduction, spec.convention))
    # resolve every path once up front so bad specs fail before any work
    _ = [apply_override(cfg, a.path, a.values[0]) for a in axes]
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_cell, cells, chunksize=max(1, len(cells) // (4 * workers))))
    else:
        values = [_cell(c) for c in cells]
    grid = np.array(values, dtype=float).reshape(shape)
    meta = {
        "scenario": spec.scenario,
        "reduction": spec.reduction,
        "convention": TargetConvention(spec.convention).value,
        "config_hash": config_hash(cfg),
        "tool_version": __version__,
        "started": started,
        "finished": time.time(),
    }
    return SweepResult(tuple((a.path, a.values) for a in axes), grid, meta)


def run_ramp_sweep(cfg, taus, delta_maxes, workers=1, convention=TargetConvention.PHASE_CORRECTED):
    if any(t < 0 for t in taus):
        raise ConfigError("ramp times must be non-negative", "ramp_tau")
    base = with_ramp(cfg, 0.0, delta_maxes[0]) if cfg.schedule is None else cfg
    spec = SweepSpec((Axis("ramp_tau", taus), Axis("delta_max", delta_maxes)), "ramp", "max-over-time",
                     TargetConvention(convention).value)
    return sweep(base, spec, workers)


def run_detuning_heatmap(cfg, spec, workers=1):
    """Resonant-protocol fidelity map, e.g. over (delta_c, delta_nv) or (delta, mismatch)."""
    if spec.scenario != "resonant":
        spec = dataclasses.replace(spec, scenario="resonant")
    return sweep(cfg, spec, workers)


def run_dispersive_heatmap(cfg, spec, workers=1):
    """Dispersive fidelity map, max over [0, 3 pi / (2 Lambda_ideal)] of the full Hamiltonian."""
    spec = dataclasses.replace(spec, scenario="dispersive", reduction="max-over-time")
    return sweep(cfg, spec, workers)
