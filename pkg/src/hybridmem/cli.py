"""Command-line entry point and the only module that touches the filesystem.

Config documents are JSON. In ``SI-angular`` mode frequencies are entered in
MHz (cyclic) and times in ns; lengths, currents and fields are metres, amperes
and tesla. In ``dimensionless-gamma`` mode frequencies are multiples of gamma
and times multiples of 1/gamma. Outputs use the same units as the input.
"""
import argparse
import copy
import hashlib
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field

import numpy as np

from hybridmem import __version__, presets
from hybridmem.errors import ConfigError, NumericalError
from hybridmem.experiments import (Axis, SweepSpec, TargetConvention, config_hash, run_decoherence_study,
                                   run_detuning_heatmap, run_dispersive_compare, run_dispersive_heatmap,
                                   run_ramp_sweep, run_resonant_storage, run_separation_study, sweep)
from hybridmem.model import (DIMENSIONLESS, SI, DriveParams, DriveWindow, FluxQubitParams, NVEParams,
                             Schedule, SystemConfig, UnitSystem)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4
SCENARIO_NAMES = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "custom-sweep")
MANIFEST_NAME = "manifest.json"
TRAJECTORY_COLUMNS = ("t", "fidelity", "pop_C", "pop_M", "pop_NVE", "norm")

MHZ = 2.0 * math.pi * 1e6
NS = 1e-9

# field -> quantity kind, for unit conversion of config and sweep values
FREQUENCY_FIELDS = {"omega", "decay_rate", "omega_nv", "g", "zero_field_D", "j_t", "omega_m_initial",
                    "omega_c", "omega_d", "delta_c", "delta_nv", "delta", "delta_max", "gamma_decay"}
TIME_FIELDS = {"ramp_tau", "dt_max", "start", "stop", "t_end"}


# ---------------------------------------------------------------- units

class Units:
    def __init__(self, unit):
        self.si = unit.mode == SI

    def freq_in(self, v):
        return v * MHZ if self.si else v

    def freq_out(self, v):
        return v / MHZ if self.si else v

    def time_in(self, v):
        return v * NS if self.si else v

    def time_out(self, v):
        return v / NS if self.si else v

    def convert_in(self, path, v):
        leaf = path.split(".")[-1]
        if leaf in FREQUENCY_FIELDS:
            return self.freq_in(v)
        if leaf in TIME_FIELDS:
            return self.time_in(v)
        return v

    def convert_out(self, path, v):
        leaf = path.split(".")[-1]
        if leaf in FREQUENCY_FIELDS:
            return self.freq_out(v)
        if leaf in TIME_FIELDS:
            return self.time_out(v)
        return v


# ---------------------------------------------------------------- config documents

def _section(doc, path, required=(), optional=()):
    if not isinstance(doc, dict):
        raise ConfigError("expected an object", path)
    allowed = set(required) | set(optional)
    for key in doc:
        if key not in allowed:
            raise ConfigError("unknown key", f"{path}.{key}" if path else key)
    for key in required:
        if key not in doc:
            raise ConfigError("missing required field", f"{path}.{key}" if path else key)
    return doc


def _number(doc, key, path, default=None, kind=float):
    if key not in doc:
        return default
    v = doc[key]
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError("expected a number", f"{path}.{key}")
    if not math.isfinite(v):
        raise ConfigError("expected a finite number", f"{path}.{key}")
    return kind(v)


def _complex(v, path):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise ConfigError("expected a number or [re, im]", path)


def parse_document(doc):
    """Validated SystemConfig from a decoded config document (scenario block ignored)."""
    _section(doc, "", required=("qubit_c", "qubit_m", "nve", "j_t"),
             optional=("unit", "drive", "schedule", "initial", "dt_max", "scenario"))
    unit_doc = _section(doc.get("unit", {}), "unit", optional=("mode", "gamma_mhz"))
    mode = unit_doc.get("mode", DIMENSIONLESS)
    gamma = _number(unit_doc, "gamma_mhz", "unit", 1.0 / MHZ)
    if gamma is None or not gamma > 0:
        raise ConfigError("must be positive", "unit.gamma_mhz")
    unit = UnitSystem(mode, gamma * MHZ)
    u = Units(unit)
    f_in, t_in = u.freq_in, u.time_in

    def qubit(name):
        d = _section(doc[name], name, required=("omega",), optional=("decay_rate",))
        omega, decay = _number(d, "omega", name), _number(d, "decay_rate", name, 0.0)
        try:
            return FluxQubitParams(f_in(omega), f_in(decay))
        except ConfigError as e:
            raise ConfigError(str(e).split(": ", 1)[-1], f"{name}.{e.path}") from None

    nd = _section(doc["nve"], "nve", required=("omega_nv", "g"),
                  optional=("n_spins", "fock_cutoff", "zero_field_D", "g_factor", "b_ext_z"))
    cutoff = nd.get("fock_cutoff", 2)
    if isinstance(cutoff, bool) or not isinstance(cutoff, int):
        raise ConfigError("expected an integer", "nve.fock_cutoff")
    zfd = _number(nd, "zero_field_D", "nve")
    nve = NVEParams(
        omega_nv=f_in(_number(nd, "omega_nv", "nve")),
        g=f_in(_number(nd, "g", "nve")),
        n_spins=_number(nd, "n_spins", "nve", 1, int),
        fock_cutoff=cutoff,
        zero_field_D=None if zfd is None else f_in(zfd),
        g_factor=_number(nd, "g_factor", "nve", 2.0),
        b_ext_z=_number(nd, "b_ext_z", "nve"),
    )

    drive = None
    if doc.get("drive") is not None:
        dd = _section(doc["drive"], "drive", required=("i_ext", "d_c", "d_n", "loop_side", "persistent_current"),
                      optional=("drive_frequency_mhz", "omega_c_override_mhz"))
        fq = _number(dd, "drive_frequency_mhz", "drive")
        ov = _number(dd, "omega_c_override_mhz", "drive")
        drive = DriveParams(
            i_ext=_number(dd, "i_ext", "drive"), d_c=_number(dd, "d_c", "drive"), d_n=_number(dd, "d_n", "drive"),
            loop_side=_number(dd, "loop_side", "drive"),
            persistent_current=_number(dd, "persistent_current", "drive"),
            drive_frequency=None if fq is None else fq * MHZ,
            omega_c_override=None if ov is None else ov * MHZ,
        )

    schedule = None
    if doc.get("schedule") is not None:
        sd = _section(doc["schedule"], "schedule",
                      optional=("omega_m_initial", "ramp_tau", "ramp_shape", "j_t_segments", "drive_window"))
        om0 = _number(sd, "omega_m_initial", "schedule")
        segs = sd.get("j_t_segments", [])
        if not isinstance(segs, list) or not all(isinstance(s, list) and len(s) == 2 for s in segs):
            raise ConfigError("expected a list of [start, value] pairs", "schedule.j_t_segments")
        window = None
        if sd.get("drive_window") is not None:
            wd = _section(sd["drive_window"], "schedule.drive_window",
                          required=("start", "stop", "omega_c", "omega_nv"), optional=("omega_d",))
            od = _number(wd, "omega_d", "schedule.drive_window")
            window = DriveWindow(t_in(_number(wd, "start", "schedule.drive_window")),
                                 t_in(_number(wd, "stop", "schedule.drive_window")),
                                 f_in(_number(wd, "omega_c", "schedule.drive_window")),
                                 f_in(_number(wd, "omega_nv", "schedule.drive_window")),
                                 None if od is None else f_in(od))
        schedule = Schedule(
            omega_m_initial=None if om0 is None else f_in(om0),
            ramp_tau=t_in(_number(sd, "ramp_tau", "schedule", 0.0)),
            ramp_shape=sd.get("ramp_shape", "linear"),
            j_t_segments=tuple((t_in(float(a)), f_in(float(b))) for a, b in segs),
            drive_window=window,
        )

    init = _section(doc.get("initial", {}), "initial", optional=("alpha", "beta"))
    alpha = _complex(init.get("alpha", 1.0), "initial.alpha")
    beta = _complex(init.get("beta", 0.0), "initial.beta")
    dt_max = _number(doc, "dt_max", "")
    j_t = _number(doc, "j_t", "")
    return SystemConfig(
        qubit_c=qubit("qubit_c"), qubit_m=qubit("qubit_m"), nve=nve, j_t=f_in(j_t), unit=unit,
        drive=drive, schedule=schedule, alpha=alpha, beta=beta,
        dt_max=None if dt_max is None else t_in(dt_max),
    )


def parse_config(text):
    """SystemConfig from a JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed JSON: {e}") from None
    return parse_document(doc)


def _cplx_out(z):
    return z.real if z.imag == 0 else [z.real, z.imag]


def config_to_document(cfg):
    """Inverse of :func:`parse_document`, in input units."""
    u = Units(cfg.unit)
    fo, to = u.freq_out, u.time_out
    doc = {"unit": {"mode": cfg.unit.mode}}
    if cfg.unit.mode == DIMENSIONLESS:
        doc["unit"]["gamma_mhz"] = cfg.unit.gamma / MHZ
    doc["qubit_c"] = {"omega": fo(cfg.qubit_c.omega), "decay_rate": fo(cfg.qubit_c.decay_rate)}
    doc["qubit_m"] = {"omega": fo(cfg.qubit_m.omega), "decay_rate": fo(cfg.qubit_m.decay_rate)}
    n = cfg.nve
    doc["nve"] = {"omega_nv": fo(n.omega_nv), "g": fo(n.g), "n_spins": n.n_spins, "fock_cutoff": n.fock_cutoff,
                  "g_factor": n.g_factor}
    if n.zero_field_D is not None:
        doc["nve"]["zero_field_D"] = fo(n.zero_field_D)
    if n.b_ext_z is not None:
        doc["nve"]["b_ext_z"] = n.b_ext_z
    doc["j_t"] = fo(cfg.j_t)
    if cfg.drive is not None:
        d = cfg.drive
        doc["drive"] = {"i_ext": d.i_ext, "d_c": d.d_c, "d_n": d.d_n, "loop_side": d.loop_side,
                        "persistent_current": d.persistent_current}
        if d.drive_frequency is not None:
            doc["drive"]["drive_frequency_mhz"] = d.drive_frequency / MHZ
        if d.omega_c_override is not None:
            doc["drive"]["omega_c_override_mhz"] = d.omega_c_override / MHZ
    if cfg.schedule is not None:
        s = cfg.schedule
        sd = {"ramp_tau": to(s.ramp_tau), "ramp_shape": s.ramp_shape,
              "j_t_segments": [[to(a), fo(b)] for a, b in s.j_t_segments]}
        if s.omega_m_initial is not None:
            sd["omega_m_initial"] = fo(s.omega_m_initial)
        if s.drive_window is not None:
            w = s.drive_window
            sd["drive_window"] = {"start": to(w.start), "stop": to(w.stop), "omega_c": fo(w.omega_c),
                                  "omega_nv": fo(w.omega_nv)}
            if w.omega_d is not None:
                sd["drive_window"]["omega_d"] = fo(w.omega_d)
        doc["schedule"] = sd
    doc["initial"] = {"alpha": _cplx_out(cfg.alpha), "beta": _cplx_out(cfg.beta)}
    if cfg.dt_max is not None:
        doc["dt_max"] = to(cfg.dt_max)
    return doc


def _grid_values(spec, path):
    if isinstance(spec, list):
        return [float(v) for v in spec]
    if isinstance(spec, dict):
        _section(spec, path, required=("start", "stop", "num"))
        return np.linspace(spec["start"], spec["stop"], int(spec["num"])).tolist()
    raise ConfigError("expected a list or {start, stop, num}", path)


def default_scenario(name):
    """Built-in (document, scenario block) for each figure."""
    if name == "fig2":
        return config_to_document(presets.fig2()), {"n_points": 401}
    if name == "fig3":
        return config_to_document(presets.fig2()), {
            "taus": {"start": 0.0, "stop": 1.0, "num": 21}, "delta_maxes": [5.0, 10.0, 20.0, 40.0],
            "shape": "linear"}
    if name == "fig4":
        lin = {"start": -2.0, "stop": 2.0, "num": 41}
        return config_to_document(presets.fig2()), {
            "axes": [{"path": "delta_c", "values": lin}, {"path": "delta_nv", "values": lin}],
            "reduction": "at-nominal-transfer-time"}
    if name == "fig5":
        return config_to_document(presets.fig5()), {"n_points": 2001}
    if name == "fig6":
        lin = {"start": 5.0, "stop": 15.0, "num": 41}
        return config_to_document(presets.fig5()), {
            "axes": [{"path": "delta_c", "values": lin}, {"path": "delta_nv", "values": lin}]}
    if name == "fig7":
        return config_to_document(presets.fig7()), {
            "d_n": {"start": 1e-6, "stop": 20e-6, "num": 20}, "theta": math.pi / 4, "mode": "resonant"}
    if name == "fig8":
        return config_to_document(presets.fig8()), {"gammas": [0.0, 0.2, 1.0], "kind": "resonant"}
    if name == "custom-sweep":
        return config_to_document(presets.fig2()), {
            "axes": [{"path": "mismatch", "values": {"start": -0.5, "stop": 0.5, "num": 11}}],
            "scenario": "resonant", "reduction": "at-nominal-transfer-time"}
    raise ConfigError(f"unknown scenario {name!r}", "scenario")


def apply_set(doc, assignment):
    """Apply a ``dotted.key=value`` override to a document in place; value parsed as JSON when possible."""
    if "=" not in assignment:
        raise ConfigError(f"expected key=value, got {assignment!r}", "--set")
    key, raw = assignment.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    parts = key.split(".")
    node = doc
    for p in parts[:-1]:
        if isinstance(node, list):
            node = node[_list_index(node, p, key)]
            continue
        if not isinstance(node.get(p), (dict, list)):
            node[p] = {}
        node = node[p]
    if isinstance(node, list):
        node[_list_index(node, parts[-1], key)] = value
    else:
        node[parts[-1]] = value


def _list_index(node, part, key):
    if not part.isdigit() or int(part) >= len(node):
        raise ConfigError(f"list index {part!r} out of range", key)
    return int(part)


# ---------------------------------------------------------------- writers

def format_float(x):
    """Shortest round-trip representation, scientific notation."""
    x = float(x)
    if not math.isfinite(x):
        raise NumericalError(f"refusing to serialize non-finite value {x!r}")
    return np.format_float_scientific(x, unique=True, trim="-", exp_digits=2)


def _check_columns(columns):
    lengths = {len(v) for v in columns.values()}
    if len(lengths) > 1:
        raise ValueError(f"columns have unequal lengths {sorted(lengths)}")
    for name, values in columns.items():
        arr = np.asarray(values, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise NumericalError(f"column {name!r} contains non-finite values")


def render_csv(columns, manifest_ref=MANIFEST_NAME, meta=None):
    _check_columns(columns)
    import csv
    import io

    buf = io.StringIO()
    ref = f"# manifest={manifest_ref}"
    if meta:
        ref += "".join(f" {k}={v}" for k, v in sorted(meta.items()))
    buf.write(ref + "\r\n")
    w = csv.writer(buf, lineterminator="\r\n")
    names = list(columns)
    w.writerow(names)
    for row in zip(*(columns[n] for n in names)):
        w.writerow([format_float(v) for v in row])
    return buf.getvalue()


def render_json(columns, manifest_ref=MANIFEST_NAME, meta=None):
    _check_columns(columns)
    body = {"metadata": dict(meta or {}, manifest=manifest_ref),
            "columns": {k: [float(v) for v in vals] for k, vals in columns.items()}}
    return json.dumps(body, sort_keys=False, allow_nan=False, indent=1) + "\n"


def atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_records(columns, fmt, path, meta=None):
    """Write one columnar record set as CSV or JSON; returns the path written."""
    text = render_csv(columns, meta=meta) if fmt == "csv" else render_json(columns, meta=meta)
    try:
        atomic_write(path, text)
    except OSError as e:
        raise OSError(f"{path}: {e.strerror or e}") from e
    return path


# ---------------------------------------------------------------- scenarios

@dataclass
class RunManifest:
    scenario: str
    config_path: str
    config_sha256: str
    outputs: list
    tool_version: str = __version__
    wall_clock_seconds: float = 0.0
    overrides: list = field(default_factory=list)

    def to_dict(self):
        return dict(self.__dict__)


def trajectory_columns(traj, units):
    cols = {"t": [units.time_out(t) for t in traj.times]}
    for name in TRAJECTORY_COLUMNS[1:-1]:
        cols[name] = traj.observables[name]
    cols["norm"] = traj.observables["trace" if traj.is_density else "norm"]
    return cols


def sweep_columns(result, units):
    axes = result.axes
    names = [path.replace(".", "_") for path, _ in axes]
    cols = {n: [] for n in names}
    cols["fidelity"] = []
    for idx in np.ndindex(*result.grid.shape):
        for n, (path, values), i in zip(names, axes, idx):
            cols[n].append(units.convert_out(path, values[i]))
        cols["fidelity"].append(result.grid[idx])
    return cols


def _axes_from_block(block, units, path):
    axes = block.get("axes")
    if not isinstance(axes, list) or not axes:
        raise ConfigError("expected a non-empty list of axes", f"{path}.axes")
    out = []
    for k, a in enumerate(axes):
        p = f"{path}.axes[{k}]"
        _section(a, p, required=("path", "values"))
        vals = _grid_values(a["values"], f"{p}.values")
        out.append(Axis(a["path"], tuple(units.convert_in(a["path"], v) for v in vals)))
    return tuple(out)


def execute(name, doc, block, convention, workers):
    """Run a scenario; returns {filename_stem: columns}."""
    cfg = parse_document(doc)
    units = Units(cfg.unit)
    conv = TargetConvention(convention)
    if name == "fig2":
        _section(block, "scenario", optional=("n_points", "t_end"))
        t_end = block.get("t_end")
        traj = run_resonant_storage(cfg, conv, int(block.get("n_points", 401)),
                                    None if t_end is None else units.time_in(t_end))
        return {"trajectory": trajectory_columns(traj, units)}
    if name == "fig3":
        _section(block, "scenario", required=("taus", "delta_maxes"), optional=("shape",))
        taus = [units.time_in(v) for v in _grid_values(block["taus"], "scenario.taus")]
        dmax = [units.freq_in(v) for v in _grid_values(block["delta_maxes"], "scenario.delta_maxes")]
        from hybridmem.experiments import with_ramp
        base = with_ramp(cfg, taus[0], dmax[0], block.get("shape", "linear"))
        return {"ramp": sweep_columns(run_ramp_sweep(base, taus, dmax, workers, conv), units)}
    if name in ("fig4", "fig6", "custom-sweep"):
        _section(block, "scenario", required=("axes",), optional=("reduction", "scenario"))
        axes = _axes_from_block(block, units, "scenario")
        if name == "fig4":
            spec = SweepSpec(axes, "resonant", block.get("reduction", "at-nominal-transfer-time"), conv.value)
            return {"heatmap": sweep_columns(run_detuning_heatmap(cfg, spec, workers), units)}
        if name == "fig6":
            spec = SweepSpec(axes, "dispersive", "max-over-time", conv.value)
            return {"heatmap": sweep_columns(run_dispersive_heatmap(cfg, spec, workers), units)}
        spec = SweepSpec(axes, block.get("scenario", "resonant"),
                         block.get("reduction", "at-nominal-transfer-time"), conv.value)
        return {"sweep": sweep_columns(sweep(cfg, spec, workers), units)}
    if name == "fig5":
        _section(block, "scenario", optional=("n_points", "t_end"))
        t_end = block.get("t_end")
        full, eff = run_dispersive_compare(cfg, conv, int(block.get("n_points", 2001)),
                                           None if t_end is None else units.time_in(t_end))
        return {"trajectory_full": trajectory_columns(full, units),
                "trajectory_effective": trajectory_columns(eff, units)}
    if name == "fig7":
        _section(block, "scenario", required=("d_n",), optional=("theta", "mode"))
        d_n = _grid_values(block["d_n"], "scenario.d_n")
        study = run_separation_study(cfg, d_n, float(block.get("theta", math.pi / 4)),
                                     block.get("mode", "resonant"), conv)
        return {"separation": {"d_n": list(study.d_n), "proposed": list(study.proposed),
                               "single": list(study.single)},
                "trajectory_proposed": trajectory_columns(study.trajectory_proposed, units),
                "trajectory_single": trajectory_columns(study.trajectory_single, units)}
    if name == "fig8":
        _section(block, "scenario", required=("gammas",), optional=("kind", "n_points"))
        gammas = [units.freq_in(v) for v in _grid_values(block["gammas"], "scenario.gammas")]
        kind = block.get("kind", "resonant")
        runs = run_decoherence_study(cfg, gammas, kind, conv, int(block.get("n_points", 401)))
        cols = {"gamma": []}
        for gamma, traj in runs.items():
            tc = trajectory_columns(traj, units)
            cols["gamma"] += [units.freq_out(gamma)] * len(traj.times)
            for k, v in tc.items():
                cols.setdefault(k, []).extend(v)
        cols["trace"] = cols.pop("norm")
        return {"decoherence": cols}
    raise ConfigError(f"unknown scenario {name!r}", "scenario")


def run_scenario(name, config_path=None, out_dir=".", fmt="csv", overrides=(),
                 convention=TargetConvention.PHASE_CORRECTED.value, workers=1):
    """Run one scenario and write its data files plus a manifest. Returns the RunManifest."""
    if name not in SCENARIO_NAMES:
        raise ConfigError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIO_NAMES)}", "scenario")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"unknown format {fmt!r}", "--format")
    started = time.time()
    doc, block = default_scenario(name)
    if config_path is not None:
        with open(config_path, "rb") as fh:
            raw = fh.read()
        try:
            doc = json.loads(raw)
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            raise ConfigError(f"malformed JSON: {e}") from None
        if not isinstance(doc, dict):
            raise ConfigError("config document must be an object")
        block = doc.get("scenario", block)
        raw_hash = hashlib.sha256(raw).hexdigest()
    else:
        raw_hash = None
    doc = copy.deepcopy(doc)
    doc["scenario"] = copy.deepcopy(block)
    for assignment in overrides:
        apply_set(doc, assignment)
    block = doc.pop("scenario")
    effective = json.dumps({"config": doc, "scenario": block}, sort_keys=True).encode()
    eff_hash = hashlib.sha256(effective).hexdigest()
    records = execute(name, doc, block, convention, workers)

    os.makedirs(out_dir, exist_ok=True)
    meta = {"scenario": name, "config_sha256": eff_hash, "tool_version": __version__,
            "convention": TargetConvention(convention).value}
    outputs = []
    for stem, columns in records.items():
        path = os.path.join(out_dir, f"{stem}.{fmt}")
        write_records(columns, fmt, path, meta)
        outputs.append(os.path.basename(path))
    manifest = RunManifest(name, config_path or "<built-in>", raw_hash or eff_hash, outputs,
                           overrides=list(overrides))
    manifest.wall_clock_seconds = time.time() - started
    body = dict(manifest.to_dict(), effective_config_sha256=eff_hash, config_hash=config_hash(parse_document(doc)))
    atomic_write(os.path.join(out_dir, MANIFEST_NAME), json.dumps(body, indent=1, sort_keys=True) + "\n")
    return manifest


def build_parser():
    p = argparse.ArgumentParser(prog="hybridmem", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a figure scenario or a custom sweep")
    r.add_argument("scenario", choices=SCENARIO_NAMES)
    r.add_argument("--config", help="JSON config; built-in figure parameters when omitted")
    r.add_argument("--out", default=".", help="output directory")
    r.add_argument("--format", default="csv", choices=("csv", "json"))
    r.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="dotted-path override of the config document, e.g. nve.g=1.2 or scenario.theta=0.5")
    r.add_argument("--convention", default=TargetConvention.PHASE_CORRECTED.value,
                   choices=[c.value for c in TargetConvention])
    r.add_argument("--workers", type=int, default=int(os.environ.get("HYBRIDMEM_WORKERS", "1")))
    d = sub.add_parser("dump-config", help="print the built-in config document of a scenario")
    d.add_argument("scenario", choices=SCENARIO_NAMES)
    return p


def _fail(kind, message, code):
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "dump-config":
            doc, block = default_scenario(args.scenario)
            print(json.dumps(dict(doc, scenario=block), indent=1))
            return EXIT_OK
        manifest = run_scenario(args.scenario, args.config, args.out, args.format, args.overrides,
                                args.convention, max(1, args.workers))
    except ConfigError as e:
        return _fail("config", str(e), EXIT_CONFIG)
    except (NumericalError, FloatingPointError) as e:
        return _fail("numerical", str(e), EXIT_NUMERICAL)
    except OSError as e:
        return _fail("io", str(e), EXIT_IO)
    except ValueError as e:
        return _fail("config", str(e), EXIT_CONFIG)
    print(json.dumps({"scenario": manifest.scenario, "outputs": manifest.outputs,
                      "seconds": round(manifest.wall_clock_seconds, 3)}))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
