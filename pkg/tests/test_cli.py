import json
import math
import os

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hybridmem import presets
from hybridmem.cli import (EXIT_CONFIG, EXIT_IO, EXIT_NUMERICAL, EXIT_OK, apply_set, config_to_document,
                           format_float, main, parse_config, parse_document, render_csv, run_scenario,
                           write_records)
from hybridmem.errors import ConfigError, NumericalError


def doc_text(cfg):
    return json.dumps(config_to_document(cfg))


@pytest.mark.parametrize("cfg", [presets.fig2(), presets.fig5(), presets.fig7(), presets.fig8(True)])
def test_document_roundtrip(cfg):
    back = parse_config(doc_text(cfg))
    assert back.unit == cfg.unit and back.drive == cfg.drive
    assert back.alpha == pytest.approx(cfg.alpha) and back.beta == pytest.approx(cfg.beta)
    for a, b in [(back.qubit_c.omega, cfg.qubit_c.omega), (back.nve.omega_nv, cfg.nve.omega_nv),
                 (back.g, cfg.g), (back.j_t, cfg.j_t)]:
        assert a == pytest.approx(b, rel=1e-14)


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0.1, 3), st.integers(2, 5))
def test_document_roundtrip_property(d_c, d_nv, g, f):
    cfg = presets.gamma_config(d_c, d_nv, g, 1.0, f)
    back = parse_config(doc_text(cfg))
    assert back.delta_c == pytest.approx(cfg.delta_c, abs=1e-12)
    assert back.delta_nv == pytest.approx(cfg.delta_nv, abs=1e-12)
    assert back.fock_cutoff == f


def test_si_frequencies_are_megahertz():
    doc = config_to_document(presets.fig8())
    assert doc["nve"]["g"] == pytest.approx(35.0)
    assert doc["qubit_c"]["omega"] == pytest.approx(2880.0)
    assert parse_document(doc).g == pytest.approx(2 * math.pi * 35e6)


def test_unknown_key_reports_path():
    doc = config_to_document(presets.fig2())
    doc["nve"]["spin"] = 1
    with pytest.raises(ConfigError) as err:
        parse_document(doc)
    assert err.value.path == "nve.spin"


@pytest.mark.parametrize("mutate, path", [
    (lambda d: d.pop("j_t"), "j_t"),
    (lambda d: d["qubit_c"].update(omega="fast"), "qubit_c.omega"),
    (lambda d: d["nve"].update(fock_cutoff=2.5), "nve.fock_cutoff"),
    (lambda d: d["unit"].update(mode="cgs"), "unit.mode"),
    (lambda d: d.update(initial={"alpha": 1, "beta": 1}), "initial"),
])
def test_invalid_documents(mutate, path):
    doc = config_to_document(presets.fig2())
    mutate(doc)
    with pytest.raises(ConfigError) as err:
        parse_document(doc)
    assert err.value.path == path


def test_malformed_json():
    with pytest.raises(ConfigError, match="malformed"):
        parse_config("{not json")


def test_apply_set_parses_json_values():
    doc = {"nve": {"g": 1.0}}
    apply_set(doc, "nve.g=2.5")
    apply_set(doc, "scenario.mode=dispersive")
    apply_set(doc, "scenario.d_n=[1e-6, 2e-6]")
    assert doc == {"nve": {"g": 2.5}, "scenario": {"mode": "dispersive", "d_n": [1e-6, 2e-6]}}
    with pytest.raises(ConfigError):
        apply_set(doc, "nve.g")


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_format_round_trips(x):
    assert float(format_float(x)) == x


def test_non_finite_values_refused(tmp_path):
    with pytest.raises(NumericalError):
        write_records({"t": [0.0, 1.0], "fidelity": [0.5, float("nan")]}, "csv", tmp_path / "x.csv")
    assert not (tmp_path / "x.csv").exists()


def test_csv_layout():
    text = render_csv({"t": [0.0, 0.5], "fidelity": [1.0, 0.25]}, meta={"scenario": "demo"})
    lines = text.split("\r\n")
    assert lines[0] == "# manifest=manifest.json scenario=demo"
    assert lines[1] == "t,fidelity"
    assert lines[2] == "0e+00,1e+00"
    assert lines[3] == "5e-01,2.5e-01"


def test_fig2_outputs_and_manifest(tmp_path):
    m = run_scenario("fig2", out_dir=tmp_path)
    assert m.outputs == ["trajectory.csv"]
    rows = (tmp_path / "trajectory.csv").read_text().splitlines()
    assert rows[1] == "t,fidelity,pop_C,pop_M,pop_NVE,norm"
    data = np.loadtxt(tmp_path / "trajectory.csv", delimiter=",", skiprows=2)
    assert data.shape == (401, 6)
    assert data[:, 1].max() == pytest.approx(1.0, abs=1e-9)
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["scenario"] == "fig2" and manifest["config_path"] == "<built-in>"
    assert manifest["wall_clock_seconds"] >= 0


def test_reruns_are_byte_identical(tmp_path):
    run_scenario("fig4", out_dir=tmp_path / "a", overrides=["scenario.axes.0.values.num=5"])
    run_scenario("fig4", out_dir=tmp_path / "b", overrides=["scenario.axes.0.values.num=5"], workers=2)
    assert (tmp_path / "a" / "heatmap.csv").read_bytes() == (tmp_path / "b" / "heatmap.csv").read_bytes()


def test_heatmap_long_format(tmp_path):
    run_scenario("fig4", out_dir=tmp_path, fmt="json")
    body = json.loads((tmp_path / "heatmap.json").read_text())
    cols = body["columns"]
    assert list(cols) == ["delta_c", "delta_nv", "fidelity"]
    assert len(cols["fidelity"]) == 41 * 41
    k = int(np.argmax(cols["fidelity"]))
    assert cols["delta_c"][k] == 0.0 and cols["delta_nv"][k] == 0.0


def test_config_file_and_scenario_block(tmp_path):
    doc = config_to_document(presets.fig7())
    doc["scenario"] = {"d_n": [4e-6, 16e-6], "theta": 0.5}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    m = run_scenario("fig7", config_path=str(path), out_dir=tmp_path / "out")
    sep = np.loadtxt(tmp_path / "out" / "separation.csv", delimiter=",", skiprows=2)
    assert sep.shape == (2, 3)
    assert m.config_path == str(path)


def test_main_exit_codes(tmp_path, capsys):
    assert main(["run", "fig2", "--out", str(tmp_path / "ok")]) == EXIT_OK
    assert main(["run", "fig2", "--out", str(tmp_path), "--set", "nve.bogus=1"]) == EXIT_CONFIG
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err == {"error": "config", "message": "nve.bogus: unknown key"}
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["run", "fig2", "--out", str(blocker / "sub")]) == EXIT_IO
    assert main(["run", "fig2", "--config", str(tmp_path / "missing.json")]) == EXIT_IO
    # decay far faster than the step size resolves: the integrator's trace check fires
    assert main(["run", "fig8", "--out", str(tmp_path / "n"), "--set", "scenario.gammas=[1e6]",
                 "--set", "scenario.n_points=3"]) == EXIT_NUMERICAL


def test_workers_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("HYBRIDMEM_WORKERS", "2")
    assert main(["run", "custom-sweep", "--out", str(tmp_path)]) == EXIT_OK


def test_dump_config(capsys):
    assert main(["dump-config", "fig5"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["qubit_m"]["omega"] - doc["qubit_c"]["omega"] == pytest.approx(10.0)
    assert "scenario" in doc
