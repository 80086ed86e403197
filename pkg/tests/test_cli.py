import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest

from tord import scenario as scn
from tord.cli import main

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

BENCH_ORDERING_ERROR = 0.32436071498393343
BENCH_DELTA_T_NORM = 0.33708766105531457
# ordering_error / delta_t_norm for the detuned Gaussian at δ = 0, 0.5, 1.
DETUNING_SWEEP = [
    (2.6731262887511095e-09, 0.0),
    (0.08310940786707131, 0.08511224578197082),
    (0.10610292476711716, 0.10790133278020245),
]


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def write_doc(tmp_path, doc, name="s.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def base_doc(**extra):
    doc = json.loads((SCENARIOS / "detuned_benchmark.json").read_text())
    doc.update(extra)
    return doc


def test_zero_interaction_populations(tmp_path):
    doc = base_doc(terms=[], tasks=[{"type": "evolve", "samples": 11}])
    assert main(["run", str(write_doc(tmp_path, doc)), "--out", str(tmp_path / "o")]) == 0
    header, data = read_csv(tmp_path / "o" / "populations.csv")
    assert header == ["t", "p_1", "p_2"]
    assert np.all(data[:, 1] == 1.0) and np.all(data[:, 2] == 0.0)


def test_kick_transfer(tmp_path):
    out = tmp_path / "o"
    assert main(["run", str(SCENARIOS / "kick_transfer.json"), "--out", str(out), "--svg"]) == 0
    _, data = read_csv(out / "populations.csv")
    after = data[data[:, 0] >= 1.0]
    assert abs(after[-1, 2] - 1.0) < 1e-10
    assert np.max(np.abs(after[:, 2] - 1.0)) < 1e-10
    assert (out / "populations.svg").read_text().startswith("<svg")
    _, sweep = read_csv(out / "sweep_task2.csv")
    assert np.allclose(sweep[:, -1], [0.0, 0.5, 1.0], atol=1e-12)


def test_compare_benchmark(tmp_path):
    out = tmp_path / "o"
    assert main(["run", str(SCENARIOS / "detuned_benchmark.json"), "--out", str(out)]) == 0
    rep = json.loads((out / "report.json").read_text())
    assert rep["ordering_error"] == pytest.approx(BENCH_ORDERING_ERROR, abs=1e-9)
    assert rep["delta_t_norm"] == pytest.approx(BENCH_DELTA_T_NORM, abs=1e-9)
    assert rep["tasks"]["2"]["identity_residual"] < 1e-6
    assert 0 < rep["tasks"]["3"]["partial_sum_error"] < 0.2


def test_sweep_theta(tmp_path):
    out = tmp_path / "o"
    args = ["sweep", str(SCENARIOS / "kick_transfer.json"), "--axis", "kicks.0.theta"]
    args += ["--values", f"0,{math.pi / 4!r},{math.pi / 2!r}", "--out", str(out)]
    assert main(args) == 0
    header, data = read_csv(out / "sweep.csv")
    assert header == ["value", "ordering_error", "delta_t_norm", "p_1", "p_2"]
    assert np.allclose(data[:, -1], [0.0, 0.5, 1.0], atol=1e-12)


def test_sweep_detuning(tmp_path):
    out = tmp_path / "o"
    args = ["sweep", str(SCENARIOS / "detuned_gaussian.json"), "--axis", "basis.energies.1"]
    assert main(args + ["--values", "0,0.5,1", "--out", str(out)]) == 0
    _, data = read_csv(out / "sweep.csv")
    assert np.allclose(data[:, 0], [0, 0.5, 1])
    for row, (oe, dt) in zip(data, DETUNING_SWEEP):
        assert row[1] == pytest.approx(oe, abs=1e-9)
        assert row[2] == pytest.approx(dt, abs=1e-9)


def test_sweep_rejects_bad_input(tmp_path, capsys):
    path = str(SCENARIOS / "kick_transfer.json")
    assert main(["sweep", path, "--axis", "kicks.0.theta", "--values", "", "--out", str(tmp_path)]) == 1
    assert main(["sweep", path, "--axis", "kicks.3.theta", "--values", "1", "--out", str(tmp_path)]) == 1
    assert main(["sweep", path, "--axis", "kicks.0.matrix", "--values", "1", "--out", str(tmp_path)]) == 1
    assert "does not resolve" in capsys.readouterr().err


def test_malformed_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "name": "x",\n  "basis": [\n}')
    assert main(["run", str(path), "--out", str(tmp_path / "o")]) == 1
    assert "line 4" in capsys.readouterr().err


@pytest.mark.parametrize(
    "patch, where",
    [
        ({"grid": {"t1": 1.0, "t2": 0.0}}, "grid"),
        ({"initial_state": 5}, "initial_state"),
        ({"terms": [{"envelope": {"kind": "constant"}, "matrix": [[0, [0, 1]], [0, 0]]}]}, "terms[0].matrix"),
        ({"terms": [{"envelope": {"kind": "sawtooth"}, "matrix": "sigma_x"}]}, "terms[0].envelope.kind"),
        ({"tasks": [{"type": "dyson", "n": 7}]}, "tasks[0].n"),
        ({"settings": {"speed": 1}}, "settings.speed"),
    ],
)
def test_invalid_scenarios(tmp_path, capsys, patch, where):
    assert main(["run", str(write_doc(tmp_path, base_doc(**patch))), "--out", str(tmp_path / "o")]) == 1
    assert where in capsys.readouterr().err


def test_convergence_failure_exit_code(tmp_path, capsys):
    doc = base_doc(tasks=[{"type": "evolve"}])
    code = main(["run", str(write_doc(tmp_path, doc)), "--out", str(tmp_path / "o"), "--max-steps", "128"])
    assert code == 2
    err = capsys.readouterr().err
    assert "steps=64" in err and "steps=128" in err


def test_byte_identical_reruns(tmp_path):
    path = str(SCENARIOS / "detuned_gaussian.json")
    for d in ("a", "b"):
        assert main(["run", path, "--out", str(tmp_path / d)]) == 0
    for name in ("populations.csv", "report.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.mark.parametrize("path", sorted(SCENARIOS.glob("*.json")), ids=lambda p: p.stem)
def test_scenario_round_trip(path):
    sc, _ = scn.load(path)
    again = scn.from_dict(json.loads(json.dumps(scn.to_dict(sc))))
    assert scn.to_dict(again) == scn.to_dict(sc)
    assert again.grid == sc.grid
    assert np.array_equal(again.system.basis.energies, sc.system.basis.energies)
    for a, b in zip(again.system.terms, sc.system.terms):
        t = np.linspace(sc.grid.t1, sc.grid.t2, 57)
        assert np.array_equal(a.envelope(t), b.envelope(t)) and np.array_equal(a.w, b.w)


def test_spectral_command(tmp_path):
    out = tmp_path / "o"
    assert main(["spectral", "--eta-list", "0.1,0.01,0.001", "--x-range=-10:10:21", "--out", str(out)]) == 0
    header, data = read_csv(out / "spectral.csv")
    assert header[:2] == ["eta", "x"] and data.shape == (63, 7)
    theta = data[:, 2] + 1j * data[:, 3]
    assert np.max(np.abs(theta - 1 / (data[:, 0] + 1j * data[:, 1]))) < 1e-8
    _, summary = read_csv(out / "eta_sweep.csv")
    assert abs(summary[-1, 1] - math.pi) < 1e-3
    assert np.all(np.diff(summary[:, 2]) <= 0)


def test_spectral_command_rejects_increasing_etas(tmp_path):
    assert main(["spectral", "--eta-list", "0.01,0.1", "--x-range=-1:1:3", "--out", str(tmp_path)]) == 1
