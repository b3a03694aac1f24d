import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from qfannes.cli import RunConfig, main, run
from qfannes.fannes import CSV_HEADER
from qfannes.linalg import dump_matrix, load_matrix


@pytest.fixture
def states(tmp_path):
    paths = {}
    for name, diag in {"pure": [1.0, 0.0], "mixed": [0.75, 0.25], "half": [0.5, 0.5],
                       "far": [0.1, 0.9]}.items():
        paths[name] = tmp_path / f"{name}.json"
        dump_matrix(np.diag(diag), paths[name])
    return paths


def _run(config):
    out, err = io.StringIO(), io.StringIO()
    code = run(config, out, err)
    return code, out.getvalue(), err.getvalue()


def test_bound_equality_case(states):
    code, out, _ = _run(RunConfig("bound", q_values=[2.0], input_paths=[states["pure"], states["mixed"]]))
    assert code == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert float(row["lhs"]) == pytest.approx(0.375, abs=1e-14)
    assert float(row["rhs"]) == pytest.approx(0.375, abs=1e-14)
    assert row["hypothesis_met"] == "true" and row["epsilon"] == "0.5"


def test_bound_json(states):
    cfg = RunConfig("bound", q_values=[1.0, 2.0], input_paths=[states["pure"], states["mixed"]], format="json")
    code, out, _ = _run(cfg)
    reports = json.loads(out)
    # 0.5 lies outside the q = 1 radius 1/e, so the run is flagged
    assert code == 2 and [r["q"] for r in reports] == [1.0, 2.0]
    assert reports[0]["hypothesis_met"] is False and reports[1]["guaranteed"] is True


def test_bound_beyond_radius(states):
    # trace distance 0.8 exceeds the q = 2 radius 0.5
    code, out, _ = _run(RunConfig("bound", q_values=[2.0], input_paths=[states["pure"], states["far"]]))
    row = next(csv.DictReader(io.StringIO(out)))
    assert code == 2
    assert float(row["epsilon"]) == pytest.approx(1.8)
    code, out, _ = _run(RunConfig("bound", q_values=[2.0], input_paths=[states["half"], states["far"]]))
    row = next(csv.DictReader(io.StringIO(out)))
    assert code == 2 and float(row["epsilon"]) == pytest.approx(0.8)
    assert row["hypothesis_met"] == "false" and row["flags"] == "beyond_radius"


def test_entropy_maximally_mixed(states):
    code, out, _ = _run(RunConfig("entropy", q_values=[2.0], input_paths=[states["half"]]))
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["entropy"] == "0.5"


def test_entropy_json(states):
    code, out, _ = _run(RunConfig("entropy", q_values=[1.0], input_paths=[states["half"], states["pure"]],
                                  format="json"))
    recs = json.loads(out)
    assert code == 0 and recs[0]["entropy"] == pytest.approx(np.log(2)) and recs[1]["entropy"] == 0


def test_invalid_state_names_invariant(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"d": 2, "entries": [[1.2, 0], [0, -0.2]]}))
    code, out, err = _run(RunConfig("entropy", input_paths=[bad]))
    assert code == 1 and out == "" and "positive" in err


def test_missing_file(tmp_path):
    code, _, err = _run(RunConfig("entropy", input_paths=[tmp_path / "nope.json"]))
    assert code == 1 and err.startswith("error")


def test_dimension_mismatch(states, tmp_path):
    three = tmp_path / "three.json"
    dump_matrix(np.eye(3) / 3, three)
    code, _, err = _run(RunConfig("bound", input_paths=[states["half"], three]))
    assert code == 1 and "dimension" in err


@pytest.mark.parametrize(
    "cfg",
    [
        RunConfig("bound", input_paths=["a.json"]),
        RunConfig("entropy"),
        RunConfig("sweep", samples=0),
        RunConfig("sweep", q_values=[-1.0]),
        RunConfig("sample", dims=[2, 3]),
        RunConfig("sweep", mode="sideways"),
    ],
)
def test_config_errors(cfg):
    assert _run(cfg)[0] == 1


def test_sweep_csv(tmp_path):
    out_path = tmp_path / "table.csv"
    code, out, _ = _run(RunConfig("sweep", q_values=[0.5, 2.0], dims=[2], samples=30, output_path=str(out_path)))
    text = out_path.read_text()
    assert code == 0 and out == ""
    assert text.splitlines()[0] == ",".join(CSV_HEADER) and len(text.splitlines()) == 3
    _run(RunConfig("sweep", q_values=[0.5, 2.0], dims=[2], samples=30, output_path=str(tmp_path / "again.csv")))
    assert (tmp_path / "again.csv").read_bytes() == out_path.read_bytes()


def test_sweep_beyond_mode_exit_zero():
    code, out, _ = _run(RunConfig("sweep", q_values=[0.25], dims=[2], samples=200, mode="beyond_hypothesis"))
    assert code == 0 and out.count("\n") == 2


def test_axioms_json():
    code, out, _ = _run(RunConfig("axioms", samples=100))
    report = json.loads(out)
    assert code == 0 and all(r["pass"] for r in report)
    assert {r["check_name"] for r in report} >= {"symmetry", "generalized_additivity", "mixing",
                                                  "reducing_condition", "functional_equation"}


def test_sample_roundtrip(tmp_path):
    path = tmp_path / "s.json"
    code, _, _ = _run(RunConfig("sample", dims=[3], seed=5, output_path=str(path)))
    a = load_matrix(path)
    assert code == 0 and a.shape == (3, 3)
    assert abs(np.trace(a).real - 1) < 1e-12
    assert _run(RunConfig("sample", dims=[3], seed=5))[1] == path.read_text()


def test_main_argv(states, capsys):
    assert main(["entropy", str(states["half"]), "--q", "2"]) == 0
    assert "0.5" in capsys.readouterr().out


def test_module_entry_point(states):
    proc = subprocess.run([sys.executable, "-m", "qfannes", "bound", str(states["pure"]), str(states["mixed"]),
                           "--q", "2", "--format", "json"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)[0]["lhs"] == pytest.approx(0.375)
