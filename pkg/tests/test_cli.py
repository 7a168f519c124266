import csv
import io
import json
import math

import numpy as np
import pytest
from loguru import logger

from main import EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main, parse_cut, parse_triple, UsageError
from models.quantum_models import BellLabel
from models.tensor_models import PureState
from services.canonical_service import bell_state, standard_gates
from services.io_service import matrix_to_dict, state_to_dict, write_json


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for key in ("QCAT_SEED", "QCAT_LOG_LEVEL", "QCAT_LOG_FILE", "QCAT_SUITE_SCALE"):
        monkeypatch.delenv(key, raising=False)
    yield
    logger.remove()


@pytest.fixture
def run(tmp_path, capsys):
    missing_env = str(tmp_path / "no.env")

    def _run(*argv):
        code = main(["--env-file", missing_env, *argv])
        out, err = capsys.readouterr()
        return code, out, err

    return _run


@pytest.fixture
def matrix_file(tmp_path):
    def _write(name, matrix):
        path = tmp_path / f"{name}.json"
        write_json(matrix_to_dict(matrix), path)
        return str(path)

    return _write


def test_parse_helpers():
    assert parse_triple("0.3, 0.2,-0.1") == (0.3, 0.2, -0.1)
    assert parse_cut("A,a|B,b") == (("A", "a"), ("B", "b"))
    for bad in ("0.3,0.2", "0.3,x,0"):
        with pytest.raises(UsageError):
            parse_triple(bad)
    for bad in ("A,B", "A|", "A|B|C"):
        with pytest.raises(UsageError):
            parse_cut(bad)


def test_decompose_cnot(run, matrix_file):
    code, out, _ = run("decompose", "--in", matrix_file("cnot", dict(standard_gates())["CNOT"]))
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["c1"] == pytest.approx(math.pi / 4, abs=1e-9)
    assert data["c2"] == pytest.approx(0.0, abs=1e-9)
    assert data["c3"] == pytest.approx(0.0, abs=1e-9)
    assert data["residual"] <= 1e-9


def test_decompose_identity(run, matrix_file):
    code, out, _ = run("decompose", "--in", matrix_file("eye", np.eye(4)))
    assert code == EXIT_OK
    data = json.loads(out)
    assert [data["c1"], data["c2"], data["c3"]] == pytest.approx([0, 0, 0], abs=1e-12)
    assert data["residual"] <= 1e-12


def test_decompose_errors(run, matrix_file, tmp_path):
    assert run("decompose", "--in", matrix_file("ones", np.ones((4, 4))))[0] == EXIT_NUMERIC
    assert run("decompose", "--in", str(tmp_path / "missing.json"))[0] == EXIT_USAGE
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 4}', encoding="utf-8")
    assert run("decompose", "--in", str(bad))[0] == EXIT_USAGE


def test_catalysis_command_is_deterministic(run):
    argv = ("catalysis", "--c1", "0.3", "--c2", "0.2", "--c3", "0.1", "--trials", "20", "--seed", "7")
    code, first, _ = run(*argv)
    assert code == EXIT_OK
    assert json.loads(first)["max_state_residual"] <= 1e-12
    assert run(*argv)[1] == first


def test_catalysis_seed_from_environment(run, monkeypatch):
    monkeypatch.setenv("QCAT_SEED", "13")
    code, out, _ = run("catalysis", "--c1", "0", "--c2", "0", "--c3", "0", "--trials", "3")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["seed"] == 13
    assert data["max_state_residual"] <= 1e-15


@pytest.mark.parametrize("argv", [
    ("catalysis", "--c1", "0.3", "--c2", "0.2", "--c3", "0.1", "--trials", "0"),
    ("catalysis", "--c1", "0.3", "--c2", "0.2"),
    ("catalysis", "--c1", "x", "--c2", "0.2", "--c3", "0.1"),
    ("catalysis", "--c1", "0.3", "--c2", "0.2", "--c3", "0.1", "--seed", "-1"),
    ("teleport",),
    (),
])
def test_bad_flags_exit_one(run, argv):
    assert run(*argv)[0] == EXIT_USAGE


@pytest.mark.parametrize("source, target, kind", [
    ("0.5,0,0", "0.3,0.2,0", "LOCC_SIMULABLE"),
    ("0.3,0.2,0", "0.5,0,0", "CATALYTIC_SIMULABLE"),
    ("0.3,0.2,0.1", "0.6,0,0", "FORBIDDEN"),
])
def test_classify(run, source, target, kind):
    code, out, _ = run("classify", "--source", source, "--target", target)
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["kind"] == kind
    assert data["notes"]


def test_classify_forbidden_has_empty_interval(run):
    _, out, _ = run("classify", "--source", "0.3,0.2,0.1", "--target", "0.6,0,0")
    assert json.loads(out)["witness"]["c4_interval"] is None


def test_classify_rejects_non_normal_form(run):
    code, out, err = run("classify", "--source", "0.1,0.3,0.2", "--target", "0.5,0,0")
    assert code == EXIT_USAGE
    assert out == ""
    assert "pre-reduce" in err


def test_monotone_on_bell_pair(run, tmp_path):
    path = tmp_path / "b00.json"
    write_json(state_to_dict(PureState(("A", "B"), bell_state(BellLabel(0, 0)))), path)
    code, out, _ = run("monotone", "--state", str(path), "--cut", "A|B")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["P"] == pytest.approx(0.5, abs=1e-12)
    assert "bell_weights" not in data
    assert run("monotone", "--state", str(path), "--cut", "A,B")[0] == EXIT_USAGE
    assert run("monotone", "--state", str(path), "--cut", "A|C")[0] == EXIT_USAGE


def test_monotone_with_ancillas(run, tmp_path):
    path = tmp_path / "s.json"
    write_json(state_to_dict(PureState.basis(("A", "B", "a", "b"), (0, 1, 1, 0))), path)
    code, out, _ = run("monotone", "--state", str(path), "--cut", "A,a|B,b")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["P"] == pytest.approx(1.0, abs=1e-12)
    assert data["equality_form"] == "AB_IS_01"
    assert data["bell_weights"]["n00"] == pytest.approx(0.5, abs=1e-12)


def test_nogo_command(run):
    code, out, _ = run("nogo", "--c1", "0.3", "--c2", "0.2", "--budget", "20", "--seed", "3")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["holds"] is True
    assert data["min_over_xy_of_max_overlap"] >= math.cos(0.5) ** 2 - 1e-9
    assert len(data["witness_unitaries"]["x"]["entries"]) == 4


def test_nogo_outside_region(run):
    assert run("nogo", "--c1", "0.2", "--c2", "0.3", "--budget", "5")[0] == EXIT_USAGE
    assert run("nogo", "--c1", "0.3", "--c2", "0.2", "--budget", "0")[0] == EXIT_USAGE


def test_scan_formats(run):
    code, out, _ = run("scan", "--pairs", "40", "--seed", "2", "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["c1", "c2", "c3", "t1", "t2", "t3", "kind"]
    assert len(rows) == 41

    code, out, _ = run("scan", "--pairs", "40", "--seed", "2")
    assert code == EXIT_OK
    counts = json.loads(out)["counts"]
    assert sum(counts.values()) == 40
    assert counts == {kind: sum(r[6] == kind for r in rows[1:]) for kind in counts}


def test_bad_log_level(run):
    code, _, err = run("--log-level", "CHATTY", "scan", "--pairs", "1")
    assert code == EXIT_USAGE
    assert "qcat: error" in err


def test_suite_command(run):
    code, out, err = run("suite", "--seed", "1", "--scale", "0.001")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["all_passed"] is True
    assert data["seed"] == 1
    assert "PASS" in err
    assert run("suite", "--scale", "2")[0] == EXIT_USAGE


def test_suite_output_is_identical_across_runs(run):
    code, first, _ = run("suite", "--seed", "2", "--scale", "0.001")
    assert code == EXIT_OK
    code, second, _ = run("suite", "--seed", "2", "--scale", "0.001")
    assert code == EXIT_OK
    assert second == first
