import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from models.errors import FormatError, NormalizationError
from models.quantum_models import BellLabel, HamParams, VerdictKind
from models.tensor_models import PureState
from services.canonical_service import bell_state
from services.hamsim_service import classify_simulation
from services.io_service import (
    dumps,
    load_json,
    matrix_to_dict,
    parse_matrix,
    parse_state,
    parse_verdict,
    read_matrix_file,
    read_state_file,
    read_verdict_file,
    state_to_dict,
    write_json,
)
from services.tensor_service import haar_random_unitary, random_state


def test_matrix_file_round_trip_is_exact(tmp_path):
    u = haar_random_unitary(21, 4)
    path = tmp_path / "u.json"
    write_json(matrix_to_dict(u), path)
    assert np.array_equal(read_matrix_file(path), u)


def test_state_file_round_trip_is_exact(tmp_path):
    state = random_state(22, ("A", "a", "B", "b"))
    path = tmp_path / "nested" / "state.json"
    write_json(state_to_dict(state), path)
    loaded = read_state_file(path)
    assert loaded.register == state.register
    assert np.array_equal(loaded.amplitudes, state.amplitudes)


def test_parse_matrix_layout():
    data = {"dim": 2, "entries": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]}
    assert_allclose(parse_matrix(data), [[0, 1], [1, 0]], atol=0)


@pytest.mark.parametrize("data", [
    [],
    {"entries": []},
    {"dim": 0, "entries": []},
    {"dim": True, "entries": [[[1, 0]]]},
    {"dim": 2, "entries": [[[1, 0], [0, 0]]]},
    {"dim": 2, "entries": [[[1, 0], [0, 0]], [[0, 0]]]},
    {"dim": 1, "entries": [[[1, 0, 0]]]},
    {"dim": 1, "entries": [[["x", 0]]]},
    {"dim": 1, "entries": [[[float("inf"), 0]]]},
])
def test_parse_matrix_rejects_malformed(data):
    with pytest.raises(FormatError):
        parse_matrix(data)


def test_parse_state():
    s = 2 ** -0.5
    state = parse_state({"register": ["A", "B"], "amplitudes": [[0, 0], [s, 0], [s, 0], [0, 0]]})
    assert_allclose(state.amplitudes, bell_state(BellLabel(0, 0)), atol=1e-15)


def test_parse_state_errors():
    with pytest.raises(FormatError):
        parse_state({"register": "AB", "amplitudes": [[1, 0]]})
    with pytest.raises(FormatError):
        parse_state({"register": ["A"], "amplitudes": [1, 0]})
    with pytest.raises(NormalizationError):
        parse_state({"register": ["A"], "amplitudes": [[1, 0], [1, 0]]})


def test_verdict_round_trip(tmp_path):
    verdict = classify_simulation(HamParams(0.3, 0.2, 0.1), HamParams(0.6, 0, 0))
    path = tmp_path / "verdict.json"
    write_json(verdict.to_dict(), path)
    loaded = read_verdict_file(path)
    assert loaded.kind is VerdictKind.FORBIDDEN
    assert loaded.notes == verdict.notes
    assert loaded.witness == json.loads(dumps(verdict.witness))


def test_parse_verdict_rejects_unknown_kind():
    with pytest.raises(FormatError, match="unknown verdict kind"):
        parse_verdict({"kind": "MAYBE"})
    with pytest.raises(FormatError):
        parse_verdict({"kind": "FORBIDDEN", "notes": "flat"})


def test_dumps_is_deterministic_and_strict():
    assert dumps({"b": 1, "a": 0.1}) == dumps({"a": 0.1, "b": 1})
    text = dumps({"b": 1, "a": 0.1})
    assert text.index('"a"') < text.index('"b"')
    with pytest.raises(FormatError):
        dumps({"x": float("nan")})
    with pytest.raises(FormatError, match="not JSON-serializable"):
        dumps({"x": object()})
    with pytest.raises(FormatError):
        dumps({"passed": np.bool_(True)})


def test_load_json_errors(tmp_path):
    with pytest.raises(FormatError, match="not found"):
        load_json(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(FormatError):
        load_json(bad)


def test_write_json_without_path_returns_text():
    state = PureState.basis(("A",), (1,))
    text = write_json(state_to_dict(state))
    assert json.loads(text) == {"register": ["A"], "amplitudes": [[0.0, 0.0], [1.0, 0.0]]}
