"""
IO Service - JSON matrix, state and verdict files.

    MatrixFile   {"dim": d, "entries": [[[re, im], ...], ...]}   row-major
    StateFile    {"register": [...], "amplitudes": [[re, im], ...]}
    VerdictFile  {"kind": ..., "witness": {...}, "notes": [...]}

Floats are written with Python's shortest round-trip repr, so re-parsing
reproduces every double exactly.
"""

import json
from pathlib import Path
from typing import Optional, Union

import numpy as np
from loguru import logger

from models.errors import FormatError
from models.quantum_models import SimulationVerdict, VerdictKind
from models.tensor_models import PureState, complex_pairs, parse_complex

PathLike = Union[str, Path]


def _pair(value, where: str) -> complex:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise FormatError(f"{where}: expected [re, im], got {value!r}")
    try:
        return parse_complex(*value)
    except (TypeError, ValueError) as e:
        raise FormatError(f"{where}: {e}") from e


def _require(data, key: str, kind: str):
    if not isinstance(data, dict):
        raise FormatError(f"{kind} must be a JSON object")
    if key not in data:
        raise FormatError(f"{kind} is missing '{key}'")
    return data[key]


# ─────────────────────────────────────────────
# Matrix files
# ─────────────────────────────────────────────

def parse_matrix(data: dict) -> np.ndarray:
    """Square complex matrix from a MatrixFile object (unitarity not checked)."""
    dim = _require(data, "dim", "MatrixFile")
    rows = _require(data, "entries", "MatrixFile")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise FormatError(f"MatrixFile dim must be a positive integer, got {dim!r}")
    if not isinstance(rows, list) or len(rows) != dim:
        raise FormatError(f"MatrixFile needs {dim} rows")
    matrix = np.empty((dim, dim), dtype=complex)
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise FormatError(f"MatrixFile row {r} must have {dim} entries")
        for c, value in enumerate(row):
            matrix[r, c] = _pair(value, f"entry ({r}, {c})")
    return matrix


def matrix_to_dict(matrix: np.ndarray) -> dict:
    matrix = np.asarray(matrix, dtype=complex)
    return {"dim": int(matrix.shape[0]), "entries": complex_pairs(matrix)}


# ─────────────────────────────────────────────
# State files
# ─────────────────────────────────────────────

def parse_state(data: dict) -> PureState:
    register = _require(data, "register", "StateFile")
    amplitudes = _require(data, "amplitudes", "StateFile")
    if not isinstance(register, list) or not all(isinstance(label, str) for label in register):
        raise FormatError("StateFile register must be a list of label strings")
    if not isinstance(amplitudes, list):
        raise FormatError("StateFile amplitudes must be a list of [re, im] pairs")
    values = [_pair(value, f"amplitude {i}") for i, value in enumerate(amplitudes)]
    return PureState(tuple(register), np.array(values, dtype=complex))


def state_to_dict(state: PureState) -> dict:
    return {"register": list(state.register), "amplitudes": complex_pairs(state.amplitudes)}


# ─────────────────────────────────────────────
# Verdict files
# ─────────────────────────────────────────────

def parse_verdict(data: dict) -> SimulationVerdict:
    kind = _require(data, "kind", "VerdictFile")
    if kind not in {v.value for v in VerdictKind}:
        raise FormatError(f"unknown verdict kind {kind!r}")
    witness = data.get("witness", {})
    notes = data.get("notes", [])
    if not isinstance(witness, dict) or not isinstance(notes, list):
        raise FormatError("VerdictFile witness must be an object and notes a list")
    return SimulationVerdict.from_dict({"kind": kind, "witness": witness, "notes": notes})


# ─────────────────────────────────────────────
# Files
# ─────────────────────────────────────────────

def dumps(data) -> str:
    """Deterministic JSON text (sorted keys, no NaN)."""
    try:
        return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False)
    except (TypeError, ValueError) as e:
        raise FormatError(f"report is not JSON-serializable: {e}") from e


def load_json(path: PathLike):
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError as e:
        logger.error(f"❌ File not found: {path}")
        raise FormatError(f"file not found: {path}") from e
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"❌ Failed to read {path}: {e}")
        raise FormatError(f"cannot read {path}: {e}") from e


def write_json(data, path: Optional[PathLike] = None) -> str:
    """Write `data` to `path`; returns the text written."""
    text = dumps(data)
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        logger.debug(f"Wrote {path}")
    return text


def read_matrix_file(path: PathLike) -> np.ndarray:
    return parse_matrix(load_json(path))


def read_state_file(path: PathLike) -> PureState:
    return parse_state(load_json(path))


def read_verdict_file(path: PathLike) -> SimulationVerdict:
    return parse_verdict(load_json(path))
