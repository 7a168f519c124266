"""
Dense state / operator value types over ordered qubit registers.

Index convention is big-endian: for register [A, B] the basis index is
2*A + B, i.e. the first label is the most significant bit.
"""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from models.errors import DimensionError, NonUnitaryError, NormalizationError, RegisterError

UNITARITY_TOL = 1e-10
NORM_TOL = 1e-10


def parse_complex(re: float, im: float) -> complex:
    """Build a complex number from two finite reals."""
    re, im = float(re), float(im)
    if not (math.isfinite(re) and math.isfinite(im)):
        raise NormalizationError(f"non-finite complex component ({re}, {im})")
    return complex(re, im)


def num_qubits(dim: int) -> int:
    """log2(dim) for a power of two, DimensionError otherwise."""
    if dim < 1 or dim & (dim - 1):
        raise DimensionError(f"dimension {dim} is not a power of two")
    return dim.bit_length() - 1


def check_register(register: Sequence[str]) -> Tuple[str, ...]:
    register = tuple(str(label) for label in register)
    if len(set(register)) != len(register):
        raise RegisterError(f"duplicate labels in register {list(register)}")
    return register


def unitarity_error(matrix: np.ndarray) -> float:
    """‖U†U − 1‖_F."""
    return float(np.linalg.norm(matrix.conj().T @ matrix - np.eye(matrix.shape[0])))


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over an ordered qubit register."""
    register: Tuple[str, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        register = check_register(self.register)
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2 ** len(register):
            raise DimensionError(
                f"{amps.size} amplitudes do not match register {list(register)}"
            )
        if not np.all(np.isfinite(amps)):
            raise NormalizationError("amplitudes contain NaN or Inf")
        norm = np.linalg.norm(amps)
        if abs(norm ** 2 - 1.0) > NORM_TOL:
            raise NormalizationError(f"squared norm {norm ** 2:.3e} differs from 1")
        amps.setflags(write=False)
        object.__setattr__(self, "register", register)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_qubits(self) -> int:
        return len(self.register)

    @classmethod
    def basis(cls, register: Sequence[str], bits: Sequence[int]) -> "PureState":
        """Computational basis state |bits⟩ over `register`."""
        register = check_register(register)
        if len(bits) != len(register) or any(b not in (0, 1) for b in bits):
            raise DimensionError(f"bits {list(bits)} do not fit register {list(register)}")
        index = int("".join(str(b) for b in bits), 2) if bits else 0
        amps = np.zeros(2 ** len(register), dtype=complex)
        amps[index] = 1.0
        return cls(register, amps)

    @classmethod
    def from_unnormalized(cls, register: Sequence[str], amplitudes: np.ndarray) -> "PureState":
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amplitudes)
        if norm == 0.0 or not np.isfinite(norm):
            raise NormalizationError("cannot normalize a zero or non-finite vector")
        return cls(tuple(register), amplitudes / norm)

    def tensor(self, other: "PureState") -> "PureState":
        """|self⟩ ⊗ |other⟩ with self on the more significant qubits."""
        return PureState(self.register + other.register, np.kron(self.amplitudes, other.amplitudes))

    def reordered(self, register: Sequence[str]) -> "PureState":
        """Same state with qubits listed in a new order."""
        register = check_register(register)
        if sorted(register) != sorted(self.register):
            raise RegisterError(f"{list(register)} is not a permutation of {list(self.register)}")
        if register == self.register:
            return self
        axes = [self.register.index(label) for label in register]
        tensor = self.amplitudes.reshape([2] * self.n_qubits).transpose(axes)
        return PureState(register, tensor.reshape(-1))

    def inner(self, other: "PureState") -> complex:
        """⟨self|other⟩, aligning `other` to this register order first."""
        return complex(np.vdot(self.amplitudes, other.reordered(self.register).amplitudes))

    def distance(self, other: "PureState") -> float:
        """‖self − other‖ (phase-sensitive)."""
        return float(np.linalg.norm(self.amplitudes - other.reordered(self.register).amplitudes))


@dataclass(frozen=True, eq=False)
class UnitaryOp:
    """Dense unitary on `n_qubits` qubits, checked to UNITARITY_TOL."""
    matrix: np.ndarray

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionError(f"operator must be square, got shape {matrix.shape}")
        num_qubits(matrix.shape[0])
        if not np.all(np.isfinite(matrix)):
            raise NonUnitaryError("operator contains NaN or Inf")
        error = unitarity_error(matrix)
        if error > UNITARITY_TOL:
            raise NonUnitaryError(f"‖U†U − 1‖_F = {error:.3e} exceeds {UNITARITY_TOL:g}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_qubits(self) -> int:
        return num_qubits(self.dim)

    @property
    def dagger(self) -> "UnitaryOp":
        return UnitaryOp(self.matrix.conj().T)

    def __matmul__(self, other: "UnitaryOp") -> "UnitaryOp":
        if not isinstance(other, UnitaryOp):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionError(f"cannot compose dim {self.dim} with dim {other.dim}")
        return UnitaryOp(self.matrix @ other.matrix)


def complex_pairs(array: np.ndarray) -> list:
    """Nested [re, im] lists for JSON, keeping the array's shape."""
    array = np.asarray(array, dtype=complex)
    if array.ndim == 0:
        return [float(array.real), float(array.imag)]
    return [complex_pairs(row) for row in array]
