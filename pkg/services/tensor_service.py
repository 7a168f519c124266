"""
Tensor Service - dense linear algebra over ordered qubit registers.
Embedding of target-local operators, Schmidt analysis, phase-insensitive
distances and seeded Haar sampling.
"""

from typing import Sequence, Tuple

import numpy as np
from scipy.linalg import qr

from models.errors import DimensionError, RegisterError
from models.tensor_models import PureState, UnitaryOp, check_register, num_qubits
from utils.rng import SeedLike, as_rng

# σ1, σ2, σ3 and σ4 ≡ identity; orthonormal under ⟨A, B⟩ = tr(A†B)/2
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)
PAULIS: Tuple[np.ndarray, ...] = (SIGMA_X, SIGMA_Y, SIGMA_Z, IDENTITY_2)


def pauli(k: int) -> np.ndarray:
    """σ_k for k = 1..4 (σ4 is the identity)."""
    if k not in (1, 2, 3, 4):
        raise ValueError(f"Pauli index must be 1..4, got {k}")
    return PAULIS[k - 1]


def _matrix(op) -> np.ndarray:
    return op.matrix if isinstance(op, UnitaryOp) else np.asarray(op, dtype=complex)


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with `a` on the more significant factor."""
    return np.kron(_matrix(a), _matrix(b))


# ─────────────────────────────────────────────
# Target embedding
# ─────────────────────────────────────────────

def _target_axes(targets: Sequence[str], register: Tuple[str, ...]) -> list:
    targets = list(targets)
    if len(set(targets)) != len(targets):
        raise RegisterError(f"duplicate target in {targets}")
    missing = [t for t in targets if t not in register]
    if missing:
        raise RegisterError(f"unknown label(s) {missing} for register {list(register)}")
    return [register.index(t) for t in targets]


def _apply_to_tensor(matrix: np.ndarray, axes: list, tensor: np.ndarray) -> np.ndarray:
    """Contract a k-qubit matrix into `axes` of a (2,)*n (+ trailing) tensor."""
    k = len(axes)
    op = matrix.reshape([2] * (2 * k))
    out = np.tensordot(op, tensor, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes)


def apply_on_targets(op, targets: Sequence[str], state: PureState) -> PureState:
    """(U embedded on `targets`)·state; U's qubit order follows `targets`."""
    matrix = _matrix(op)
    axes = _target_axes(targets, state.register)
    if matrix.shape != (2 ** len(axes), 2 ** len(axes)):
        raise DimensionError(f"{matrix.shape} operator cannot act on {len(axes)} target(s)")
    tensor = state.amplitudes.reshape([2] * state.n_qubits)
    out = _apply_to_tensor(matrix, axes, tensor)
    return PureState(state.register, out.reshape(-1))


def embed_operator(op, targets: Sequence[str], register: Sequence[str]) -> np.ndarray:
    """Full-register matrix of `op` acting on `targets` (identity elsewhere)."""
    register = check_register(register)
    matrix = _matrix(op)
    axes = _target_axes(targets, register)
    if matrix.shape != (2 ** len(axes), 2 ** len(axes)):
        raise DimensionError(f"{matrix.shape} operator cannot act on {len(axes)} target(s)")
    dim = 2 ** len(register)
    columns = np.eye(dim, dtype=complex).reshape([2] * len(register) + [dim])
    return _apply_to_tensor(matrix, axes, columns).reshape(dim, dim)


# ─────────────────────────────────────────────
# Bipartitions
# ─────────────────────────────────────────────

def _check_cut(state: PureState, cut) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    try:
        left, right = (tuple(block) for block in cut)
    except (TypeError, ValueError) as e:
        raise RegisterError(f"cut must be two blocks of labels, got {cut!r}") from e
    labels = left + right
    if not left or not right or len(set(labels)) != len(labels) or set(labels) != set(state.register):
        raise RegisterError(
            f"cut {list(left)}|{list(right)} does not partition register {list(state.register)}"
        )
    return left, right


def _bipartite_matrix(state: PureState, cut) -> np.ndarray:
    left, right = _check_cut(state, cut)
    ordered = state.reordered(left + right)
    return ordered.amplitudes.reshape(2 ** len(left), 2 ** len(right))


def schmidt_probs(state: PureState, cut) -> np.ndarray:
    """Squared Schmidt coefficients across `cut`, descending."""
    singular = np.linalg.svd(_bipartite_matrix(state, cut), compute_uv=False)
    probs = np.sort(singular ** 2)[::-1]
    return probs / probs.sum()


def reduced_density(state: PureState, keep: Sequence[str]) -> np.ndarray:
    """ρ of the `keep` block (in the given label order)."""
    keep = tuple(keep)
    rest = tuple(label for label in state.register if label not in keep)
    if not rest:
        amps = state.reordered(keep).amplitudes
        return np.outer(amps, amps.conj())
    m = _bipartite_matrix(state, (keep, rest))
    return m @ m.conj().T


# ─────────────────────────────────────────────
# Distances
# ─────────────────────────────────────────────

def dist_up_to_global_phase(u, v) -> float:
    """min_φ ‖U − e^{iφ}V‖_F, equal to √(2d − 2|tr(U†V)|) for unitaries.

    Evaluated at the optimal phase directly; the closed form loses half the
    digits to cancellation near zero.
    """
    u, v = _matrix(u), _matrix(v)
    if u.shape != v.shape:
        raise DimensionError(f"dimension mismatch {u.shape} vs {v.shape}")
    overlap = np.trace(u.conj().T @ v)
    phase = np.exp(-1j * np.angle(overlap)) if overlap != 0 else 1.0
    return float(np.linalg.norm(u - phase * v))


# ─────────────────────────────────────────────
# Randomness
# ─────────────────────────────────────────────

def haar_random_unitary(seed: SeedLike, dim: int) -> np.ndarray:
    """Haar unitary via QR of a complex Ginibre matrix with phase-fixed R."""
    num_qubits(dim)
    rng = as_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_state(seed: SeedLike, register: Sequence[str]) -> PureState:
    """Haar-random pure state over `register`."""
    register = check_register(register)
    rng = as_rng(seed)
    dim = 2 ** len(register)
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState.from_unnormalized(register, vec)
