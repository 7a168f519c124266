"""
Monotone Service - the LOCC no-go for U_s(c1, c2, 0) → U_s(c1+c2, 0, 0).

P(Ψ) (largest squared Schmidt coefficient) may only grow under LOCC. The
overlap of Φ₂ = U_s (x⊗y)|i,j⟩|0,0⟩ with the product ψ_i⊗φ_j reduces to a
phase sum over Bell weights, which never drops below cos²(c1+c2).
"""

import math
from functools import lru_cache
from typing import Tuple

import numpy as np
from loguru import logger
from scipy.linalg import expm
from scipy.optimize import minimize

from models.errors import ConsistencyError, PreconditionError
from models.quantum_models import (
    BELL_LABELS,
    BellWeights,
    CanonicalParams,
    EqualityForm,
    NogoReport,
)
from models.tensor_models import PureState, UnitaryOp
from services.canonical_service import bell_state, u_s
from services.tensor_service import apply_on_targets, haar_random_unitary, reduced_density, schmidt_probs
from utils.rng import make_rng

REGISTER = ("A", "B", "a", "b")
LOCAL_CUT = (("A", "a"), ("B", "b"))
STRICT_SLACK = 1e-12
EQUALITY_WEIGHTS = np.array([0.5, 0.0, 0.5, 0.0])     # (n00, n10, n01, n11)
SIMPLEX_STEPS = 100

_BELL_MATRIX = np.column_stack([bell_state(label) for label in BELL_LABELS])


def max_schmidt_prob(state: PureState, cut) -> float:
    """P(Ψ): square of the largest Schmidt coefficient across `cut`."""
    return float(schmidt_probs(state, cut)[0])


def nielsen_forbidden(source: PureState, target: PureState, cut) -> bool:
    """True iff P(target) < P(source): no LOCC protocol turns source into target."""
    return max_schmidt_prob(target, cut) < max_schmidt_prob(source, cut) - 1e-12


# ─────────────────────────────────────────────
# Φ states and Bell weights
# ─────────────────────────────────────────────

def phi_states(params: CanonicalParams, x, y, i: int, j: int) -> Tuple[PureState, PureState]:
    """(Φ₂, ψ_i⊗φ_j) over [A, B, a, b] with ψ_i = x|i,0⟩_Aa, φ_j = y|j,0⟩_Bb."""
    x, y = UnitaryOp(x), UnitaryOp(y)
    if x.dim != 4 or y.dim != 4:
        raise PreconditionError("x and y must be two-qubit unitaries (Aa and Bb)")
    start = PureState.basis(REGISTER, (i, j, 0, 0))
    product = apply_on_targets(y, ("B", "b"), apply_on_targets(x, ("A", "a"), start))
    phi2 = apply_on_targets(u_s(params), ("A", "B"), product)
    return phi2, product


def _product_vector(x: np.ndarray, y: np.ndarray, i: int, j: int) -> np.ndarray:
    """Amplitudes of x|i,0⟩_Aa ⊗ y|j,0⟩_Bb in [A, B, a, b] order."""
    local = np.kron(x[:, 2 * i], y[:, 2 * j])          # [A, a, B, b]
    return local.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(-1)


def _bell_weights_vector(amplitudes: np.ndarray) -> np.ndarray:
    components = _BELL_MATRIX.conj().T @ amplitudes.reshape(4, 4)
    return np.sum(np.abs(components) ** 2, axis=1)


def bell_weights(product: PureState) -> BellWeights:
    """n_{α,β} = ‖(⟨B_{α,β}|_AB ⊗ 1_ab)|s⟩‖²."""
    amplitudes = product.reordered(REGISTER).amplitudes
    return BellWeights.from_array(_bell_weights_vector(amplitudes))


def _phase_sum_array(c1: float, c2: float, n: np.ndarray) -> np.ndarray:
    s, d = c1 + c2, c1 - c2
    phases = np.array([np.exp(-1j * s), np.exp(-1j * d), np.exp(1j * s), np.exp(1j * d)])
    return np.abs(n @ phases) ** 2


def phase_sum(c1: float, c2: float, n: BellWeights) -> float:
    """|e^{−i(c1+c2)}n00 + e^{i(c1+c2)}n01 + e^{−i(c1−c2)}n10 + e^{i(c1−c2)}n11|²."""
    return float(_phase_sum_array(c1, c2, n.as_array()))


# ─────────────────────────────────────────────
# Overlap inequality
# ─────────────────────────────────────────────

def _check_nogo_region(c1: float, c2: float, c3: float = 0.0):
    if abs(c3) > STRICT_SLACK:
        raise PreconditionError(f"the overlap bound needs c3 = 0, got {c3}")
    if not (c2 > STRICT_SLACK and c1 >= c2 - STRICT_SLACK and c1 + c2 <= math.pi / 4 + STRICT_SLACK):
        raise PreconditionError(
            f"(c1, c2) = ({c1}, {c2}) outside π/4 ≥ c1+c2 > 0, c1 ≥ c2 > 0"
        )


def overlap_table(params: CanonicalParams, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """2×2 table of |⟨ψ_i|⟨φ_j|Φ₂(Ψ_ij)⟩|²."""
    core = u_s(params)
    table = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            vec = _product_vector(x, y, i, j).reshape(4, 4)
            table[i, j] = abs(np.vdot(vec, core @ vec)) ** 2
    return table


def overlap(params: CanonicalParams, x, y, i: int, j: int) -> float:
    """|⟨ψ_i|⟨φ_j|Φ₂(Ψ_ij)⟩|², cross-checked against the Bell-weight phase sum."""
    _check_nogo_region(params.c1, params.c2, params.c3)
    x, y = UnitaryOp(x).matrix, UnitaryOp(y).matrix
    vec = _product_vector(x, y, i, j)
    direct = abs(np.vdot(vec.reshape(4, 4), u_s(params) @ vec.reshape(4, 4))) ** 2
    reduced = float(_phase_sum_array(params.c1, params.c2, _bell_weights_vector(vec)))
    if abs(direct - reduced) > 1e-10:
        raise ConsistencyError(f"overlap {direct!r} disagrees with phase sum {reduced!r}")
    return float(direct)


@lru_cache(maxsize=2)
def _simplex_grid(steps: int) -> np.ndarray:
    """Every point of the 4-simplex with coordinates in multiples of 1/steps."""
    a, b, c = np.indices((steps + 1,) * 3, dtype=np.int32)
    mask = a + b + c <= steps
    grid = np.stack([a[mask], b[mask], c[mask], steps - a[mask] - b[mask] - c[mask]], axis=1) / steps
    grid.setflags(write=False)
    return grid


def simplex_min(c1: float, c2: float) -> Tuple[float, BellWeights]:
    """Minimum of phase_sum over the probability simplex: 0.01 grid, then Nelder-Mead."""
    _check_nogo_region(c1, c2)
    grid = _simplex_grid(SIMPLEX_STEPS)
    values = _phase_sum_array(c1, c2, grid)
    best = int(np.argmin(values))
    best_value, best_n = float(values[best]), grid[best]

    def objective(q):
        sq = q ** 2
        return float(_phase_sum_array(c1, c2, sq / sq.sum()))

    result = minimize(
        objective,
        np.sqrt(best_n),
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 20000},
    )
    if result.fun < best_value:
        sq = result.x ** 2
        best_value, best_n = float(result.fun), sq / sq.sum()

    logger.debug(f"simplex_min({c1}, {c2}) = {best_value:.15f} at {np.round(best_n, 6).tolist()}")
    return best_value, BellWeights.from_array(best_n)


def equality_classifier(state: PureState, tol: float = 1e-8) -> EqualityForm:
    """Is the Aa|Bb product saturating the bound of the form |0,1⟩_AB|ξ⟩ or |1,0⟩_AB|ξ⟩?"""
    state = state.reordered(REGISTER)
    if 1.0 - max_schmidt_prob(state, LOCAL_CUT) > tol:
        return EqualityForm.NOT_EQUALITY_FORM
    weights = _bell_weights_vector(state.amplitudes)
    if np.max(np.abs(weights - EQUALITY_WEIGHTS)) > tol:
        return EqualityForm.NOT_EQUALITY_FORM
    rho = reduced_density(state, ("A", "B"))
    if rho[0b01, 0b01].real >= 1.0 - tol:
        return EqualityForm.AB_IS_01
    if rho[0b10, 0b10].real >= 1.0 - tol:
        return EqualityForm.AB_IS_10
    return EqualityForm.NOT_EQUALITY_FORM


# ─────────────────────────────────────────────
# Numerical no-go demonstration
# ─────────────────────────────────────────────

def _hermitian(theta: np.ndarray) -> np.ndarray:
    """16 reals → 4×4 Hermitian (diagonal, then upper-triangle re/im pairs)."""
    h = np.diag(theta[:4]).astype(complex)
    rows, cols = np.triu_indices(4, k=1)
    h[rows, cols] = theta[4:10] + 1j * theta[10:16]
    h[cols, rows] = theta[4:10] - 1j * theta[10:16]
    return h


def nogo_search(c1: float, c2: float, budget: int, seed: int) -> NogoReport:
    """
    Try to make every overlap fall below cos²(c1+c2) over local unitaries x, y.

    The first candidate is x = y = 1, the remaining `budget − 1` are Haar
    samples; when budget > 1 the best candidate is refined by Nelder-Mead on
    x·exp(iH_x), y·exp(iH_y) with up to `budget` further evaluations.
    """
    _check_nogo_region(c1, c2)
    if budget < 1:
        raise ValueError(f"budget must be ≥ 1, got {budget}")

    bound = math.cos(c1 + c2) ** 2
    params = CanonicalParams(c1, c2, 0.0)
    rng = make_rng(seed, 5)

    def worst(x, y) -> float:
        return float(np.max(overlap_table(params, x, y)))

    best_x, best_y = np.eye(4, dtype=complex), np.eye(4, dtype=complex)
    best_value = worst(best_x, best_y)
    for _ in range(budget - 1):
        x, y = haar_random_unitary(rng, 4), haar_random_unitary(rng, 4)
        value = worst(x, y)
        if value < best_value:
            best_value, best_x, best_y = value, x, y

    if budget > 1:
        x0, y0 = best_x, best_y

        def objective(theta):
            return worst(x0 @ expm(1j * _hermitian(theta[:16])), y0 @ expm(1j * _hermitian(theta[16:])))

        result = minimize(
            objective,
            np.zeros(32),
            method="Nelder-Mead",
            options={"maxfev": budget, "xatol": 1e-10, "fatol": 1e-14},
        )
        if result.fun < best_value:
            best_value = float(result.fun)
            best_x = x0 @ expm(1j * _hermitian(result.x[:16]))
            best_y = y0 @ expm(1j * _hermitian(result.x[16:]))

    report = NogoReport(
        c1=c1,
        c2=c2,
        samples=budget,
        min_over_xy_of_max_overlap=best_value,
        bound=bound,
        witness_x=best_x,
        witness_y=best_y,
        seed=seed,
    )
    if report.holds:
        logger.info(f"✅ No-go holds at ({c1}, {c2}): best {best_value:.12f} ≥ cos² = {bound:.12f}")
    else:
        logger.error(f"❌ Overlap bound broken at ({c1}, {c2}): {best_value!r} < {bound!r}")
    return report
