"""
Catalysis Service - the w-conjugated circuit on [A, B, a, b].

    (w_Aa w_Bb)† [U_s(c1,c2,c3) ⊗ 1_ab] (w_Aa w_Bb) |Ψ⟩_AB |B00⟩_ab
        = e^{i c3} [U_s(c1+c2, 0, 0) ⊗ 1_ab] |Ψ⟩_AB |B00⟩_ab

w|i, j⟩ = |j, i⊕j⟩ acts on the ordered pair (system, ancilla).
"""

from typing import Tuple

import numpy as np
from loguru import logger

from models.quantum_models import BellLabel, CanonicalParams, CatalysisReport
from models.tensor_models import PureState
from services.canonical_service import bell_state, u_s
from services.tensor_service import (
    apply_on_targets,
    embed_operator,
    haar_random_unitary,
    random_state,
    reduced_density,
)
from utils.rng import make_rng

REGISTER = ("A", "B", "a", "b")
REFERENCE_REGISTER = ("A", "B", "C", "D")
CATALYST = BellLabel(0, 0)


def w_gate() -> np.ndarray:
    """Permutation matrix of w|i, j⟩ = |j, i⊕j⟩ (swap then c-NOT)."""
    w = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            w[2 * j + (i ^ j), 2 * i + j] = 1.0
    return w


def _w_pair() -> np.ndarray:
    return embed_operator(w_gate(), ("A", "a"), REGISTER) @ embed_operator(w_gate(), ("B", "b"), REGISTER)


def catalysis_map(params: CanonicalParams) -> np.ndarray:
    """16×16 conjugated operator on [A, B, a, b]."""
    w = _w_pair()
    core = embed_operator(u_s(params), ("A", "B"), REGISTER)
    return w.conj().T @ core @ w


def catalytic_target(params: CanonicalParams) -> np.ndarray:
    """e^{i c3} U_s(c1+c2, 0, 0) on AB."""
    return np.exp(1j * params.c3) * u_s(CanonicalParams(params.c1 + params.c2, 0.0, 0.0))


def catalyst_state(label: BellLabel = CATALYST) -> PureState:
    return PureState(("a", "b"), bell_state(label))


def _both_sides(circuit: np.ndarray, state: PureState, target: np.ndarray) -> Tuple[PureState, PureState]:
    lhs = apply_on_targets(circuit, REGISTER, state)
    rhs = apply_on_targets(target, ("A", "B"), state)
    return lhs, rhs


def catalyst_fidelity(state: PureState, label: BellLabel = CATALYST) -> float:
    """⟨B|ρ_ab|B⟩ of the reduced ancilla state."""
    rho = reduced_density(state, ("a", "b"))
    vec = bell_state(label)
    return float(np.real(vec.conj() @ rho @ vec))


def bell_extended_state(seed, register: Tuple[str, ...] = REFERENCE_REGISTER) -> PureState:
    """|Ψ⟩ with A, B maximally entangled to remote C, D, then a random AB unitary.

    Built on [A, B, C, D]; the ancilla pair is not included.
    """
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(int(seed))
    phi_plus = bell_state(BellLabel(1, 0))
    base = PureState(("A", "C"), phi_plus).tensor(PureState(("B", "D"), phi_plus))
    mixed = apply_on_targets(haar_random_unitary(rng, 4), ("A", "B"), base)
    return mixed.reordered(register)


def bell_relabel(alpha: int, beta: int) -> Tuple[BellLabel, BellLabel]:
    """(w⊗w)|B_{α,β}⟩_AB|B00⟩_ab = |B_{0,β}⟩_AB |B_{ᾱ,β}⟩_ab."""
    label = BellLabel(alpha, beta)
    return BellLabel(0, label.beta), BellLabel(1 - label.alpha, label.beta)


def relabel_residual(alpha: int, beta: int) -> float:
    """Phase-insensitive distance between (w⊗w)|B_αβ⟩|B00⟩ and the relabelled product."""
    ab_label, anc_label = bell_relabel(alpha, beta)
    start = PureState(("A", "B"), bell_state(BellLabel(alpha, beta))).tensor(catalyst_state())
    moved = apply_on_targets(_w_pair(), REGISTER, start)
    expected = PureState(("A", "B"), bell_state(ab_label)).tensor(
        PureState(("a", "b"), bell_state(anc_label))
    )
    overlap = expected.inner(moved)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(moved.reordered(expected.register).amplitudes - phase * expected.amplitudes))


def effective_operator(params: CanonicalParams) -> np.ndarray:
    """4×4 action on AB when the ancillas start in B00, from a full basis of inputs.

    Leakage out of the catalyst shows up as the result failing to be unitary.
    """
    return composed_action(params, 1)


def composed_action(params: CanonicalParams, repeats: int) -> np.ndarray:
    """Effective AB operator (⟨B00|_ab projection) after `repeats` runs of the circuit."""
    if repeats < 1:
        raise ValueError(f"repeats must be ≥ 1, got {repeats}")
    full = np.linalg.matrix_power(catalysis_map(params), repeats)
    catalyst = bell_state(CATALYST)
    out = np.zeros((4, 4), dtype=complex)
    for col in range(4):
        res = (full @ np.kron(np.eye(4)[col], catalyst)).reshape(4, 4)
        out[:, col] = res @ catalyst.conj()
    return out


def verify_catalysis(
    params: CanonicalParams,
    trials: int,
    seed: int,
    target: np.ndarray = None,
) -> CatalysisReport:
    """
    Check the catalysis identity on `trials` random inputs.

    Odd trials use |Ψ⟩_AB alone; even trials extend it with reference qubits
    C, D maximally entangled to A, B. `target` replaces the right-hand AB
    operator (defaults to e^{ic3} U_s(c1+c2, 0, 0)).
    """
    if trials < 1:
        raise ValueError(f"trials must be ≥ 1, got {trials}")
    target = catalytic_target(params) if target is None else np.asarray(target, dtype=complex)
    rng = make_rng(seed, 3)
    circuit = catalysis_map(params)

    max_residual = 0.0
    min_fidelity = 1.0
    extended = 0
    for trial in range(trials):
        if trial % 2 == 0:
            system = bell_extended_state(rng)
            extended += 1
        else:
            system = random_state(rng, ("A", "B"))
        state = system.tensor(catalyst_state())
        lhs, rhs = _both_sides(circuit, state, target)
        max_residual = max(max_residual, lhs.distance(rhs))
        min_fidelity = min(min_fidelity, catalyst_fidelity(lhs))

    min_fidelity = min(max(min_fidelity, 0.0), 1.0)
    report = CatalysisReport(
        params=params,
        trials=trials,
        max_state_residual=max_residual,
        min_catalyst_fidelity=min_fidelity,
        seed=seed,
        extended_trials=extended,
    )
    logger.info(
        f"🧪 Catalysis {params.as_tuple()}: {trials} trials, "
        f"max residual {max_residual:.2e}, min fidelity {min_fidelity:.15f}"
    )
    return report
