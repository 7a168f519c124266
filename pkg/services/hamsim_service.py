"""
Hamsim Service - which interaction H(c1, c2, c3) = Σ c_k σ_k⊗σ_k can simulate
which, under LOCC and under local unitaries assisted by an entangled catalyst.

Decisions are made on normal-form coefficients c1 ≥ c2 ≥ |c3|. A target
Hamiltonian is only fixed up to a global constant c4, which is left free
when deciding whether the catalyst-assisted conditions can be met.
"""

import math
from collections import Counter
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from models.errors import DimensionError, PreconditionError
from models.quantum_models import (
    ExtHamParams,
    FeasibleInterval,
    HamParams,
    LambdaSpectrum,
    MixtureCheck,
    MixtureTerm,
    ScanRow,
    SimulationVerdict,
    VerdictKind,
    VerdictScan,
)
from models.tensor_models import PureState, UnitaryOp
from services.canonical_service import interaction_hamiltonian
from services.tensor_service import PAULIS, embed_operator, haar_random_unitary, pauli
from utils.rng import make_rng

COMPARE_TOL = 1e-12
SPECTRUM_TOL = 1e-10
MIXTURE_WEIGHT_TOL = 1e-10

LOCC_CONDITIONS = ("c1+c2-c3", "c1", "c1+c2+c3")

CORRECTED_LOCC_NOTE = (
    "third LOCC condition compares c1+c2+c3 with t1+t2+t3 "
    "(source sum against target sum)"
)
CORRECTED_H_NOTE = (
    "h coefficient conjugates the source Pauli sigma_n, "
    "not the mixture index"
)


# ─────────────────────────────────────────────
# Normal forms
# ─────────────────────────────────────────────

def normal_form(c1: float, c2: float, c3: float) -> HamParams:
    """
    Bring any real triple to c1 ≥ c2 ≥ |c3| with permutations and sign-pair
    flips (both realised by local unitaries). The sign of c3 carries the
    parity of the negative entries; it is non-negative when any entry is zero.
    """
    values = (float(c1), float(c2), float(c3))
    if not all(math.isfinite(v) for v in values):
        raise PreconditionError(f"non-finite coefficients {values}")
    magnitudes = sorted((abs(v) for v in values), reverse=True)
    negatives = sum(v < 0 for v in values)
    if negatives % 2 and all(v != 0 for v in values):
        magnitudes[2] = -magnitudes[2]
    return HamParams(*magnitudes)


def time_reversed(h: HamParams) -> HamParams:
    """Normal form of −H."""
    return normal_form(-h.c1, -h.c2, -h.c3)


def _as_ext(h) -> ExtHamParams:
    if isinstance(h, ExtHamParams):
        return h
    if isinstance(h, HamParams):
        return ExtHamParams.from_ham(h)
    raise TypeError(f"expected HamParams or ExtHamParams, got {type(h).__name__}")


def lambda_spectrum(h) -> LambdaSpectrum:
    """Bell-basis eigenvalues of H + c4·1, decreasing."""
    h = _as_ext(h)
    return LambdaSpectrum(
        h.c1 + h.c2 - h.c3 + h.c4,
        h.c1 - h.c2 + h.c3 + h.c4,
        -h.c1 + h.c2 + h.c3 + h.c4,
        -h.c1 - h.c2 - h.c3 + h.c4,
    )


# ─────────────────────────────────────────────
# LOCC and catalytic routes
# ─────────────────────────────────────────────

def _locc_margins(h: HamParams, t: HamParams) -> dict:
    return {
        "c1+c2-c3": (h.c1 + h.c2 - h.c3) - (t.c1 + t.c2 - t.c3),
        "c1": h.c1 - t.c1,
        "c1+c2+c3": (h.c1 + h.c2 + h.c3) - (t.c1 + t.c2 + t.c3),
    }


def locc_violations(h: HamParams, t: HamParams) -> List[str]:
    """Names of the LOCC simulation conditions that fail for h → t."""
    margins = _locc_margins(h, t)
    return [name for name in LOCC_CONDITIONS if margins[name] < -COMPARE_TOL]


def locc_simulable(h: HamParams, t: HamParams) -> bool:
    """h can simulate t with LOCC (to second order in the time step)."""
    return not locc_violations(h, t)


def catalytic_target(h: HamParams) -> HamParams:
    """What one catalysis step turns h into: (c1+c2, 0, 0)."""
    return HamParams(h.c1 + h.c2, 0.0, 0.0)


def catlu_feasible_c4(h: HamParams, t: HamParams) -> Optional[FeasibleInterval]:
    """
    Global constants c4 compatible with the catalyst-assisted necessary conditions:

        c4 ≤ (c1+c2−c3) − (t1+t2−t3)
        c4 ≥ (t1+t2+t3) − (c1+c2+c3)
        |c4| ≤ Σ|c_k| − Σ|t_k|

    Returns None when no c4 satisfies all three.
    """
    hi = (h.c1 + h.c2 - h.c3) - (t.c1 + t.c2 - t.c3)
    lo = (t.c1 + t.c2 + t.c3) - (h.c1 + h.c2 + h.c3)
    slack = sum(abs(c) for c in h.as_tuple()) - sum(abs(c) for c in t.as_tuple())
    if slack < -COMPARE_TOL:
        return None
    slack = max(slack, 0.0)
    lo, hi = max(lo, -slack), min(hi, slack)
    if lo > hi + COMPARE_TOL:
        return None
    return FeasibleInterval(lo, max(lo, hi))


def classify_simulation(h: HamParams, t: HamParams) -> SimulationVerdict:
    """LOCC, then one catalysis step plus LOCC, then the necessary conditions."""
    notes = (CORRECTED_LOCC_NOTE,)
    violated = locc_violations(h, t)
    if not violated:
        return SimulationVerdict(
            VerdictKind.LOCC_SIMULABLE,
            {"route": "locc", "margins": _locc_margins(h, t)},
            notes,
        )

    intermediate = catalytic_target(h)
    if locc_simulable(intermediate, t):
        return SimulationVerdict(
            VerdictKind.CATALYTIC_SIMULABLE,
            {
                "route": "catalysis_then_locc",
                "intermediate": intermediate.to_dict(),
                "violated_by_locc": violated,
            },
            notes,
        )

    interval = catlu_feasible_c4(h, t)
    if interval is None:
        return SimulationVerdict(
            VerdictKind.FORBIDDEN,
            {"c4_interval": None, "violated_by_locc": violated},
            notes + (CORRECTED_H_NOTE,),
        )
    return SimulationVerdict(
        VerdictKind.UNDECIDED,
        {"c4_interval": interval.to_dict(), "violated_by_locc": violated},
        notes + (CORRECTED_H_NOTE, "necessary conditions hold for some c4; no simulation protocol is known"),
    )


def catalytic_equivalent(h: HamParams, t: HamParams) -> bool:
    """Each simulates the other by LOCC or by the catalytic route."""
    reachable = (VerdictKind.LOCC_SIMULABLE, VerdictKind.CATALYTIC_SIMULABLE)
    return classify_simulation(h, t).kind in reachable and classify_simulation(t, h).kind in reachable


def _random_normal_form(rng: np.random.Generator) -> HamParams:
    return normal_form(*rng.uniform(-1.0, 1.0, size=3))


def scan_verdicts(pairs: int, seed: int, keep_rows: bool = False) -> VerdictScan:
    """Classify `pairs` random normal-form (source, target) pairs."""
    if pairs < 1:
        raise ValueError(f"pairs must be ≥ 1, got {pairs}")
    rng = make_rng(seed, 7)
    counts = Counter()
    rows = []
    for _ in range(pairs):
        h, t = _random_normal_form(rng), _random_normal_form(rng)
        kind = classify_simulation(h, t).kind
        counts[kind.value] += 1
        if keep_rows:
            rows.append(ScanRow(h, t, kind))

    logger.info(f"🔎 Scanned {pairs} pairs (seed {seed}): {dict(counts)}")
    return VerdictScan(pairs=pairs, seed=seed, counts=dict(counts), rows=tuple(rows))


# ─────────────────────────────────────────────
# Mixtures of local conjugations
# ─────────────────────────────────────────────

def _sides(ancilla_qubits: int) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    alice = ("A",) + tuple(f"a{i + 1}" for i in range(ancilla_qubits))
    bob = ("B",) + tuple(f"b{i + 1}" for i in range(ancilla_qubits))
    return alice, bob


def _validate_mixture(mixture: Sequence[MixtureTerm], dim: int):
    if not mixture:
        raise PreconditionError("mixture must have at least one term")
    weights = np.array([term.p for term in mixture], dtype=float)
    if np.any(weights <= 0):
        raise PreconditionError(f"mixture weights must be positive, got {weights.tolist()}")
    if abs(weights.sum() - 1.0) > MIXTURE_WEIGHT_TOL:
        raise PreconditionError(f"mixture weights sum to {weights.sum():.12f}, not 1")
    for term in mixture:
        for op in (term.u, term.v):
            if UnitaryOp(op).dim != dim:
                raise DimensionError(f"mixture unitary of dim {UnitaryOp(op).dim}, expected {dim}")


def pauli_twirl() -> List[MixtureTerm]:
    """Equal-weight conjugation by all sixteen σ_j⊗σ_k on AB (no ancillas)."""
    return [MixtureTerm(1.0 / 16, a, b) for a in PAULIS for b in PAULIS]


def mixture_spectrum_bounds(
    h: HamParams,
    mixture: Sequence[MixtureTerm],
    ancilla_qubits: int = 0,
) -> MixtureCheck:
    """
    Spectrum of Σ_m p_m (u_m⊗v_m)† (H⊗1) (u_m⊗v_m) and whether it stays in [λ4, λ1].

    u_m acts on A plus `ancilla_qubits` of Alice's ancillas, v_m likewise on B.
    """
    if ancilla_qubits not in (0, 1, 2):
        raise PreconditionError(f"ancilla_qubits must be 0, 1 or 2, got {ancilla_qubits}")
    alice, bob = _sides(ancilla_qubits)
    _validate_mixture(mixture, 2 ** len(alice))

    register = ("A", "B") + alice[1:] + bob[1:]
    hamiltonian = embed_operator(interaction_hamiltonian(*h.as_tuple()), ("A", "B"), register)
    mixed = np.zeros_like(hamiltonian)
    for term in mixture:
        w = embed_operator(term.u, alice, register) @ embed_operator(term.v, bob, register)
        mixed += term.p * (w.conj().T @ hamiltonian @ w)

    spectrum = np.linalg.eigvalsh((mixed + mixed.conj().T) / 2)
    lam = lambda_spectrum(h)
    lower, upper = lam.l4, lam.l1
    within = bool(np.all(spectrum >= lower - SPECTRUM_TOL) and np.all(spectrum <= upper + SPECTRUM_TOL))
    if not within:
        logger.warning(f"⚠️ Mixture spectrum {spectrum.min():.3e}..{spectrum.max():.3e} leaves [{lower}, {upper}]")
    return MixtureCheck(
        within_bounds=within,
        spectrum=tuple(float(x) for x in spectrum[::-1]),
        lower=lower,
        upper=upper,
    )


# ─────────────────────────────────────────────
# h coefficients
# ─────────────────────────────────────────────

def _trace_out_system(matrix: np.ndarray, ancilla_dim: int) -> np.ndarray:
    """tr over the leading qubit of a (2·d)×(2·d) operator."""
    return np.einsum("iaib->ab", matrix.reshape(2, ancilla_dim, 2, ancilla_dim))


def _conjugated_traces(op: np.ndarray, n: int) -> List[np.ndarray]:
    """tr_sys[(σ_k⊗1) op† (σ_n⊗1) op] for k = 1..4."""
    d = op.shape[0] // 2
    inner = op.conj().T @ np.kron(pauli(n), np.eye(d)) @ op
    return [_trace_out_system(np.kron(pauli(k), np.eye(d)) @ inner, d) for k in range(1, 5)]


def h_coefficient(phi0: PureState, u, v, n: int) -> float:
    """
    (1/4) Σ_k |⟨φ0| X_k ⊗ Y_k |φ0⟩| for source Pauli n, with
    X_k = tr_A[(σ_k⊗1) u† (σ_n⊗1) u] and Y_k the same for v on B.

    φ0 lists Alice's ancilla qubits before Bob's. Never exceeds 1.
    """
    if n not in (1, 2, 3):
        raise ValueError(f"source Pauli index must be 1..3, got {n}")
    u, v = UnitaryOp(u).matrix, UnitaryOp(v).matrix
    da, db = u.shape[0] // 2, v.shape[0] // 2
    amps = phi0.amplitudes
    if amps.size != da * db:
        raise DimensionError(f"ancilla state of dim {amps.size} does not fit {da}×{db} ancillas")

    psi = amps.reshape(da, db)
    total = 0.0
    for x, y in zip(_conjugated_traces(u, n), _conjugated_traces(v, n)):
        total += abs(np.einsum("ab,ac,bd,cd->", psi.conj(), x, y, psi))
    return total / 4


def weighted_h_bound(h: HamParams, mixture: Sequence[MixtureTerm], phi0: PureState) -> float:
    """Σ_n |c_n| Σ_m p_m h_{n,m}: an upper bound on Σ_k |t_k| of any reachable target."""
    if not mixture:
        raise PreconditionError("mixture must have at least one term")
    weights = np.array([term.p for term in mixture], dtype=float)
    if np.any(weights <= 0) or abs(weights.sum() - 1.0) > MIXTURE_WEIGHT_TOL:
        raise PreconditionError("mixture weights must be positive and sum to 1")
    bound = 0.0
    for n, c in enumerate(h.as_tuple(), start=1):
        if c == 0:
            continue
        bound += abs(c) * sum(term.p * h_coefficient(phi0, term.u, term.v, n) for term in mixture)
    return bound


def random_mixture(seed, terms: int, ancilla_qubits: int) -> List[MixtureTerm]:
    """Random convex mixture of Haar-random local unitaries."""
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(int(seed), 11)
    dim = 2 ** (ancilla_qubits + 1)
    weights = rng.dirichlet(np.ones(terms))
    weights = np.maximum(weights, 1e-12)
    weights = weights / weights.sum()
    return [
        MixtureTerm(float(p), haar_random_unitary(rng, dim), haar_random_unitary(rng, dim))
        for p in weights
    ]
