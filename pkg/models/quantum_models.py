"""
Data models for canonical forms, catalysis checks, LOCC monotones and
Hamiltonian simulation verdicts.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

import numpy as np

from models.errors import PreconditionError
from models.tensor_models import complex_pairs

REGION_TOL = 1e-10


# ─────────────────────────────────────────────
# Canonical form
# ─────────────────────────────────────────────

@dataclass(frozen=True)
class CanonicalParams:
    """(c1, c2, c3) of U_s = exp(−i Σ c_k σ_k⊗σ_k), radians."""
    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in self.as_tuple()):
            raise PreconditionError(f"non-finite canonical parameters {self.as_tuple()}")

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.c1, self.c2, self.c3)

    def in_region(self, tol: float = REGION_TOL) -> bool:
        """π/4 ≥ c1 ≥ c2 ≥ |c3|."""
        return (
            math.pi / 4 + tol >= self.c1
            and self.c1 + tol >= self.c2
            and self.c2 + tol >= abs(self.c3)
        )

    def to_dict(self) -> dict:
        return {"c1": self.c1, "c2": self.c2, "c3": self.c3}


@dataclass(frozen=True)
class BellLabel:
    """B_{alpha,beta}; see services.canonical_service.bell_state for the vectors."""
    alpha: int
    beta: int

    def __post_init__(self):
        if self.alpha not in (0, 1) or self.beta not in (0, 1):
            raise PreconditionError(f"Bell label bits must be 0/1, got ({self.alpha}, {self.beta})")

    def __str__(self) -> str:
        return f"B{self.alpha}{self.beta}"


# Order used for every Bell-indexed array: n00, n10, n01, n11
BELL_LABELS: Tuple[BellLabel, ...] = (
    BellLabel(0, 0),
    BellLabel(1, 0),
    BellLabel(0, 1),
    BellLabel(1, 1),
)


@dataclass(frozen=True, eq=False)
class KakResult:
    """U = e^{i·global_phase} (u⊗v) U_s(params) (ũ⊗ṽ)."""
    u: np.ndarray
    v: np.ndarray
    u_tilde: np.ndarray
    v_tilde: np.ndarray
    params: CanonicalParams
    global_phase: float
    residual: float

    def to_dict(self) -> dict:
        return {
            **self.params.to_dict(),
            "global_phase": self.global_phase,
            "residual": self.residual,
            "u": complex_pairs(self.u),
            "v": complex_pairs(self.v),
            "u_tilde": complex_pairs(self.u_tilde),
            "v_tilde": complex_pairs(self.v_tilde),
        }


# ─────────────────────────────────────────────
# Catalysis
# ─────────────────────────────────────────────

@dataclass(frozen=True)
class CatalysisReport:
    """Outcome of checking the catalysis identity on random inputs."""
    params: CanonicalParams
    trials: int
    max_state_residual: float
    min_catalyst_fidelity: float
    seed: int
    extended_trials: int = 0        # trials run with the C,D reference extension

    def __post_init__(self):
        if self.max_state_residual < 0:
            raise PreconditionError("residual must be non-negative")
        if not -1e-12 <= self.min_catalyst_fidelity <= 1 + 1e-12:
            raise PreconditionError(f"fidelity {self.min_catalyst_fidelity} outside [0, 1]")

    def to_dict(self) -> dict:
        return {
            **self.params.to_dict(),
            "trials": self.trials,
            "extended_trials": self.extended_trials,
            "max_state_residual": self.max_state_residual,
            "min_catalyst_fidelity": self.min_catalyst_fidelity,
            "seed": self.seed,
        }


# ─────────────────────────────────────────────
# LOCC monotone / no-go
# ─────────────────────────────────────────────

@dataclass(frozen=True)
class BellWeights:
    """n_{α,β}: squared norms of the ab components along |B_{α,β}⟩_AB."""
    n00: float
    n10: float
    n01: float
    n11: float

    def __post_init__(self):
        values = self.as_array()
        if np.any(values < -1e-12):
            raise PreconditionError(f"negative Bell weight in {values.tolist()}")
        if abs(values.sum() - 1.0) > 1e-10:
            raise PreconditionError(f"Bell weights sum to {values.sum():.12f}, not 1")

    def as_array(self) -> np.ndarray:
        return np.array([self.n00, self.n10, self.n01, self.n11], dtype=float)

    @classmethod
    def from_array(cls, values) -> "BellWeights":
        n00, n10, n01, n11 = (float(v) for v in values)
        return cls(n00, n10, n01, n11)

    def to_dict(self) -> dict:
        return {"n00": self.n00, "n10": self.n10, "n01": self.n01, "n11": self.n11}


class EqualityForm(Enum):
    """AB factor of a product state saturating the overlap bound."""
    AB_IS_01 = "AB_IS_01"
    AB_IS_10 = "AB_IS_10"
    NOT_EQUALITY_FORM = "NOT_EQUALITY_FORM"


@dataclass(frozen=True, eq=False)
class NogoReport:
    """Best (x, y) found when trying to push every overlap below cos²(c1+c2)."""
    c1: float
    c2: float
    samples: int
    min_over_xy_of_max_overlap: float
    bound: float
    witness_x: np.ndarray
    witness_y: np.ndarray
    seed: int

    @property
    def margin(self) -> float:
        return self.min_over_xy_of_max_overlap - self.bound

    @property
    def holds(self) -> bool:
        return self.margin >= -1e-9

    def to_dict(self) -> dict:
        return {
            "c1": self.c1,
            "c2": self.c2,
            "c3": 0.0,
            "samples": self.samples,
            "min_over_xy_of_max_overlap": self.min_over_xy_of_max_overlap,
            "bound": self.bound,
            "margin": self.margin,
            "holds": self.holds,
            "seed": self.seed,
            "witness_unitaries": {
                "x": {"dim": 4, "entries": complex_pairs(self.witness_x)},
                "y": {"dim": 4, "entries": complex_pairs(self.witness_y)},
            },
        }


# ─────────────────────────────────────────────
# Hamiltonian simulation
# ─────────────────────────────────────────────

def _check_normal_form(c1: float, c2: float, c3: float, what: str):
    if not all(math.isfinite(c) for c in (c1, c2, c3)):
        raise PreconditionError(f"{what}: non-finite coefficients")
    if c1 + REGION_TOL < c2 or c2 + REGION_TOL < abs(c3):
        raise PreconditionError(
            f"{what} ({c1}, {c2}, {c3}) is not in normal form c1 ≥ c2 ≥ |c3|; "
            "pre-reduce it with sign-pair flips and permutations"
        )


@dataclass(frozen=True)
class HamParams:
    """H = Σ c_k σ_k⊗σ_k in normal form c1 ≥ c2 ≥ |c3| (ħ = 1)."""
    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        _check_normal_form(self.c1, self.c2, self.c3, "HamParams")

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.c1, self.c2, self.c3)

    def to_dict(self) -> dict:
        return {"c1": self.c1, "c2": self.c2, "c3": self.c3}


@dataclass(frozen=True)
class ExtHamParams:
    """HamParams plus the global constant c4 (H + c4·1)."""
    c1: float
    c2: float
    c3: float
    c4: float = 0.0

    def __post_init__(self):
        _check_normal_form(self.c1, self.c2, self.c3, "ExtHamParams")
        if not math.isfinite(self.c4):
            raise PreconditionError("ExtHamParams: non-finite c4")

    @classmethod
    def from_ham(cls, h: HamParams, c4: float = 0.0) -> "ExtHamParams":
        return cls(h.c1, h.c2, h.c3, c4)


@dataclass(frozen=True)
class LambdaSpectrum:
    """Bell-basis eigenvalues, decreasing."""
    l1: float
    l2: float
    l3: float
    l4: float

    def __post_init__(self):
        ordered = self.as_tuple()
        if any(a + REGION_TOL < b for a, b in zip(ordered, ordered[1:])):
            raise PreconditionError(f"spectrum {self.as_tuple()} is not decreasing")

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.l1, self.l2, self.l3, self.l4)


class VerdictKind(Enum):
    LOCC_SIMULABLE = "LOCC_SIMULABLE"
    CATALYTIC_SIMULABLE = "CATALYTIC_SIMULABLE"
    FORBIDDEN = "FORBIDDEN"
    UNDECIDED = "UNDECIDED"


@dataclass(frozen=True)
class SimulationVerdict:
    """Whether `source` can simulate `target`, with the supporting witness."""
    kind: VerdictKind
    witness: dict = field(default_factory=dict)
    notes: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "witness": dict(self.witness), "notes": list(self.notes)}

    @classmethod
    def from_dict(cls, data: dict) -> "SimulationVerdict":
        return cls(VerdictKind(data["kind"]), dict(data.get("witness", {})), tuple(data.get("notes", ())))


@dataclass(frozen=True, eq=False)
class MixtureTerm:
    """One term p·(u⊗v)†(H⊗1)(u⊗v); u acts on A + Alice's ancillas, v on B + Bob's."""
    p: float
    u: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class FeasibleInterval:
    """Closed interval of admissible global constants c̃4."""
    lo: float
    hi: float

    def contains(self, value: float, tol: float = 1e-12) -> bool:
        return self.lo - tol <= value <= self.hi + tol

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class MixtureCheck:
    """Spectrum of the mixed operator and whether it stays in [λ4, λ1]."""
    within_bounds: bool
    spectrum: Tuple[float, ...]
    lower: float
    upper: float


@dataclass(frozen=True)
class ScanRow:
    source: HamParams
    target: HamParams
    kind: VerdictKind

    def as_csv(self) -> list:
        return [*self.source.as_tuple(), *self.target.as_tuple(), self.kind.value]


@dataclass(frozen=True)
class VerdictScan:
    """Verdict counts over randomly drawn normal-form pairs."""
    pairs: int
    seed: int
    counts: dict
    rows: Tuple[ScanRow, ...] = ()

    CSV_HEADER = ("c1", "c2", "c3", "t1", "t2", "t3", "kind")

    def to_dict(self) -> dict:
        return {
            "pairs": self.pairs,
            "seed": self.seed,
            "counts": {kind.value: self.counts.get(kind.value, 0) for kind in VerdictKind},
        }


# ─────────────────────────────────────────────
# Acceptance suite
# ─────────────────────────────────────────────

@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        # numpy comparisons yield np.bool_, which json refuses
        object.__setattr__(self, "passed", bool(self.passed))

    def to_dict(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed, "detail": dict(self.detail)}


@dataclass(frozen=True)
class SuiteReport:
    seed: int
    scale: float
    results: Tuple[CriterionResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "scale": self.scale,
            "all_passed": self.all_passed,
            "criteria": [r.to_dict() for r in self.results],
        }

    def table(self) -> str:
        width = max((len(r.title) for r in self.results), default=10)
        lines = [f"{'#':>2}  {'criterion':<{width}}  result"]
        for r in self.results:
            lines.append(f"{r.number:>2}  {r.title:<{width}}  {'PASS' if r.passed else 'FAIL'}")
        return "\n".join(lines)
