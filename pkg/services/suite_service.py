"""
Suite Service - the acceptance battery behind `main.py suite`.

Each criterion draws from its own Philox stream of the suite seed, so
the report depends only on (seed, scale). Nothing time-dependent goes into
the report.
"""

import math
from typing import Callable, List, Tuple

import numpy as np
from loguru import logger
from scipy.linalg import expm

from config.settings import Settings
from models.errors import QcatError
from models.quantum_models import (
    BELL_LABELS,
    CanonicalParams,
    CriterionResult,
    HamParams,
    SuiteReport,
    VerdictKind,
)
from models.tensor_models import PureState
from services import canonical_service, catalysis_service, hamsim_service, monotone_service
from services.io_service import dumps
from services.tensor_service import apply_on_targets, haar_random_unitary, random_state
from utils.rng import make_rng

ASSERT_TOL = 1e-12

NOGO_POINTS: Tuple[Tuple[float, float], ...] = (
    (0.3, 0.2), (0.1, 0.1), (0.4, 0.05), (math.pi / 8, math.pi / 8), (0.5, 0.2),
    (0.2, 0.2), (0.6, 0.1), (0.35, 0.35), (0.05, 0.01), (0.7, 0.08),
)

CATALYSIS_GRID: Tuple[Tuple[float, float, float], ...] = (
    (0.0, 0.0, 0.0),
    (0.3, 0.2, 0.1),
    (0.3, 0.2, 0.0),
    (0.3, 0.2, -0.1),
    (0.3, 0.3, 0.2),
    (0.3, 0.3, -0.3),
    (math.pi / 4, 0.0, 0.0),
    (math.pi / 4, math.pi / 4, math.pi / 4),
    (math.pi / 4, math.pi / 4, -math.pi / 4),
    (math.pi / 4, 0.2, -0.2),
)


def _scaled(count: int, scale: float, minimum: int) -> int:
    return max(minimum, int(round(count * scale)))


def _child_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2 ** 31))


def _random_region_params(rng: np.random.Generator) -> CanonicalParams:
    c1 = rng.uniform(0.0, math.pi / 4)
    c2 = rng.uniform(0.0, c1)
    return CanonicalParams(c1, c2, rng.uniform(-c2, c2))


# ─────────────────────────────────────────────
# Criteria
# ─────────────────────────────────────────────

def check_catalysis(seed: int, scale: float) -> CriterionResult:
    rng = make_rng(seed, 101)
    n_params = _scaled(200, scale, len(CATALYSIS_GRID) + 2)
    trials = _scaled(20, scale, 2)
    points = [CanonicalParams(*p) for p in CATALYSIS_GRID]
    points += [_random_region_params(rng) for _ in range(n_params - len(points))]

    worst_residual, worst_fidelity = 0.0, 1.0
    for params in points:
        report = catalysis_service.verify_catalysis(params, trials, _child_seed(rng))
        worst_residual = max(worst_residual, report.max_state_residual)
        worst_fidelity = min(worst_fidelity, report.min_catalyst_fidelity)

    passed = worst_residual <= ASSERT_TOL and worst_fidelity >= 1 - ASSERT_TOL
    return CriterionResult(1, "catalysis identity", passed, {
        "param_points": len(points),
        "trials_per_point": trials,
        "max_state_residual": worst_residual,
        "min_catalyst_fidelity": worst_fidelity,
    })


def check_bell_spectrum(seed: int, scale: float) -> CriterionResult:
    rng = make_rng(seed, 102)
    count = _scaled(100, scale, 5)
    worst_matrix, worst_phase = 0.0, 0.0
    for _ in range(count):
        params = CanonicalParams(*rng.uniform(-math.pi / 2, math.pi / 2, size=3))
        spectral = canonical_service.u_s(params)
        dense = expm(-1j * canonical_service.interaction_hamiltonian(*params.as_tuple()))
        worst_matrix = max(worst_matrix, float(np.max(np.abs(spectral - dense))))
        for label in BELL_LABELS:
            vec = canonical_service.bell_state(label)
            expected = np.exp(1j * canonical_service.bell_eigenphase(params, label))
            worst_phase = max(worst_phase, abs(vec.conj() @ spectral @ vec - expected))

    passed = worst_matrix <= ASSERT_TOL and worst_phase <= ASSERT_TOL
    return CriterionResult(2, "Bell spectrum", passed, {
        "triples": count,
        "max_entry_difference": worst_matrix,
        "max_eigenphase_difference": worst_phase,
    })


def check_decomposition(seed: int, scale: float) -> CriterionResult:
    rng = make_rng(seed, 103)
    count = _scaled(1000, scale, 10)
    failures, worst_residual = 0, 0.0
    for _ in range(count):
        try:
            result = canonical_service.kak_decompose(haar_random_unitary(rng, 4))
        except QcatError as e:
            logger.error(f"❌ Decomposition failed: {e}")
            failures += 1
            continue
        worst_residual = max(worst_residual, result.residual)
        if not result.params.in_region():
            failures += 1

    gates = dict(canonical_service.standard_gates())
    expected = {
        "CNOT": (gates["CNOT"], (math.pi / 4, 0.0, 0.0)),
        "SWAP": (gates["SWAP"], (math.pi / 4, math.pi / 4, math.pi / 4)),
        "U_s(0.3,0.2,0.1)": (canonical_service.u_s(CanonicalParams(0.3, 0.2, 0.1)), (0.3, 0.2, 0.1)),
    }
    named = {}
    for name, (matrix, target) in expected.items():
        params = canonical_service.kak_decompose(matrix).params.as_tuple()
        named[name] = float(np.max(np.abs(np.array(params) - np.array(target))))

    passed = failures == 0 and worst_residual <= 1e-9 and max(named.values()) <= 1e-9
    return CriterionResult(3, "canonical decomposition", passed, {
        "haar_samples": count,
        "failures": failures,
        "max_residual": worst_residual,
        "named_gate_errors": named,
    })


def check_monotone_values(seed: int, scale: float) -> CriterionResult:
    c1, c2 = 0.3, 0.2
    core = canonical_service.u_s(CanonicalParams(c1 + c2, 0.0, 0.0))
    bound = math.cos(c1 + c2) ** 2
    worst = 0.0
    for i in range(2):
        for j in range(2):
            start = PureState.basis(monotone_service.REGISTER, (i, j, 0, 0))
            phi1 = apply_on_targets(core, ("A", "B"), start)
            worst = max(worst, abs(monotone_service.max_schmidt_prob(phi1, monotone_service.LOCAL_CUT) - bound))
    return CriterionResult(4, "monotone values", worst <= ASSERT_TOL, {"max_difference": worst})


def check_overlap_inequality(seed: int, scale: float) -> CriterionResult:
    rng = make_rng(seed, 105)
    per_point = _scaled(1000, scale, 10)
    worst_margin = math.inf
    simplex = {}
    simplex_ok = True
    for c1, c2 in NOGO_POINTS:
        params = CanonicalParams(c1, c2, 0.0)
        bound = math.cos(c1 + c2) ** 2
        for _ in range(per_point):
            x, y = haar_random_unitary(rng, 4), haar_random_unitary(rng, 4)
            i, j = (int(b) for b in rng.integers(0, 2, size=2))
            worst_margin = min(worst_margin, monotone_service.overlap(params, x, y, i, j) - bound)

        value, weights = monotone_service.simplex_min(c1, c2)
        weight_error = float(np.max(np.abs(weights.as_array() - monotone_service.EQUALITY_WEIGHTS)))
        simplex_ok &= abs(value - bound) <= 1e-9 and weight_error <= 1e-4
        simplex[f"{c1!r},{c2!r}"] = {"value_minus_bound": value - bound, "weight_error": weight_error}

    passed = worst_margin >= -ASSERT_TOL and simplex_ok
    return CriterionResult(5, "overlap inequality", passed, {
        "samples": per_point * len(NOGO_POINTS),
        "min_overlap_minus_bound": worst_margin,
        "simplex_min": simplex,
    })


def check_verdicts(seed: int, scale: float) -> CriterionResult:
    cases = (
        ((0.5, 0.0, 0.0), (0.3, 0.2, 0.0), VerdictKind.LOCC_SIMULABLE),
        ((0.3, 0.2, 0.0), (0.5, 0.0, 0.0), VerdictKind.CATALYTIC_SIMULABLE),
        ((0.3, 0.2, 0.1), (0.6, 0.0, 0.0), VerdictKind.FORBIDDEN),
        ((0.3, 0.2, 0.1), (0.3, 0.2, -0.1), VerdictKind.FORBIDDEN),
    )
    outcomes = {}
    passed = True
    for source, target, expected in cases:
        h, t = HamParams(*source), HamParams(*target)
        verdict = hamsim_service.classify_simulation(h, t)
        ok = verdict.kind is expected
        if expected is VerdictKind.FORBIDDEN:
            ok &= hamsim_service.catlu_feasible_c4(h, t) is None
        passed &= ok
        outcomes[f"{source} -> {target}"] = verdict.kind.value
    return CriterionResult(6, "partial-order verdicts", passed, {"verdicts": outcomes})


def check_mixtures(seed: int, scale: float) -> CriterionResult:
    rng = make_rng(seed, 107)
    count = _scaled(1000, scale, 6)
    h = HamParams(0.3, 0.2, 0.1)
    outside = 0
    for m in range(count):
        ancillas = m % 3
        mixture = hamsim_service.random_mixture(rng, int(rng.integers(1, 5)), ancillas)
        if not hamsim_service.mixture_spectrum_bounds(h, mixture, ancillas).within_bounds:
            outside += 1

    twirl = hamsim_service.mixture_spectrum_bounds(h, hamsim_service.pauli_twirl())
    twirl_max = max(abs(x) for x in twirl.spectrum)
    passed = outside == 0 and twirl.within_bounds and twirl_max <= ASSERT_TOL
    return CriterionResult(7, "mixture spectrum bound", passed, {
        "mixtures": count,
        "outside_bounds": outside,
        "twirl_max_abs_eigenvalue": twirl_max,
    })


def check_h_coefficient(seed: int, scale: float) -> CriterionResult:
    rng = make_rng(seed, 108)
    count = _scaled(10000, scale, 30)
    worst = 0.0
    for k in range(count):
        phi0 = random_state(rng, ("a", "b"))
        u, v = haar_random_unitary(rng, 4), haar_random_unitary(rng, 4)
        worst = max(worst, hamsim_service.h_coefficient(phi0, u, v, 1 + k % 3))

    identity_error = 0.0
    phi0 = random_state(rng, ("a", "b"))
    for n in (1, 2, 3):
        value = hamsim_service.h_coefficient(phi0, np.eye(4), np.eye(4), n)
        identity_error = max(identity_error, abs(value - 1.0))

    passed = worst <= 1 + 1e-10 and identity_error <= ASSERT_TOL
    return CriterionResult(8, "h-coefficient bound", passed, {
        "samples": count,
        "max_h": worst,
        "identity_error": identity_error,
    })


def _fingerprint(seed: int) -> str:
    """A cheap deterministic slice of the battery, serialized."""
    params = CanonicalParams(0.3, 0.2, 0.1)
    return dumps({
        "catalysis": catalysis_service.verify_catalysis(params, 10, seed).to_dict(),
        "nogo": monotone_service.nogo_search(0.3, 0.2, 50, seed).to_dict(),
        "scan": hamsim_service.scan_verdicts(200, seed).to_dict(),
        "kak": canonical_service.kak_decompose(haar_random_unitary(make_rng(seed, 109), 4)).to_dict(),
    })


def check_determinism(seed: int, scale: float) -> CriterionResult:
    first, second = _fingerprint(seed), _fingerprint(seed)
    return CriterionResult(9, "determinism", first == second, {"bytes": len(first.encode("utf-8"))})


CRITERIA: Tuple[Callable[[int, float], CriterionResult], ...] = (
    check_catalysis,
    check_bell_spectrum,
    check_decomposition,
    check_monotone_values,
    check_overlap_inequality,
    check_verdicts,
    check_mixtures,
    check_h_coefficient,
    check_determinism,
)


class SuiteRunner:
    """Run the acceptance criteria for one (seed, scale)."""

    def __init__(
        self,
        settings: Settings,
        criteria: Tuple[Callable[[int, float], CriterionResult], ...] = CRITERIA,
    ):
        self.settings = settings
        self.criteria = tuple(criteria)

    def run(self, seed: int = None) -> SuiteReport:
        """Run every criterion; an exception inside one marks it failed."""
        seed = self.settings.seed if seed is None else seed
        results: List[CriterionResult] = []
        for number, check in enumerate(self.criteria, start=1):
            result = self._run_one(number, check, seed)
            status = "✅" if result.passed else "❌"
            logger.info(f"{status} [{result.number}] {result.title}")
            results.append(result)

        report = SuiteReport(seed=seed, scale=self.settings.suite_scale, results=tuple(results))
        if report.all_passed:
            logger.info("✅ Acceptance suite passed")
        else:
            logger.warning(f"⚠️ {sum(not r.passed for r in results)} criterion(s) failed")
        return report

    def _run_one(self, number: int, check, seed: int) -> CriterionResult:
        try:
            return check(seed, self.settings.suite_scale)
        except Exception as e:
            # a bug in one criterion must not hide the rest of the table
            logger.error(f"❌ Criterion {number} raised {type(e).__name__}: {e}")
            title = check.__name__.removeprefix("check_")
            return CriterionResult(number, title, False, {"error": f"{type(e).__name__}: {e}"})
