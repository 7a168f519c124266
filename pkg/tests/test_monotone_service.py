import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import floats, integers, lists
from numpy.testing import assert_allclose

from models.errors import NonUnitaryError, PreconditionError
from models.quantum_models import BellLabel, BellWeights, CanonicalParams, EqualityForm
from models.tensor_models import PureState
from services.canonical_service import bell_state, u_s
from services.monotone_service import (
    LOCAL_CUT,
    REGISTER,
    bell_weights,
    equality_classifier,
    max_schmidt_prob,
    nielsen_forbidden,
    nogo_search,
    overlap,
    overlap_table,
    phase_sum,
    phi_states,
    simplex_min,
)
from services.tensor_service import apply_on_targets, haar_random_unitary, random_state

AB_CUT = (("A",), ("B",))
EYE = np.eye(4, dtype=complex)


def two_qubit(vec) -> PureState:
    return PureState(("A", "B"), vec)


def ab_with_ancillas(ab_vec, anc_bits=(0, 0)) -> PureState:
    return two_qubit(ab_vec).tensor(PureState.basis(("a", "b"), anc_bits))


def test_max_schmidt_prob_examples():
    assert max_schmidt_prob(two_qubit(bell_state(BellLabel(0, 0))), AB_CUT) == pytest.approx(0.5, abs=1e-12)
    assert max_schmidt_prob(PureState.basis(("A", "B"), (1, 0)), AB_CUT) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("i, j", [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_phi1_monotone_value(i, j):
    core = u_s(CanonicalParams(0.5, 0.0, 0.0))
    phi1 = apply_on_targets(core, ("A", "B"), PureState.basis(REGISTER, (i, j, 0, 0)))
    assert max_schmidt_prob(phi1, LOCAL_CUT) == pytest.approx(math.cos(0.5) ** 2, abs=1e-12)


def test_max_schmidt_prob_local_invariance(rng):
    state = random_state(rng, REGISTER)
    moved = apply_on_targets(haar_random_unitary(rng, 4), ("A", "a"), state)
    moved = apply_on_targets(haar_random_unitary(rng, 4), ("B", "b"), moved)
    assert max_schmidt_prob(moved, LOCAL_CUT) == pytest.approx(max_schmidt_prob(state, LOCAL_CUT), abs=1e-12)


def test_nielsen_forbidden():
    product = PureState.basis(("A", "B"), (0, 0))
    bell = two_qubit(bell_state(BellLabel(0, 0)))
    assert nielsen_forbidden(product, bell, AB_CUT)
    assert not nielsen_forbidden(bell, product, AB_CUT)

    def squeezed(theta):
        vec = np.zeros(4, dtype=complex)
        vec[0], vec[3] = math.cos(theta), -1j * math.sin(theta)
        return two_qubit(vec)

    assert not nielsen_forbidden(squeezed(0.4), squeezed(0.2), AB_CUT)


def test_phi_states():
    phi2, product = phi_states(CanonicalParams(0.3, 0.2, 0.0), EYE, EYE, 0, 1)
    assert_allclose(product.amplitudes, PureState.basis(REGISTER, (0, 1, 0, 0)).amplitudes, atol=0)
    assert abs(np.linalg.norm(phi2.amplitudes) - 1) <= 1e-12

    same, prod = phi_states(CanonicalParams(0, 0, 0), haar_random_unitary(1, 4), haar_random_unitary(2, 4), 1, 0)
    assert_allclose(same.amplitudes, prod.amplitudes, atol=1e-15)

    with pytest.raises(NonUnitaryError):
        phi_states(CanonicalParams(0.3, 0.2, 0.0), 2 * EYE, EYE, 0, 0)


def test_bell_weights_examples(rng):
    weights = bell_weights(ab_with_ancillas(bell_state(BellLabel(0, 0))))
    assert_allclose(weights.as_array(), [1, 0, 0, 0], atol=1e-15)

    weights = bell_weights(PureState.basis(REGISTER, (0, 1, 0, 0)))
    assert_allclose(weights.as_array(), [0.5, 0, 0.5, 0], atol=1e-15)

    _, product = phi_states(CanonicalParams(0.3, 0.2, 0), haar_random_unitary(rng, 4), haar_random_unitary(rng, 4), 1, 1)
    assert bell_weights(product).as_array().sum() == pytest.approx(1.0, abs=1e-12)


def test_phase_sum_examples():
    c1, c2 = 0.3, 0.2
    assert phase_sum(c1, c2, BellWeights(0.5, 0, 0.5, 0)) == pytest.approx(math.cos(0.5) ** 2, abs=1e-15)
    assert phase_sum(c1, c2, BellWeights(1, 0, 0, 0)) == pytest.approx(1.0, abs=1e-15)
    assert phase_sum(c1, c2, BellWeights(0, 0.5, 0, 0.5)) == pytest.approx(math.cos(0.1) ** 2, abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(
    floats(min_value=1e-6, max_value=math.pi / 8),
    floats(min_value=0.0, max_value=1.0),
    lists(floats(min_value=0.0, max_value=1.0), min_size=4, max_size=4).filter(lambda w: sum(w) > 1e-3),
)
def test_phase_sum_never_below_bound(c2, f1, raw):
    c1 = c2 + f1 * (math.pi / 4 - 2 * c2)
    weights = np.array(raw) / sum(raw)
    assert phase_sum(c1, c2, BellWeights.from_array(weights)) >= math.cos(c1 + c2) ** 2 - 1e-12


@pytest.mark.parametrize("i, j, expected", [
    (0, 1, math.cos(0.5) ** 2),
    (1, 0, math.cos(0.5) ** 2),
    (0, 0, math.cos(0.1) ** 2),
    (1, 1, math.cos(0.1) ** 2),
])
def test_overlap_with_identity_locals(i, j, expected):
    assert overlap(CanonicalParams(0.3, 0.2, 0.0), EYE, EYE, i, j) == pytest.approx(expected, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(integers(min_value=0, max_value=2 ** 31 - 1), integers(0, 1), integers(0, 1))
def test_overlap_matches_phase_sum_and_bound(seed, i, j):
    params = CanonicalParams(0.3, 0.2, 0.0)
    x, y = haar_random_unitary(seed, 4), haar_random_unitary(seed + 1, 4)
    value = overlap(params, x, y, i, j)
    phi2, product = phi_states(params, x, y, i, j)
    assert value == pytest.approx(abs(product.inner(phi2)) ** 2, abs=1e-12)
    assert value == pytest.approx(phase_sum(0.3, 0.2, bell_weights(product)), abs=1e-12)
    assert value >= math.cos(0.5) ** 2 - 1e-12
    assert overlap_table(params, x, y)[i, j] == pytest.approx(value, abs=1e-12)


@pytest.mark.parametrize("params", [
    CanonicalParams(0.3, 0.0, 0.0),
    CanonicalParams(0.2, 0.3, 0.0),
    CanonicalParams(0.6, 0.3, 0.0),
    CanonicalParams(0.3, 0.2, 0.1),
])
def test_overlap_preconditions(params):
    with pytest.raises(PreconditionError):
        overlap(params, EYE, EYE, 0, 0)


@pytest.mark.parametrize("c1, c2", [(0.3, 0.2), (0.1, 0.1), (0.6, 0.15)])
def test_simplex_min(c1, c2):
    value, weights = simplex_min(c1, c2)
    assert value == pytest.approx(math.cos(c1 + c2) ** 2, abs=1e-9)
    assert_allclose(weights.as_array(), [0.5, 0, 0.5, 0], atol=1e-4)


def test_simplex_min_never_below_bound_on_grid():
    for c1 in np.linspace(0.05, math.pi / 4 - 0.05, 5):
        for c2 in np.linspace(0.02, c1, 4):
            if c1 + c2 > math.pi / 4:
                continue
            value, _ = simplex_min(float(c1), float(c2))
            assert value >= math.cos(c1 + c2) ** 2 - 1e-9


def test_equality_classifier():
    xi = random_state(5, ("a",)).tensor(random_state(6, ("b",)))
    ket01 = PureState.basis(("A", "B"), (0, 1)).tensor(xi)
    ket10 = PureState.basis(("A", "B"), (1, 0)).tensor(PureState.basis(("a", "b"), (1, 1)))
    assert equality_classifier(ket01) is EqualityForm.AB_IS_01
    assert equality_classifier(ket10) is EqualityForm.AB_IS_10
    assert equality_classifier(ab_with_ancillas(bell_state(BellLabel(0, 0)))) is EqualityForm.NOT_EQUALITY_FORM
    assert equality_classifier(PureState.basis(REGISTER, (0, 0, 0, 0))) is EqualityForm.NOT_EQUALITY_FORM


def test_equality_classifier_accepts_other_label_orders():
    state = PureState.basis(("A", "B", "a", "b"), (1, 0, 0, 1)).reordered(("b", "a", "B", "A"))
    assert equality_classifier(state) is EqualityForm.AB_IS_10


def test_nogo_search_budget_one_is_the_identity_pair():
    report = nogo_search(0.3, 0.2, 1, 7)
    assert report.min_over_xy_of_max_overlap == pytest.approx(math.cos(0.1) ** 2, abs=1e-12)
    assert_allclose(report.witness_x, EYE, atol=0)
    assert report.holds


def test_nogo_search_holds_and_is_deterministic():
    first = nogo_search(0.3, 0.2, 200, 7)
    second = nogo_search(0.3, 0.2, 200, 7)
    assert first.holds
    assert first.min_over_xy_of_max_overlap >= math.cos(0.5) ** 2 - 1e-9
    assert first.to_dict() == second.to_dict()


def test_nogo_search_rejects_bad_input():
    with pytest.raises(ValueError):
        nogo_search(0.3, 0.2, 0, 7)
    with pytest.raises(PreconditionError):
        nogo_search(0.3, 0.0, 10, 7)
