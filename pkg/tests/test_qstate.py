import math

import numpy as np
import pytest

from ghzlu.exceptions import InvalidInputError, NotNormalizedError, NotUnitaryError
from ghzlu.services.asd import ASDState, compute_asd, is_ghz_class, reconstruct
from ghzlu.services.qstate import (
    GHZ_STATE,
    HADAMARD,
    SLOCC_CLASSES,
    W_STATE,
    LocalUnitary,
    LocalUnitaryTriple,
    PureState3Q,
    apply_local_unitaries,
    conjugate,
    fidelity,
    ghz_weight,
    haar_random_local_unitary,
    haar_random_triple,
    hyperdeterminant,
    local_schmidt_minima,
    overlap,
    random_state,
    slocc_class,
    three_tangle,
)


def test_state_requires_unit_norm():
    with pytest.raises(NotNormalizedError):
        PureState3Q(np.array([1, 1, 0, 0, 0, 0, 0, 0]))


def test_state_requires_eight_amplitudes():
    with pytest.raises(InvalidInputError):
        PureState3Q(np.ones(4) / 2)


def test_from_amplitudes_renormalizes():
    state = PureState3Q.from_amplitudes([1, 0, 0, 0, 0, 0, 0, 1], renormalize=True)
    assert state.allclose(GHZ_STATE, 1e-15)


def test_amplitudes_are_read_only():
    with pytest.raises(ValueError):
        GHZ_STATE.amp[0] = 0


def test_non_unitary_factor_rejected():
    with pytest.raises(NotUnitaryError):
        LocalUnitary(np.array([[1, 1], [0, 1]]))


def test_hadamard_is_an_involution():
    assert np.allclose((HADAMARD @ HADAMARD).u, np.eye(2), atol=1e-15)


def test_identity_triple_leaves_state_unchanged():
    state = random_state(7)
    assert apply_local_unitaries(state, LocalUnitaryTriple.identity()).allclose(state, 1e-15)


def test_haar_unitary_is_deterministic_per_seed():
    a = haar_random_local_unitary(42)
    b = haar_random_local_unitary(42)
    assert np.array_equal(a.u, b.u)
    assert np.allclose(a.u.conj().T @ a.u, np.eye(2), atol=1e-12)


def test_then_composes_in_application_order():
    state = random_state(1)
    first, second = haar_random_triple(2), haar_random_triple(3)
    stepwise = apply_local_unitaries(apply_local_unitaries(state, first), second)
    assert apply_local_unitaries(state, first.then(second)).allclose(stepwise, 1e-12)


def test_ghz_tangle_is_one():
    assert three_tangle(GHZ_STATE) == pytest.approx(1.0, abs=1e-15)


def test_tangle_of_asd_state_is_four_j4(phi_asd):
    l0, l4 = phi_asd.lambdas[0], phi_asd.lambdas[4]
    assert three_tangle(reconstruct(phi_asd)) == pytest.approx(4 * (l0 * l4) ** 2, abs=1e-15)


def test_tangle_is_lu_invariant():
    rng = np.random.default_rng(5)
    for _ in range(20):
        state = random_state(rng)
        moved = apply_local_unitaries(state, haar_random_triple(rng))
        assert three_tangle(moved) == pytest.approx(three_tangle(state), abs=1e-12)


def test_hyperdeterminant_of_w_vanishes():
    assert abs(hyperdeterminant(W_STATE)) < 1e-15


@pytest.mark.parametrize('amplitudes, expected', [
    ([1, 0, 0, 0, 0, 0, 0, 1], 'GHZ'),
    ([0, 1, 1, 0, 1, 0, 0, 0], 'W'),
    ([1, 0, 0, 1, 0, 0, 0, 0], 'A-BC'),
    ([1, 0, 0, 0, 0, 1, 0, 0], 'B-AC'),
    ([1, 0, 0, 0, 0, 0, 1, 0], 'C-AB'),
    ([1, 0, 0, 0, 0, 0, 0, 0], 'A-B-C'),
])
def test_slocc_class(amplitudes, expected):
    state = PureState3Q.from_amplitudes(amplitudes, renormalize=True)
    assert slocc_class(state) == expected


def test_slocc_class_survives_local_unitaries():
    # flips and phases keep the zero pattern of W exact
    flip = LocalUnitary(np.array([[0, 1], [1, 0]]))
    moved = apply_local_unitaries(W_STATE, LocalUnitaryTriple(
        flip, LocalUnitary.diagonal(0.0, 0.7), flip @ LocalUnitary.diagonal(1.1, -0.4)))
    assert slocc_class(moved) == 'W'


def test_slocc_class_of_rotated_ghz_class_state():
    state = random_state(12)
    assert slocc_class(apply_local_unitaries(state, haar_random_triple(13))) == 'GHZ'
    assert slocc_class(state) in SLOCC_CLASSES


def thin_ghz(l0):
    return ASDState((l0, 0.0, 0.0, 0.0, math.sqrt(1.0 - l0 * l0)), 0.0)


@pytest.mark.parametrize('l0', [0.5, 1e-3, 1e-5, 1e-7])
def test_small_lambda0_stays_in_ghz_class(l0, tol):
    asd = thin_ghz(l0)
    assert is_ghz_class(asd)
    assert slocc_class(reconstruct(asd), tol) == 'GHZ'


@pytest.mark.parametrize('l0', [0.5, 1e-3, 1e-5])
def test_small_lambda0_ghz_class_after_local_unitaries(l0, tol):
    moved = apply_local_unitaries(reconstruct(thin_ghz(l0)), haar_random_triple(21))
    assert slocc_class(moved, tol) == 'GHZ'


def test_vanishing_lambda0_is_product(tol):
    asd = thin_ghz(1e-12)
    assert not is_ghz_class(asd)
    assert slocc_class(reconstruct(asd), tol) == 'A-B-C'


GHZ_CORPUS = [
    (0.5, 0.0, 0.5, 0.5, 0.5),
    (1e-3, 0.0, 0.0, 0.0, math.sqrt(1.0 - 1e-6)),
    (1e-5, 0.0, 0.0, 0.0, math.sqrt(1.0 - 1e-10)),
    (1e-7, 0.3, 0.0, 0.4, math.sqrt(1.0 - 0.25 - 1e-14)),
    (1e-12, 0.0, 0.0, 0.0, math.sqrt(1.0 - 1e-24)),
    (0.6, 0.8, 0.0, 0.0, 0.0),
    (0.6, 0.0, 0.8, 0.0, 0.0),
    (1.0, 0.0, 0.0, 0.0, 0.0),
]


@pytest.mark.parametrize('lambdas', GHZ_CORPUS)
def test_ghz_test_agrees_with_tangle_and_slocc(lambdas, tol):
    asd = ASDState(lambdas, 0.0)
    state = reconstruct(asd)
    assert is_ghz_class(asd) == (ghz_weight(state) > tol.tangle)
    assert is_ghz_class(asd) == (slocc_class(state, tol) == 'GHZ')


def test_w_state_is_not_ghz_class():
    asd, _ = compute_asd(W_STATE)
    assert not is_ghz_class(asd)
    assert ghz_weight(W_STATE) < 1e-9


def test_local_schmidt_minima_of_biseparable_state():
    state = PureState3Q.from_amplitudes([1, 0, 0, 1, 0, 0, 0, 0], renormalize=True)
    a, b, c = local_schmidt_minima(state)
    assert a == pytest.approx(0.0, abs=1e-15)
    assert b == pytest.approx(math.sqrt(0.5))
    assert c == pytest.approx(math.sqrt(0.5))


def test_overlap_of_orthogonal_ghz_states():
    minus = PureState3Q.from_amplitudes([1, 0, 0, 0, 0, 0, 0, -1], renormalize=True)
    assert abs(overlap(GHZ_STATE, minus)) == pytest.approx(0.0, abs=1e-16)


def test_overlap_matches_direct_hadamard_product(phi_asd, phi_prime_asd):
    phi = reconstruct(phi_asd)
    h3 = np.kron(np.kron(HADAMARD.u, HADAMARD.u), HADAMARD.u)
    expected = complex(np.vdot(phi.amp, h3 @ phi.amp))
    assert overlap(phi, reconstruct(phi_prime_asd)) == pytest.approx(expected, abs=1e-12)


def test_overlap_is_antilinear_in_first_argument(phi_asd):
    phi = reconstruct(phi_asd)
    shifted = PureState3Q(1j * phi.amp)
    assert overlap(shifted, phi) == pytest.approx(-1j, abs=1e-15)


def test_haar_first_entry_averages_one_half():
    rng = np.random.default_rng(2024)
    weights = [abs(haar_random_local_unitary(rng).u[0, 0]) ** 2 for _ in range(10_000)]
    assert float(np.mean(weights)) == pytest.approx(0.5, abs=0.02)


def test_fidelity_with_conjugate_of_real_state_is_one(phi_asd):
    state = reconstruct(phi_asd)
    assert fidelity(state, conjugate(state)) == pytest.approx(1.0, abs=1e-15)
