import math
import time

import numpy as np
import pytest

from ghzlu.exceptions import InvalidInputError
from ghzlu.services.asd import conjugate_asd, lbps_count, reconstruct
from ghzlu.services.classify import ALL_LABELS, classify, decide_lu_equivalence, parse_label
from ghzlu.services.invariants import compute_invariants
from ghzlu.services.oracle import (
    N_ANGLES,
    TransitionObjective,
    brute_force_lu_equivalent,
    random_asd,
    sample_subfamily,
    unitary_from_angles,
)
from ghzlu.services.qstate import apply_local_unitaries, conjugate, haar_random_triple


def test_angle_parameterization_is_unitary():
    u = unitary_from_angles(0.3, 1.1, -0.4, 2.2)
    assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-15)
    assert np.allclose(unitary_from_angles(0, 0, 0, 0), np.eye(2))


@pytest.fixture
def objective(nclu_asd):
    target = apply_local_unitaries(reconstruct(random_asd(3)), haar_random_triple(4))
    return TransitionObjective(reconstruct(nclu_asd), target)


def test_objective_matches_full_operator(objective, nclu_asd):
    x = np.random.default_rng(8).uniform(0.0, 2.0 * math.pi, N_ANGLES)
    ua, ub, uc = (unitary_from_angles(*x[i:i + 4]) for i in range(0, N_ANGLES, 4))
    a = reconstruct(nclu_asd).amp
    b = objective.tb.conj().reshape(8)
    direct = np.vdot(b, np.kron(np.kron(ua, ub), uc) @ a)
    value, _ = objective(x)
    assert objective.overlap(x) == pytest.approx(complex(direct), abs=1e-14)
    assert value == pytest.approx(1.0 - abs(direct) ** 2, abs=1e-14)


def test_objective_gradient_matches_finite_differences(objective):
    x = np.random.default_rng(9).uniform(0.0, 2.0 * math.pi, N_ANGLES)
    _, grad = objective(x)
    h = 1e-6
    for k in range(N_ANGLES):
        step = np.zeros(N_ANGLES)
        step[k] = h
        numeric = (objective(x + step)[0] - objective(x - step)[0]) / (2 * h)
        assert grad[k] == pytest.approx(numeric, abs=1e-8)


def test_self_pair_found_at_first_restart(phi_asd):
    state = reconstruct(phi_asd)
    verdict = brute_force_lu_equivalent(state, state, budget=4, rng_seed=1)
    assert verdict.equivalent
    assert verdict.best_fidelity == pytest.approx(1.0, abs=1e-12)
    assert verdict.restarts_used == 1


def test_hadamard_pair_found(phi_asd, phi_prime_asd):
    a, b = reconstruct(phi_asd), reconstruct(phi_prime_asd)
    verdict = brute_force_lu_equivalent(a, b, rng_seed=2)
    assert verdict.equivalent
    assert verdict.best_fidelity >= 1 - 1e-8
    gap = np.max(np.abs(apply_local_unitaries(a, verdict.witness).amp - b.amp))
    assert gap <= 1e-6


def test_rotated_copy_found():
    a = reconstruct(random_asd(31))
    b = apply_local_unitaries(a, haar_random_triple(32))
    verdict = brute_force_lu_equivalent(a, b, rng_seed=3)
    assert verdict.equivalent
    assert np.max(np.abs(apply_local_unitaries(a, verdict.witness).amp - b.amp)) <= 1e-6


def test_nclu_pair_rejected_quickly(nclu_asd):
    state = reconstruct(nclu_asd)
    verdict = brute_force_lu_equivalent(state, conjugate(state), budget=8, rng_seed=4)
    assert not verdict.equivalent
    assert verdict.restarts_used == 8


@pytest.mark.slow
def test_nclu_pair_rejected_at_full_budget(nclu_asd):
    state = reconstruct(nclu_asd)
    start = time.perf_counter()
    verdict = brute_force_lu_equivalent(state, conjugate(state), budget=64, rng_seed=5)
    # the full acceptance run needs about 200 such searches in five minutes
    assert time.perf_counter() - start < 5.0
    assert not verdict.equivalent
    assert verdict.best_fidelity < 1 - 1e-6


def test_budget_must_be_positive(ghz_asd):
    state = reconstruct(ghz_asd)
    with pytest.raises(InvalidInputError):
        brute_force_lu_equivalent(state, state, budget=0)


def test_oracle_is_deterministic_per_seed(nclu_asd):
    a = reconstruct(nclu_asd)
    b = conjugate(a)
    first = brute_force_lu_equivalent(a, b, budget=2, rng_seed=9)
    second = brute_force_lu_equivalent(a, b, budget=2, rng_seed=9)
    assert first.best_fidelity == second.best_fidelity


@pytest.mark.parametrize('label', ALL_LABELS, ids=str)
def test_sample_round_trips_label(label):
    for seed in range(5):
        assert classify(sample_subfamily(label, seed)).label == label


def test_sample_p4_prime_is_ghz(ghz_asd):
    assert sample_subfamily(parse_label("P4'"), 0) == ghz_asd


def test_sample_r2_prime_form():
    for seed in range(5):
        asd = sample_subfamily(parse_label("R2'"), seed)
        assert asd.lambdas[0] == pytest.approx(math.sqrt(0.5), abs=1e-15)
        assert asd.lambdas[1] == 0.0


def test_sample_double_primes_keep_away_from_rho_one():
    for label in ALL_LABELS:
        if not label.prime:
            assert compute_invariants(sample_subfamily(label, 7)).ln_rho_abs >= 0.05


def test_sample_r2_double_prime_draws_both_lbps_forms():
    counts = {lbps_count(sample_subfamily(parse_label("R2''"), seed)) for seed in range(20)}
    assert counts == {4, 5}


def test_sample_is_deterministic():
    label = parse_label("C4'")
    assert sample_subfamily(label, 123) == sample_subfamily(label, 123)


def test_analytic_and_oracle_agree_on_hadamard_pair(phi_asd, phi_prime_asd):
    decision = decide_lu_equivalence(phi_asd, phi_prime_asd)
    verdict = brute_force_lu_equivalent(reconstruct(phi_asd), reconstruct(phi_prime_asd), rng_seed=6)
    assert decision.equivalent == verdict.equivalent


@pytest.mark.slow
def test_analytic_and_oracle_agree_on_nclu(nclu_asd):
    decision = decide_lu_equivalence(nclu_asd, conjugate_asd(nclu_asd))
    verdict = brute_force_lu_equivalent(reconstruct(nclu_asd), reconstruct(conjugate_asd(nclu_asd)),
                                        budget=64, rng_seed=7)
    assert not decision.equivalent
    assert not verdict.equivalent
