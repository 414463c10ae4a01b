import cmath
import math

import numpy as np
import pytest

from ghzlu.exceptions import NotGhzClassError, PhaseShiftDomainError
from ghzlu.services.asd import ASDState, reconstruct
from ghzlu.services.invariants import (
    closed_form_positive,
    closed_form_split,
    compute_invariants,
    entanglement_measure,
    gamma_of,
    lu_invariant_ln_rho,
    phase_shift_unitaries,
    rho_iota_coefficients,
    rho_iota_transform,
    uniqueness_residual,
)
from ghzlu.services.oracle import random_asd
from ghzlu.services.qstate import HADAMARD, LocalUnitaryTriple, apply_local_unitaries


def test_phi_invariants(phi_asd):
    inv = compute_invariants(phi_asd)
    assert inv.gamma == pytest.approx(-0.25, abs=1e-15)
    assert inv.j1 == pytest.approx(1 / 16, abs=1e-15)
    assert inv.j4 == pytest.approx(1 / 16, abs=1e-15)
    assert inv.rho == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert inv.iota == pytest.approx(-0.5, abs=1e-12)


def test_hadamard_pair(phi_asd, phi_prime_asd):
    image = rho_iota_transform(phi_asd)
    assert np.allclose(image.coefficients, phi_prime_asd.coefficients, atol=1e-12)
    h3 = LocalUnitaryTriple(HADAMARD, HADAMARD, HADAMARD)
    assert apply_local_unitaries(reconstruct(phi_asd), h3).allclose(reconstruct(image), 1e-12)


def test_rho_of_pair_multiplies_to_one(phi_asd, phi_prime_asd):
    rho = compute_invariants(phi_asd).rho
    rho_prime = compute_invariants(phi_prime_asd).rho
    assert rho_prime == pytest.approx(math.sqrt(2), abs=1e-12)
    assert rho * rho_prime == pytest.approx(1.0, abs=1e-12)


def test_ghz_is_a_fixed_point(ghz_asd):
    inv = compute_invariants(ghz_asd)
    assert inv.rho == 1.0
    assert inv.iota == 0
    assert np.allclose(rho_iota_transform(ghz_asd).coefficients, ghz_asd.coefficients, atol=1e-15)


def test_transform_is_an_involution():
    rng = np.random.default_rng(13)
    for _ in range(200):
        a = random_asd(rng)
        inv = compute_invariants(a)
        coefficients = rho_iota_coefficients(a)
        assert math.fsum(abs(z) ** 2 for z in coefficients) == pytest.approx(1.0, abs=1e-10)
        image = rho_iota_transform(a)
        assert np.allclose(rho_iota_transform(image).coefficients, a.coefficients, atol=1e-10)
        expected_iota = inv.rho * a.lambdas[1] * cmath.exp(1j * a.phi)
        assert abs(compute_invariants(image).iota - expected_iota) <= 1e-10


def test_c4_example_rho(nclu_asd):
    assert compute_invariants(nclu_asd).rho == pytest.approx(math.sqrt(3) / 2, abs=1e-12)


def test_positive_rho_from_lambda_0():
    asd = ASDState((math.sqrt(0.6), 0.0, 0.0, 0.0, math.sqrt(0.4)))
    assert compute_invariants(asd).rho == pytest.approx(math.sqrt(1.5), abs=1e-12)


def test_measure(ghz_asd, phi_asd, phi_prime_asd):
    assert entanglement_measure(ghz_asd) == 1.0
    expected = 1 / (1 + math.log(math.sqrt(2)))
    assert entanglement_measure(phi_asd) == pytest.approx(expected, abs=1e-12)
    assert entanglement_measure(phi_prime_asd) == pytest.approx(expected, abs=1e-12)
    assert lu_invariant_ln_rho(phi_asd) == pytest.approx(lu_invariant_ln_rho(phi_prime_asd), abs=1e-12)


def test_gamma_of_real_state(phi_prime_asd):
    assert gamma_of(phi_prime_asd) == pytest.approx(-0.25, abs=1e-15)


def test_non_ghz_state_rejected():
    with pytest.raises(NotGhzClassError):
        compute_invariants(ASDState((1.0, 0.0, 0.0, 0.0, 0.0)))
    with pytest.raises(NotGhzClassError):
        compute_invariants(ASDState((0.0, 0.6, 0.0, 0.0, 0.8)))


@pytest.mark.parametrize('lambdas', [
    (math.sqrt(0.5), 1 / (2 * math.sqrt(2)), 1 / (2 * math.sqrt(2)),
     1 / (2 * math.sqrt(2)), 1 / (2 * math.sqrt(2))),
    (0.8, 0.0, 0.0, 0.36, 0.48),
])
def test_closed_form_positive_matches_general(lambdas):
    asd = ASDState(lambdas)
    inv = compute_invariants(asd)
    rho, iota = closed_form_positive(asd)
    assert rho == pytest.approx(inv.rho, abs=1e-12)
    assert iota == pytest.approx(inv.iota, abs=1e-12)


def test_closed_form_split_matches_general():
    asd = ASDState((0.5, 0.3, 0.0, math.sqrt(1 - 0.25 - 0.09 - 0.36), 0.6), 2.0)
    inv = compute_invariants(asd)
    rho, iota = closed_form_split(asd)
    assert rho == pytest.approx(inv.rho, abs=1e-12)
    assert iota == pytest.approx(inv.iota, abs=1e-12)


def test_uniqueness_residual_vanishes_at_rho_one(ghz_asd):
    q = 1 / (2 * math.sqrt(2))
    assert uniqueness_residual(ghz_asd, 'P4') == pytest.approx(0.0, abs=1e-15)
    r2 = ASDState((math.sqrt(0.5), 0.0, q, q, 0.5))
    assert uniqueness_residual(r2, 'R2') == pytest.approx(0.0, abs=1e-15)
    c3 = ASDState((0.5, 0.5, 0.0, 0.0, math.sqrt(0.5)), 1.0)
    assert uniqueness_residual(c3, 'C3') == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize('lambdas', [
    (0.5, 0.4, 0.45, 0.0, math.sqrt(1 - 0.25 - 0.16 - 0.2025)),  # lambda_3 = 0
    (0.5, 0.4, 0.0, 0.45, math.sqrt(1 - 0.25 - 0.16 - 0.2025)),  # lambda_2 = 0
    (0.6, 0.5, 0.0, 0.0, math.sqrt(1 - 0.36 - 0.25)),
])
def test_phase_shift_retargets_phase(lambdas):
    asd = ASDState(lambdas, 0.7)
    rng = np.random.default_rng(17)
    for target in rng.uniform(0.0, 2 * math.pi, 10):
        moved = apply_local_unitaries(reconstruct(asd), phase_shift_unitaries(asd, target))
        assert moved.allclose(reconstruct(asd.with_phase(target)), 1e-10)


def test_phase_shift_domain(nclu_asd):
    with pytest.raises(PhaseShiftDomainError):
        phase_shift_unitaries(nclu_asd, 1.0)
    with pytest.raises(PhaseShiftDomainError):
        phase_shift_unitaries(ASDState((0.6, 0.0, 0.0, 0.0, 0.8)), 1.0)
