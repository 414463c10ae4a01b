"""
GHZ-class invariants: gamma, J1, J4, rho, iota, |ln rho|, the entanglement
measure 1/(1+|ln rho|), the rho-iota transformation and the diagonal
phase-shift unitaries for states with lambda_2 lambda_3 = 0.
"""
import cmath
import math
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ghzlu.exceptions import ConsistencyError, NotGhzClassError, PhaseShiftDomainError
from ghzlu.services.asd import ASDState, is_ghz_class
from ghzlu.services.qstate import LocalUnitary, LocalUnitaryTriple

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GhzInvariants:
    gamma: complex
    j1: float
    j4: float
    rho: float
    iota: complex
    ln_rho_abs: float
    measure: float

    def as_dict(self):
        return {
            'gamma': self.gamma,
            'j1': self.j1,
            'j4': self.j4,
            'rho': self.rho,
            'iota': self.iota,
            'ln_rho_abs': self.ln_rho_abs,
            'measure': self.measure,
        }


def require_ghz_class(asd: ASDState):
    if not is_ghz_class(asd):
        lam = asd.lambdas
        raise NotGhzClassError(
            f"lambda_0 * lambda_4 = {lam[0] * lam[4]:.3e} vanishes "
            f"(tolerance {asd.tol.zero}): state is outside the GHZ SLOCC class")


def gamma_of(asd: ASDState) -> complex:
    """lambda_1 lambda_4 e^{i phi} - lambda_2 lambda_3."""
    lam = asd.lambdas
    return lam[1] * lam[4] * cmath.exp(1j * asd.phi) - lam[2] * lam[3]


def compute_invariants(asd: ASDState) -> GhzInvariants:
    """gamma, J1, J4, rho and iota of a GHZ-class ASD."""
    require_ghz_class(asd)
    l0, l1, l2, l3, l4 = asd.lambdas
    gamma = gamma_of(asd)
    j1 = abs(gamma) ** 2
    j4 = (l0 * l4) ** 2
    rho = math.sqrt(j4 + j1) / math.sqrt((l2 * l2 + l4 * l4) * (l3 * l3 + l4 * l4))
    iota = (l2 * l3 + gamma.conjugate() / rho ** 2) / l4
    ln_rho_abs = abs(math.log(rho))
    return GhzInvariants(
        gamma=gamma,
        j1=j1,
        j4=j4,
        rho=rho,
        iota=iota,
        ln_rho_abs=ln_rho_abs,
        measure=1.0 / (1.0 + ln_rho_abs),
    )


def rho_iota_coefficients(asd: ASDState) -> Tuple[complex, ...]:
    """((1/rho) lambda_0, rho iota, rho lambda_2, rho lambda_3, rho lambda_4), unnormalized."""
    inv = compute_invariants(asd)
    l0, _, l2, l3, l4 = asd.lambdas
    rho = inv.rho
    return (complex(l0 / rho), rho * inv.iota, complex(rho * l2),
            complex(rho * l3), complex(rho * l4))


def rho_iota_transform(asd: ASDState) -> ASDState:
    """The other ASD of the LU class, obtained by the rho-iota transformation."""
    coefficients = rho_iota_coefficients(asd)
    norm = math.sqrt(math.fsum(abs(z) ** 2 for z in coefficients))
    if abs(norm - 1.0) > asd.tol.consistency:
        raise ConsistencyError(
            f"rho-iota image of {asd} has norm {norm!r}; expected 1")
    return ASDState.from_coefficients([z / norm for z in coefficients], asd.tol)


def lu_invariant_ln_rho(asd: ASDState) -> float:
    """|ln rho|, invariant under local unitaries on the whole GHZ class."""
    return compute_invariants(asd).ln_rho_abs


def entanglement_measure(asd: ASDState) -> float:
    """1 / (1 + |ln rho|); equals 1 exactly when rho = 1."""
    return compute_invariants(asd).measure


def closed_form_positive(asd: ASDState) -> Tuple[float, complex]:
    """rho = lambda_0 / sqrt(1 - lambda_0^2) and iota = lambda_1, valid when gamma = 0."""
    l0, l1 = asd.lambdas[0], asd.lambdas[1]
    return l0 / math.sqrt(1.0 - l0 * l0), complex(l1)


def closed_form_split(asd: ASDState) -> Tuple[float, complex]:
    """
    rho = sqrt(lambda_0^2 + lambda_1^2) / sqrt(1 - lambda_0^2 - lambda_1^2) and
    iota = lambda_1 e^{-i phi} / rho^2, valid when lambda_2 lambda_3 = 0.
    """
    l0, l1 = asd.lambdas[0], asd.lambdas[1]
    s = l0 * l0 + l1 * l1
    rho = math.sqrt(s) / math.sqrt(1.0 - s)
    return rho, l1 * cmath.exp(-1j * asd.phi) / rho ** 2


def uniqueness_residual(asd: ASDState, family: str) -> float:
    """
    Residual of the closed-form rho = 1 condition for the given family.

    Zero exactly when rho = 1; the P, R and C1-C3 forms are specializations of
    the general C4 one.
    """
    l0, l1, l2, l3, l4 = asd.lambdas
    if family.startswith('P'):
        return l0 * l0 - 0.5
    if family.startswith('R'):
        delta = asd.delta or 1
        return l0 * l0 + l1 * l1 - 0.5 - delta * l1 * l2 * l3 / l4
    if family in ('C1', 'C2', 'C3'):
        return l0 * l0 + l1 * l1 - 0.5
    return l0 * l0 + l1 * l1 - 0.5 - l1 * l2 * l3 * math.cos(asd.phi) / l4


def phase_shift_unitaries(asd: ASDState, target_phase: float) -> LocalUnitaryTriple:
    """
    Diagonal local unitaries moving the phase of ``asd`` to ``target_phase``.

    Defined when lambda_2 lambda_3 = 0 and lambda_0 lambda_1 lambda_4 != 0. With
    lambda_3 = 0 (lambda_2 != 0) the factors are diag(e^{i f1}, e^{i(2 f1 + f2)}),
    diag(e^{-i f1}, e^{-i f1}), diag(1, e^{-i(f1 + f2)}) with f1 = 0,
    f2 = target - phi; with lambda_2 = 0 they are diag(e^{i a}, e^{i b}),
    diag(e^{-i a}, e^{-i b}), identity with a = 0, b = target - phi.
    """
    l0, l1, l2, l3, l4 = asd.lambdas
    eps = asd.tol.zero
    if l2 >= eps and l3 >= eps:
        raise PhaseShiftDomainError(
            f"phase retargeting needs lambda_2 lambda_3 = 0, got lambda_2={l2:.3e}, lambda_3={l3:.3e}")
    if min(l0, l1, l4) < eps:
        raise PhaseShiftDomainError(
            f"phase retargeting needs lambda_0 lambda_1 lambda_4 != 0, got {asd.lambdas}")

    shift = target_phase - asd.phi
    if l2 >= eps:
        f1, f2 = 0.0, shift
        logger.debug(f"phase shift case lambda_3 = 0, f1={f1}, f2={f2:.6g}")
        return LocalUnitaryTriple(
            LocalUnitary.diagonal(f1, 2 * f1 + f2),
            LocalUnitary.diagonal(-f1, -f1),
            LocalUnitary.diagonal(0.0, -f2 - f1),
        )
    alpha, beta = 0.0, shift
    logger.debug(f"phase shift case lambda_2 = 0, alpha={alpha}, beta={beta:.6g}")
    return LocalUnitaryTriple(
        LocalUnitary.diagonal(alpha, beta),
        LocalUnitary.diagonal(-alpha, -beta),
        LocalUnitary(np.eye(2)),
    )
