"""
Generalized Schmidt decomposition (ASD) of three-qubit pure states.

Every state is LU-equivalent to

    lambda_0 |000> + lambda_1 e^{i phi} |100> + lambda_2 |101> + lambda_3 |110> + lambda_4 |111>

with nonnegative lambda_i and a single phase phi in [0, 2 pi).
"""
import math
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ghzlu.config import DEFAULT_TOLERANCES, Tolerances
from ghzlu.exceptions import InvalidInputError, NotNormalizedError, NumericalFailureError
from ghzlu.services.qstate import (
    LocalUnitary,
    LocalUnitaryTriple,
    PureState3Q,
    apply_local_unitaries,
    slice_pencil,
)

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

# amplitude indices of |000>, |100>, |101>, |110>, |111>
ASD_POSITIONS = (0, 4, 5, 6, 7)

# pencil coefficients below this are treated as an identically singular pencil
_PENCIL_FLOOR = 1e-24
_ROOT_RELATIVE = 1e-14
_TIE = 1e-12


def normalize_phase(phi: float, eps: float) -> float:
    """Reduce to [0, 2 pi) and snap values within ``eps`` of 0, pi or 2 pi."""
    phi = math.fmod(float(phi), TWO_PI)
    if phi < 0.0:
        phi += TWO_PI
    if phi <= eps or TWO_PI - phi <= eps:
        return 0.0
    if abs(phi - math.pi) <= eps:
        return math.pi
    return phi


@dataclass(frozen=True)
class ASDState:
    """Schmidt coefficients lambda_0..lambda_4 and the phase phi."""
    lambdas: Tuple[float, float, float, float, float]
    phi: float = 0.0
    tol: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False, compare=False)

    def __post_init__(self):
        lam = tuple(float(x) for x in self.lambdas)
        if len(lam) != 5:
            raise InvalidInputError(f"expected 5 Schmidt coefficients, got {len(lam)}")
        if not all(math.isfinite(x) for x in lam) or not math.isfinite(self.phi):
            raise InvalidInputError("Schmidt coefficients and phase must be finite")
        if any(x < 0.0 for x in lam):
            raise InvalidInputError(f"Schmidt coefficients must be nonnegative: {lam}")
        norm_sq = math.fsum(x * x for x in lam)
        if abs(norm_sq - 1.0) > self.tol.norm:
            raise NotNormalizedError(
                f"sum of squared coefficients = {norm_sq!r} deviates from 1 by more than {self.tol.norm}")
        phi = normalize_phase(self.phi, self.tol.phase)
        if lam[1] < self.tol.zero:
            phi = 0.0
        object.__setattr__(self, 'lambdas', lam)
        object.__setattr__(self, 'phi', phi)

    @classmethod
    def from_coefficients(cls, coefficients: Sequence[complex], tol=DEFAULT_TOLERANCES,
                          renormalize=False):
        """
        Build from the coefficient tuple (lambda_0, lambda_1 e^{i phi}, lambda_2, lambda_3, lambda_4).

        The second entry may be any complex number; it is stored in polar form.
        """
        z = [complex(x) for x in coefficients]
        if len(z) != 5:
            raise InvalidInputError(f"expected 5 coefficients, got {len(z)}")
        for i in (0, 2, 3, 4):
            if abs(z[i].imag) > tol.zero or z[i].real < -tol.zero:
                raise InvalidInputError(
                    f"coefficient lambda_{i} must be real and nonnegative, got {z[i]}")
        lam = [max(z[0].real, 0.0), abs(z[1]), max(z[2].real, 0.0),
               max(z[3].real, 0.0), max(z[4].real, 0.0)]
        if renormalize:
            norm = math.sqrt(math.fsum(x * x for x in lam))
            lam = [x / norm for x in lam]
        phi = math.atan2(z[1].imag, z[1].real) if abs(z[1]) > 0.0 else 0.0
        return cls(tuple(lam), phi, tol)

    @property
    def coefficients(self) -> Tuple[complex, ...]:
        """(lambda_0, lambda_1 e^{i phi}, lambda_2, lambda_3, lambda_4)."""
        lam = self.lambdas
        return (complex(lam[0]), lam[1] * complex(math.cos(self.phi), math.sin(self.phi)),
                complex(lam[2]), complex(lam[3]), complex(lam[4]))

    @property
    def delta(self) -> Optional[int]:
        """+1 for phi = 0, -1 for phi = pi, None for a genuinely complex phase."""
        if self.phi == 0.0:
            return 1
        if self.phi == math.pi:
            return -1
        return None

    def with_phase(self, phi: float) -> 'ASDState':
        return ASDState(self.lambdas, phi, self.tol)

    def __str__(self):
        lam = ', '.join(f"{x:.6g}" for x in self.lambdas)
        return f"ASD(lambda=({lam}), phi={self.phi:.6g})"


def reconstruct(asd: ASDState) -> PureState3Q:
    """Amplitudes of the ASD state; zero outside the five ASD positions."""
    amp = np.zeros(8, dtype=np.complex128)
    amp[list(ASD_POSITIONS)] = asd.coefficients
    return PureState3Q(amp, asd.tol)


def conjugate_asd(asd: ASDState) -> ASDState:
    """ASD of the complex-conjugate state (phi -> 2 pi - phi)."""
    return ASDState(asd.lambdas, -asd.phi, asd.tol)


def lbps_count(asd: ASDState) -> int:
    """Number of non-vanishing Schmidt coefficients."""
    return sum(1 for x in asd.lambdas if x > asd.tol.zero)


def is_ghz_class(asd: ASDState) -> bool:
    """GHZ SLOCC class membership: lambda_0 lambda_4 != 0."""
    return asd.lambdas[0] > asd.tol.zero and asd.lambdas[4] > asd.tol.zero


def _pencil_rows(tensor: np.ndarray) -> List[np.ndarray]:
    """Rows (x, y) making x T0 + y T1 singular, one per pencil root."""
    a, b, c = slice_pencil(tensor)
    scale = max(abs(a), abs(b), abs(c))
    if scale <= _PENCIL_FLOOR:
        return [np.array([1.0, 0.0], dtype=complex), np.array([0.0, 1.0], dtype=complex)]
    if abs(a) <= _ROOT_RELATIVE * scale:
        rows = [np.array([1.0, 0.0], dtype=complex)]
        if abs(b) > _ROOT_RELATIVE * scale:
            rows.append(np.array([-c, b], dtype=complex))
        return rows
    return [np.array([t, 1.0], dtype=complex) for t in np.roots([a, b, c])]


def _phase(z: complex) -> float:
    return math.atan2(z.imag, z.real) if abs(z) > _PENCIL_FLOOR else 0.0


def _decompose_along(state: PureState3Q, row: np.ndarray, tol: Tolerances):
    """ASD and witness triple for one choice of the qubit-A row."""
    row = row / np.linalg.norm(row)
    u_a = np.array([row, [-np.conj(row[1]), np.conj(row[0])]])
    psi = np.einsum('ia,abc->ibc', u_a, state.tensor)

    # rotate B and C so the (now rank-one) first slice is lambda_0 |00>
    u, _, vh = np.linalg.svd(psi[0])
    u_b = u.conj().T
    u_c = vh.conj()
    psi = np.einsum('jb,kc,abc->ajk', u_b, u_c, psi)

    z = [complex(psi[0, 0, 0]), complex(psi[1, 0, 0]), complex(psi[1, 0, 1]),
         complex(psi[1, 1, 0]), complex(psi[1, 1, 1])]
    th = [_phase(x) for x in z]
    # diagonal phases making |000>, |101>, |110>, |111> real positive
    b0 = a1 = 0.0
    c1 = -th[2]
    b1 = th[2] - th[4]
    c0 = th[4] - th[2] - th[3]
    a0 = -th[0] - c0
    phi = th[1] + c0

    triple = LocalUnitaryTriple(
        LocalUnitary(np.diag(np.exp(1j * np.array([a0, a1]))) @ u_a, tol),
        LocalUnitary(np.diag(np.exp(1j * np.array([b0, b1]))) @ u_b, tol),
        LocalUnitary(np.diag(np.exp(1j * np.array([c0, c1]))) @ u_c, tol),
    )
    lam = np.abs(np.array(z))
    lam = lam / math.sqrt(math.fsum(lam * lam))
    asd = ASDState(tuple(lam), phi, tol)
    residual = float(np.max(np.abs(apply_local_unitaries(state, triple).amp - reconstruct(asd).amp)))
    return asd, triple, residual


def asd_candidates(state: PureState3Q, tol: Optional[Tolerances] = None):
    """
    Decompose along every root of the slice pencil.

    Returns a list of (ASDState, LocalUnitaryTriple, residual) tuples, one per
    root; for GHZ-class states the two entries are the two ASDs of the LU class.
    """
    tol = tol or state.tol
    results = []
    for row in _pencil_rows(state.tensor):
        asd, triple, residual = _decompose_along(state, row, tol)
        logger.debug(f"pencil row {np.round(row, 6)} -> {asd}, residual {residual:.2e}")
        results.append((asd, triple, residual))
    return results


def compute_asd(state: PureState3Q, tol: Optional[Tolerances] = None) -> Tuple[ASDState, LocalUnitaryTriple]:
    """
    ASD of ``state`` with a witness triple t such that t|state> = reconstruct(asd).

    Among the pencil roots the one with the largest lambda_0 wins; ties keep the
    first root.
    """
    tol = tol or state.tol
    candidates = asd_candidates(state, tol)
    accepted = [cand for cand in candidates if cand[2] <= tol.asd_residual]
    if not accepted:
        residuals = [cand[2] for cand in candidates]
        logger.error(f"ASD failed on every pencil root, residuals {residuals}")
        raise NumericalFailureError(
            f"no pencil root reproduced the state (residuals {residuals})", residuals)

    best = accepted[0]
    for cand in accepted[1:]:
        if cand[0].lambdas[0] > best[0].lambdas[0] + _TIE:
            best = cand
    return best[0], best[1]
