"""
Three-qubit pure states, local unitaries, Haar sampling and SLOCC-class checks.

Amplitudes are ordered |000>, |001>, ..., |111> with qubit A the most
significant bit, so ``amp.reshape(2, 2, 2)[a, b, c]`` is the coefficient of
|abc>.
"""
import math
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np
import scipy.linalg

from ghzlu.config import DEFAULT_TOLERANCES, Tolerances
from ghzlu.exceptions import (
    InvalidInputError,
    NotNormalizedError,
    NotUnitaryError,
    NumericalFailureError,
)

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.Generator, np.random.SeedSequence, None]

SLOCC_CLASSES = ('GHZ', 'W', 'A-BC', 'B-AC', 'C-AB', 'A-B-C')


def _frozen(values, dtype=np.complex128):
    arr = np.array(values, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


def as_generator(rng_seed: SeedLike) -> np.random.Generator:
    """Normalize a seed, seed sequence or generator into a Generator."""
    if isinstance(rng_seed, np.random.Generator):
        return rng_seed
    return np.random.default_rng(rng_seed)


@dataclass(frozen=True, eq=False)
class PureState3Q:
    """Normalized three-qubit pure state in the computational basis."""
    amp: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False)

    def __post_init__(self):
        amp = np.asarray(self.amp, dtype=np.complex128).reshape(-1)
        if amp.shape != (8,):
            raise InvalidInputError(f"expected 8 amplitudes, got {amp.size}")
        if not np.all(np.isfinite(amp)):
            raise InvalidInputError("amplitudes must be finite")
        norm_sq = float(np.vdot(amp, amp).real)
        if abs(norm_sq - 1.0) > self.tol.norm:
            raise NotNormalizedError(
                f"state norm^2 = {norm_sq!r} deviates from 1 by more than {self.tol.norm}")
        object.__setattr__(self, 'amp', _frozen(amp))

    @classmethod
    def from_amplitudes(cls, values, renormalize=False, tol=DEFAULT_TOLERANCES):
        """Build a state, optionally rescaling to unit norm first."""
        amp = np.asarray(values, dtype=np.complex128).reshape(-1)
        if renormalize:
            norm = np.linalg.norm(amp)
            if norm == 0.0:
                raise NotNormalizedError("cannot normalize the zero vector")
            amp = amp / norm
        return cls(amp, tol)

    @property
    def tensor(self) -> np.ndarray:
        return self.amp.reshape(2, 2, 2)

    def allclose(self, other: 'PureState3Q', atol: float) -> bool:
        return bool(np.max(np.abs(self.amp - other.amp)) <= atol)

    def __eq__(self, other):
        if not isinstance(other, PureState3Q):
            return NotImplemented
        return bool(np.array_equal(self.amp, other.amp))

    def __hash__(self):
        return hash(self.amp.tobytes())


@dataclass(frozen=True, eq=False)
class LocalUnitary:
    """A 2x2 unitary acting on one qubit."""
    u: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False)

    def __post_init__(self):
        u = np.asarray(self.u, dtype=np.complex128)
        if u.shape != (2, 2):
            raise InvalidInputError(f"local factor must be 2x2, got shape {u.shape}")
        deviation = float(np.max(np.abs(u.conj().T @ u - np.eye(2))))
        if not np.isfinite(deviation) or deviation > self.tol.unitary:
            raise NotUnitaryError(
                f"u^dagger u deviates from identity by {deviation:.3e} (> {self.tol.unitary})")
        object.__setattr__(self, 'u', _frozen(u))

    @classmethod
    def identity(cls):
        return cls(np.eye(2))

    @classmethod
    def diagonal(cls, phase0: float, phase1: float):
        """diag(e^{i phase0}, e^{i phase1})."""
        return cls(np.diag(np.exp(1j * np.array([phase0, phase1]))))

    def __matmul__(self, other: 'LocalUnitary') -> 'LocalUnitary':
        return LocalUnitary(self.u @ other.u, self.tol)


@dataclass(frozen=True)
class LocalUnitaryTriple:
    """U_A (x) U_B (x) U_C acting on qubits A, B, C."""
    a: LocalUnitary
    b: LocalUnitary
    c: LocalUnitary

    @classmethod
    def identity(cls):
        eye = LocalUnitary.identity()
        return cls(eye, eye, eye)

    def then(self, other: 'LocalUnitaryTriple') -> 'LocalUnitaryTriple':
        """Triple equivalent to applying ``self`` first and ``other`` second."""
        return LocalUnitaryTriple(other.a @ self.a, other.b @ self.b, other.c @ self.c)

    def as_lists(self):
        """Nested [re, im] pairs for serialization."""
        return {name: [[[z.real, z.imag] for z in row] for row in factor.u]
                for name, factor in (('a', self.a), ('b', self.b), ('c', self.c))}


def apply_local_unitaries(state: PureState3Q, t: LocalUnitaryTriple) -> PureState3Q:
    """Return (a (x) b (x) c)|state>."""
    out = np.einsum('ia,jb,kc,abc->ijk', t.a.u, t.b.u, t.c.u, state.tensor)
    return PureState3Q(out.reshape(8), state.tol)


def overlap(a: PureState3Q, b: PureState3Q) -> complex:
    """<a|b>."""
    return complex(np.vdot(a.amp, b.amp))


def fidelity(a: PureState3Q, b: PureState3Q) -> float:
    """|<a|b>|^2."""
    return abs(overlap(a, b)) ** 2


def conjugate(state: PureState3Q) -> PureState3Q:
    """Entrywise complex conjugate |psi*>."""
    return PureState3Q(state.amp.conj(), state.tol)


def haar_random_local_unitary(rng_seed: SeedLike = None) -> LocalUnitary:
    """Haar-distributed 2x2 unitary via phase-fixed QR of a complex Ginibre matrix."""
    rng = as_generator(rng_seed)
    z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / np.sqrt(2.0)
    q, r = scipy.linalg.qr(z)
    d = np.diag(r)
    return LocalUnitary(q * (d / np.abs(d)))


def haar_random_triple(rng_seed: SeedLike = None) -> LocalUnitaryTriple:
    rng = as_generator(rng_seed)
    return LocalUnitaryTriple(haar_random_local_unitary(rng),
                              haar_random_local_unitary(rng),
                              haar_random_local_unitary(rng))


def random_state(rng_seed: SeedLike = None) -> PureState3Q:
    """Haar-random pure state of three qubits."""
    rng = as_generator(rng_seed)
    amp = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    return PureState3Q.from_amplitudes(amp, renormalize=True)


def slice_pencil(tensor: np.ndarray) -> Tuple[complex, complex, complex]:
    """
    Coefficients (a, b, c) with det(x T0 + y T1) = a x^2 + b x y + c y^2,
    where T0, T1 are the slices of the amplitude tensor at qubit A = 0, 1.
    """
    t0, t1 = tensor[0], tensor[1]
    a = t0[0, 0] * t0[1, 1] - t0[0, 1] * t0[1, 0]
    c = t1[0, 0] * t1[1, 1] - t1[0, 1] * t1[1, 0]
    b = (t0[0, 0] * t1[1, 1] + t1[0, 0] * t0[1, 1]
         - t0[0, 1] * t1[1, 0] - t1[0, 1] * t0[1, 0])
    return complex(a), complex(b), complex(c)


def hyperdeterminant(state: PureState3Q) -> complex:
    """Cayley hyperdeterminant, the discriminant of the slice pencil."""
    a, b, c = slice_pencil(state.tensor)
    return b * b - 4.0 * a * c


def three_tangle(state: PureState3Q) -> float:
    """tau = 4 |Det|; invariant under local unitaries."""
    return 4.0 * abs(hyperdeterminant(state))


def local_schmidt_minima(state: PureState3Q) -> Tuple[float, float, float]:
    """
    Smaller singular value of the 2x4 unfolding at qubits A, B and C.

    Zero iff that qubit is unentangled from the other two. Being a singular
    value of the amplitudes, it lives on the same scale as the ASD coefficients.
    """
    psi = state.tensor
    unfoldings = (psi.reshape(2, 4),
                  psi.transpose(1, 0, 2).reshape(2, 4),
                  psi.transpose(2, 0, 1).reshape(2, 4))
    return tuple(float(np.linalg.svd(m, compute_uv=False)[-1]) for m in unfoldings)


def ghz_weight(state: PureState3Q) -> float:
    """sqrt(tau) / 2, which equals lambda_0 lambda_4 for any ASD of the state."""
    return 0.5 * math.sqrt(three_tangle(state))


def slocc_class(state: PureState3Q, tol: Optional[Tolerances] = None) -> str:
    """
    Name of the SLOCC class: GHZ, W, A-BC, B-AC, C-AB or A-B-C.

    GHZ membership is decided on the state's ASD, the same test ``classify``
    applies. If the decomposition fails numerically the tangle decides.
    """
    from ghzlu.services.asd import compute_asd, is_ghz_class

    tol = tol or state.tol
    try:
        asd, _ = compute_asd(state, tol)
        ghz = is_ghz_class(asd)
    except NumericalFailureError:
        logger.warning("ASD failed while naming the SLOCC class, falling back to the tangle")
        ghz = ghz_weight(state) > tol.tangle
    if ghz:
        return 'GHZ'
    mixed = [m > tol.zero for m in local_schmidt_minima(state)]
    logger.debug(f"qubit entangled with the rest A/B/C: {mixed}")
    if all(mixed):
        return 'W'
    if not any(mixed):
        return 'A-B-C'
    if not mixed[0]:
        return 'A-BC'
    if not mixed[1]:
        return 'B-AC'
    return 'C-AB'


GHZ_STATE = PureState3Q(np.array([1, 0, 0, 0, 0, 0, 0, 1]) / np.sqrt(2.0))
W_STATE = PureState3Q(np.array([0, 1, 1, 0, 1, 0, 0, 0]) / np.sqrt(3.0))
HADAMARD = LocalUnitary(np.array([[1, 1], [1, -1]]) / np.sqrt(2.0))
