"""
Brute-force LU-equivalence search and per-subfamily random generators.
"""
import cmath
import math
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq, minimize

from ghzlu.config import Config, DEFAULT_TOLERANCES, Tolerances
from ghzlu.exceptions import InvalidInputError, NumericalFailureError
from ghzlu.services.asd import ASDState
from ghzlu.services.classify import FamilyLabel, classify
from ghzlu.services.invariants import compute_invariants, rho_iota_transform
from ghzlu.services.qstate import (
    LocalUnitary,
    LocalUnitaryTriple,
    PureState3Q,
    SeedLike,
    as_generator,
)

logger = logging.getLogger(__name__)

# angles per local factor: global phase, mixing angle, two relative phases
ANGLES_PER_FACTOR = 4
N_ANGLES = 3 * ANGLES_PER_FACTOR

_SEARCH_OPTIONS = {'maxiter': 400, 'maxfun': 1000, 'ftol': 1e-12, 'gtol': 1e-9}
_POLISH_OPTIONS = {'gtol': 1e-10, 'maxiter': 200}
# local optima below this infidelity get a BFGS polish
_POLISH_BELOW = 1e-3


def unitary_from_angles(alpha, theta, mu, nu) -> np.ndarray:
    """e^{i alpha} [[cos t, -e^{i mu} sin t], [e^{i nu} sin t, e^{i(mu+nu)} cos t]]."""
    c, s = math.cos(theta), math.sin(theta)
    return np.exp(1j * alpha) * np.array([
        [c, -np.exp(1j * mu) * s],
        [np.exp(1j * nu) * s, np.exp(1j * (mu + nu)) * c],
    ])


def _factor_with_derivatives(alpha, theta, mu, nu):
    """The factor and its partial derivatives in (alpha, theta, mu, nu)."""
    c, s = math.cos(theta), math.sin(theta)
    g, em, en, emn = (cmath.exp(1j * alpha), cmath.exp(1j * mu),
                      cmath.exp(1j * nu), cmath.exp(1j * (mu + nu)))
    u = g * np.array([[c, -em * s], [en * s, emn * c]])
    d_theta = g * np.array([[-s, -em * c], [en * c, -emn * s]])
    d_mu = g * np.array([[0.0, -1j * em * s], [0.0, 1j * emn * c]])
    d_nu = g * np.array([[0.0, 0.0], [1j * en * s, 1j * emn * c]])
    return u, (1j * u, d_theta, d_mu, d_nu)


def _factors(x: np.ndarray):
    return [unitary_from_angles(*x[i:i + ANGLES_PER_FACTOR])
            for i in range(0, N_ANGLES, ANGLES_PER_FACTOR)]


class TransitionObjective:
    """
    Infidelity 1 - |<b| U_A (x) U_B (x) U_C |a>|^2 over the twelve angles.

    The overlap is contracted factor by factor on the 2x2x2 tensors. Each
    call also returns the exact gradient: leaving one factor out of the
    contraction gives its environment E, the overlap is sum(U * E), and a
    derivative of U contracts with the same E.
    """

    def __init__(self, a: PureState3Q, b: PureState3Q):
        self.ta = a.tensor
        self.tb = b.tensor.conj()
        self.calls = 0

    def overlap(self, x: np.ndarray) -> complex:
        ua, ub, uc = _factors(x)
        return complex(np.einsum('ijk,ia,jb,kc,abc->', self.tb, ua, ub, uc, self.ta))

    def __call__(self, x: np.ndarray) -> Tuple[float, np.ndarray]:
        self.calls += 1
        (ua, da), (ub, db), (uc, dc) = [_factor_with_derivatives(*x[i:i + ANGLES_PER_FACTOR])
                                        for i in range(0, N_ANGLES, ANGLES_PER_FACTOR)]
        env_a = np.einsum('ijk,jb,kc,abc->ia', self.tb, ub, uc, self.ta)
        env_b = np.einsum('ijk,ia,kc,abc->jb', self.tb, ua, uc, self.ta)
        env_c = np.einsum('ijk,ia,jb,abc->kc', self.tb, ua, ub, self.ta)
        o = np.sum(ua * env_a)
        grad = np.empty(N_ANGLES)
        for offset, derivatives, env in ((0, da, env_a), (4, db, env_b), (8, dc, env_c)):
            for k, d in enumerate(derivatives):
                grad[offset + k] = -2.0 * (o.conjugate() * np.sum(d * env)).real
        return 1.0 - abs(o) ** 2, grad


@dataclass(frozen=True)
class OracleVerdict:
    """Outcome of the search. ``equivalent`` is a proof; its negation is evidence only."""
    equivalent: bool
    best_fidelity: float
    witness: LocalUnitaryTriple
    restarts_used: int

    def as_dict(self):
        return {
            'equivalent': self.equivalent,
            'best_fidelity': self.best_fidelity,
            'restarts_used': self.restarts_used,
            'witness': self.witness.as_lists(),
        }


def _local_search(objective: TransitionObjective, x0: np.ndarray):
    f0, _ = objective(x0)
    if f0 <= 1e-15:
        return x0, f0
    res = minimize(objective, x0, jac=True, method='L-BFGS-B', options=_SEARCH_OPTIONS)
    x, f = res.x, float(res.fun)
    if f <= _POLISH_BELOW:
        polished = minimize(objective, x, jac=True, method='BFGS', options=_POLISH_OPTIONS)
        if polished.fun < f:
            x, f = polished.x, float(polished.fun)
    return x, f


def brute_force_lu_equivalent(a: PureState3Q, b: PureState3Q, budget: Optional[int] = None,
                              rng_seed: SeedLike = None,
                              tol: Optional[Tolerances] = None) -> OracleVerdict:
    """
    Maximize |<b| U_A (x) U_B (x) U_C |a>|^2 by multi-start local search.

    Restart 0 starts from the identity, the others from uniformly random
    angles drawn from independent child streams of ``rng_seed``. Each restart
    runs L-BFGS-B on the analytic gradient. The search stops at the first
    restart reaching 1 - tol.oracle. The returned witness carries the global
    phase that maps ``a`` onto ``b``.
    """
    tol = tol or a.tol
    budget = Config.ORACLE_BUDGET if budget is None else int(budget)
    if budget < 1:
        raise InvalidInputError(f"oracle budget must be at least 1, got {budget}")

    objective = TransitionObjective(a, b)
    streams = np.random.SeedSequence(
        rng_seed if isinstance(rng_seed, int) else as_generator(rng_seed).integers(2 ** 63)
    ).spawn(budget)
    best_x, best_f = np.zeros(N_ANGLES), -1.0
    used = 0
    for restart, stream in enumerate(streams):
        used = restart + 1
        if restart == 0:
            x0 = np.zeros(N_ANGLES)
        else:
            x0 = np.random.default_rng(stream).uniform(0.0, 2.0 * math.pi, N_ANGLES)

        x, f = _local_search(objective, x0)
        fidelity = 1.0 - f
        logger.debug(f"oracle restart {restart}: fidelity {fidelity:.15f}")
        if fidelity > best_f:
            best_x, best_f = x, fidelity
        if best_f >= 1.0 - tol.oracle:
            break

    ua, ub, uc = _factors(best_x)
    phase = objective.overlap(best_x)
    if abs(phase) > 0.0:
        ua = ua * np.conj(phase) / abs(phase)
    witness = LocalUnitaryTriple(LocalUnitary(ua, tol), LocalUnitary(ub, tol), LocalUnitary(uc, tol))
    best_f = min(max(best_f, 0.0), 1.0)
    equivalent = best_f >= 1.0 - tol.oracle
    logger.info(f"oracle verdict equivalent={equivalent} fidelity={best_f:.15f} "
                f"after {used} restarts, {objective.calls} evaluations")
    return OracleVerdict(equivalent, best_f, witness, used)


# ---- subfamily generators ----

_MAX_DRAWS = 2000
# sampled states keep every tested condition at least this far from its boundary
_MARGIN = 1e-3
_RHO_MARGIN = 0.05
_LO, _HI = 0.3, 1.0
_C4_PHASE_GAP = 0.3


def _unit(values):
    v = np.asarray(values, dtype=float)
    return v / np.linalg.norm(v)


def _uniform(rng, n):
    return rng.uniform(_LO, _HI, n)


def random_asd(rng_seed: SeedLike = None, tol: Tolerances = DEFAULT_TOLERANCES) -> ASDState:
    """Generic GHZ-class ASD: five coefficients bounded away from zero, uniform phase."""
    rng = as_generator(rng_seed)
    lam = _unit(rng.uniform(0.05, 1.0, 5))
    return ASDState(tuple(lam), rng.uniform(0.0, 2.0 * math.pi), tol)


def _c4_phase(rng) -> float:
    phi = rng.uniform(_C4_PHASE_GAP, math.pi - _C4_PHASE_GAP)
    return phi + math.pi if rng.random() < 0.5 else phi


def _pair_split(rng, total):
    """Two positive numbers whose squares add up to ``total``."""
    angle = rng.uniform(0.2, math.pi / 2 - 0.2)
    r = math.sqrt(total)
    return r * math.cos(angle), r * math.sin(angle)


def _positive(rng, family, prime, tol):
    h = math.sqrt(0.5)
    if family == 'P4':
        if prime:
            return ASDState((h, 0.0, 0.0, 0.0, h), 0.0, tol)
        x = rng.uniform(0.2, 0.98)
        return ASDState((x, 0.0, 0.0, 0.0, math.sqrt(1.0 - x * x)), 0.0, tol)
    if family in ('P2', 'P3'):
        slot = 3 if family == 'P2' else 2
        if prime:
            head = h
            mid, tail = _pair_split(rng, 0.5)
        else:
            head, mid, tail = _unit(_uniform(rng, 3))
        lam = [head, 0.0, 0.0, 0.0, tail]
        lam[slot] = mid
        return ASDState(tuple(lam), 0.0, tol)
    # P1: lambda_1 lambda_4 = lambda_2 lambda_3
    v2, v3, v4 = _uniform(rng, 3)
    v1 = v2 * v3 / v4
    if prime:
        t = h / math.sqrt(v1 * v1 + v2 * v2 + v3 * v3 + v4 * v4)
        return ASDState((h, t * v1, t * v2, t * v3, t * v4), 0.0, tol)
    lam = _unit([rng.uniform(_LO, _HI), v1, v2, v3, v4])
    return ASDState(tuple(lam), 0.0, tol)


def _real(rng, family, prime, tol):
    h = math.sqrt(0.5)
    if family == 'R2':
        if prime:
            l2, l3, l4 = _unit(_uniform(rng, 3)) * h
            return ASDState((h, 0.0, l2, l3, l4), 0.0, tol)
        l0, l2, l3, l4 = _unit(_uniform(rng, 4))
        four = ASDState((l0, 0.0, l2, l3, l4), 0.0, tol)
        if abs(compute_invariants(four).ln_rho_abs) < _RHO_MARGIN:
            return None
        # the class pairs a 4-LBPS state with a 5-LBPS one; either may be drawn
        return rho_iota_transform(four) if rng.random() < 0.5 else four

    delta = 1 if rng.random() < 0.5 else -1
    phi = 0.0 if delta == 1 else math.pi
    v1, v2, v3, v4 = _uniform(rng, 4)
    if prime:
        k = v2 * v2 + v3 * v3 + v4 * v4 + delta * v1 * v2 * v3 / v4
        if k <= 0.1:
            return None
        t = math.sqrt(1.0 / (2.0 * k))
        head = 1.0 - t * t * (v1 * v1 + v2 * v2 + v3 * v3 + v4 * v4)
        if head <= 0.01:
            return None
        return ASDState((math.sqrt(head), t * v1, t * v2, t * v3, t * v4), phi, tol)
    lam = _unit([rng.uniform(_LO, _HI), v1, v2, v3, v4])
    return ASDState(tuple(lam), phi, tol)


def _split(rng, family, prime, tol):
    h = math.sqrt(0.5)
    phi = rng.uniform(0.0, 2.0 * math.pi)
    if prime:
        l0, l1 = _pair_split(rng, 0.5)
        if family == 'C3':
            rest = {4: h}
        else:
            other, l4 = _pair_split(rng, 0.5)
            rest = {3 if family == 'C1' else 2: other, 4: l4}
    else:
        if family == 'C3':
            l0, l1, l4 = _unit(_uniform(rng, 3))
            rest = {4: l4}
        else:
            l0, l1, other, l4 = _unit(_uniform(rng, 4))
            rest = {3 if family == 'C1' else 2: other, 4: l4}
    lam = [l0, l1, 0.0, 0.0, 0.0]
    for index, value in rest.items():
        lam[index] = value
    return ASDState(tuple(lam), phi, tol)


def _c4(rng, family, prime, tol):
    phi = _c4_phase(rng)
    v = _unit(_uniform(rng, 4))
    if not prime:
        lam = _unit([rng.uniform(_LO, _HI), *v])
        return ASDState(tuple(lam), phi, tol)

    def ln_rho(x):
        s = math.sqrt(1.0 - x * x)
        return math.log(compute_invariants(ASDState((x, *(s * v)), phi, tol)).rho)

    lo, hi = 0.05, 0.999
    if ln_rho(lo) >= 0.0 or ln_rho(hi) <= 0.0:
        return None
    x = brentq(ln_rho, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    s = math.sqrt(1.0 - x * x)
    return ASDState((x, *(s * v)), phi, tol)


_BUILDERS = {'P': _positive, 'R': _real, 'C': _split}


def _acceptable(asd: ASDState, label: FamilyLabel) -> bool:
    report = classify(asd)
    if report.label != label or report.fragile_conditions:
        return False
    if not label.prime and report.invariants.ln_rho_abs < _RHO_MARGIN:
        return False
    if not label.family.startswith('P') and abs(report.invariants.gamma) < _MARGIN:
        return False
    if label.family == 'R1' and abs(report.invariants.iota) < _MARGIN:
        return False
    return True


def sample_subfamily(label: FamilyLabel, rng_seed: SeedLike = None,
                     tol: Tolerances = DEFAULT_TOLERANCES) -> ASDState:
    """
    Random ASD that classifies back to ``label``, deterministic per seed.

    Prime subfamilies are built on their rho = 1 surface: lambda_0 = 1/sqrt(2)
    for P and R2, the real closed form for R1, lambda_0^2 + lambda_1^2 = 1/2 for
    C1-C3 and a root solve in lambda_0 for C4.
    """
    rng = as_generator(rng_seed)
    family, prime = label.family, label.prime
    build = _c4 if family == 'C4' else _BUILDERS[family[0]]
    for draw in range(_MAX_DRAWS):
        asd = build(rng, family, prime, tol)
        if asd is not None and _acceptable(asd, label):
            logger.debug(f"sampled {label} after {draw + 1} draws: {asd}")
            return asd
    logger.error(f"could not sample {label} in {_MAX_DRAWS} draws")
    raise NumericalFailureError(f"no admissible {label} sample in {_MAX_DRAWS} draws")
