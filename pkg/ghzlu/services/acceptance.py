"""
Self-test suite: the acceptance criteria as named, timed checks.
"""
import cmath
import math
import time
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from ghzlu.config import DEFAULT_TOLERANCES, Tolerances
from ghzlu.services.asd import ASDState, compute_asd, conjugate_asd, lbps_count, reconstruct
from ghzlu.services.classify import (
    ALL_LABELS,
    SPLIT_FAMILIES,
    classify,
    decide_lu_equivalence,
    is_asd_unique,
    lu_class_representatives,
    parse_label,
)
from ghzlu.services.invariants import (
    closed_form_positive,
    closed_form_split,
    compute_invariants,
    phase_shift_unitaries,
    rho_iota_coefficients,
    rho_iota_transform,
)
from ghzlu.services.oracle import brute_force_lu_equivalent, random_asd, sample_subfamily
from ghzlu.services.qstate import (
    HADAMARD,
    LocalUnitaryTriple,
    apply_local_unitaries,
    haar_random_triple,
)

logger = logging.getLogger(__name__)

SIZES = {
    'quick': {
        'involution': 200, 'lu_invariance': 40, 'atlas_seeds': 3, 'oracle_pairs': 3,
        'oracle_budget': 64, 'phase_shift': 20, 'closed_forms': 100,
    },
    'full': {
        'involution': 10000, 'lu_invariance': 1000, 'atlas_seeds': 100, 'oracle_pairs': 200,
        'oracle_budget': 64, 'phase_shift': 100, 'closed_forms': 1000,
    },
}

# wall-clock limits in seconds, set for the full sizes and applied in both modes
TIME_LIMITS = {
    'hadamard_pair': 1e-3,
    'involution': 10.0,
    'lu_invariance': 60.0,
    'oracle_agreement': 300.0,
}

PHI_ASD = ASDState((0.5, 0.0, 0.5, 0.5, 0.5), 0.0)
PHI_PRIME_COEFFICIENTS = (math.sqrt(2) / 2, -math.sqrt(2) / 4, math.sqrt(2) / 4,
                          math.sqrt(2) / 4, math.sqrt(2) / 4)
NCLU_ASD = ASDState.from_coefficients([x / math.sqrt(5) for x in (1, 1j, 1, 1, 1)])

_H = math.sqrt(0.5)
_Q = 1.0 / (2.0 * math.sqrt(2.0))
RHO_ONE_CORPUS = (
    ((_H, 0.0, 0.0, 0.0, _H), "P4'"),
    ((_H, 0.0, 0.5, 0.0, 0.5), "P3'"),
    ((_H, 0.0, 0.0, 0.5, 0.5), "P2'"),
    ((_H, 0.0, _Q, _Q, 0.5), "R2'"),
    ((_H, _Q, _Q, _Q, _Q), "P1'"),
)


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str
    elapsed: float

    def as_dict(self):
        return {'name': self.name, 'passed': self.passed, 'detail': self.detail,
                'elapsed': round(self.elapsed, 6)}


@dataclass
class AcceptanceSummary:
    mode: str
    results: List[CriterionResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failed(self) -> List[str]:
        return [r.name for r in self.results if not r.passed]

    def as_dict(self):
        return {'mode': self.mode, 'passed': self.passed,
                'results': [r.as_dict() for r in self.results]}


class CriterionFailed(AssertionError):
    pass


def _check(condition, message):
    if not condition:
        raise CriterionFailed(message)


def _max_diff(xs, ys) -> float:
    return max(abs(complex(x) - complex(y)) for x, y in zip(xs, ys))


def check_hadamard_pair(tol, sizes, seed):
    image = rho_iota_transform(ASDState(PHI_ASD.lambdas, PHI_ASD.phi, tol))
    diff = _max_diff(image.coefficients, PHI_PRIME_COEFFICIENTS)
    _check(diff <= 1e-12, f"rho-iota image of |phi> off by {diff:.3e}")
    h3 = LocalUnitaryTriple(HADAMARD, HADAMARD, HADAMARD)
    mapped = apply_local_unitaries(reconstruct(PHI_ASD), h3)
    gap = float(np.max(np.abs(mapped.amp - reconstruct(image).amp)))
    _check(gap <= 1e-12, f"H (x) H (x) H |phi> misses |phi'> by {gap:.3e}")
    return f"coefficient error {diff:.1e}, Hadamard error {gap:.1e}"


def check_rho_values(tol, sizes, seed):
    rho = compute_invariants(PHI_ASD).rho
    rho_prime = compute_invariants(rho_iota_transform(PHI_ASD)).rho
    _check(abs(rho - 1 / math.sqrt(2)) <= 1e-12, f"rho(|phi>) = {rho!r}")
    _check(abs(rho_prime - math.sqrt(2)) <= 1e-12, f"rho(|phi'>) = {rho_prime!r}")
    _check(abs(rho * rho_prime - 1.0) <= 1e-12, f"rho rho' = {rho * rho_prime!r}")
    return f"rho = {rho:.16g}, rho' = {rho_prime:.16g}"


def check_involution(tol, sizes, seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(sizes['involution']):
        a = random_asd(rng, tol)
        inv = compute_invariants(a)
        norm = math.sqrt(math.fsum(abs(z) ** 2 for z in rho_iota_coefficients(a)))
        _check(abs(norm - 1.0) <= 1e-10, f"transform of {a} has norm {norm!r}")
        image = rho_iota_transform(a)
        back = rho_iota_transform(image)
        diff = _max_diff(back.coefficients, a.coefficients)
        iota_gap = abs(compute_invariants(image).iota - inv.rho * a.lambdas[1] * cmath.exp(1j * a.phi))
        _check(diff <= 1e-10, f"double transform of {a} off by {diff:.3e}")
        _check(iota_gap <= 1e-10, f"iota' of {a} off by {iota_gap:.3e}")
        worst = max(worst, diff, iota_gap)
    return f"{sizes['involution']} states, worst error {worst:.1e}"


def check_lu_invariance(tol, sizes, seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(sizes['lu_invariance']):
        label = ALL_LABELS[i % len(ALL_LABELS)]
        a = sample_subfamily(label, rng, tol)
        moved = apply_local_unitaries(reconstruct(a), haar_random_triple(rng))
        b, _ = compute_asd(moved, tol)
        gap = abs(compute_invariants(b).ln_rho_abs - compute_invariants(a).ln_rho_abs)
        _check(gap <= 1e-8, f"|ln rho| of {a} moved by {gap:.3e} under local unitaries")
        relabel = classify(b).label
        _check(relabel == label, f"{a} relabelled {relabel} (expected {label})")
        worst = max(worst, gap)
    return f"{sizes['lu_invariance']} pairs, worst |ln rho| drift {worst:.1e}"


def check_rho_one_corpus(tol, sizes, seed):
    for lambdas, expected in RHO_ONE_CORPUS:
        asd = ASDState(lambdas, 0.0, tol)
        report = classify(asd)
        _check(abs(report.invariants.rho - 1.0) <= 1e-12,
               f"{asd}: rho = {report.invariants.rho!r}")
        unique, _ = is_asd_unique(asd)
        _check(unique, f"{asd}: ASD reported non-unique")
        _check(report.label == parse_label(expected),
               f"{asd}: classified {report.label}, expected {expected}")
    return ', '.join(expected for _, expected in RHO_ONE_CORPUS)


def _distinct(a: ASDState, b: ASDState) -> bool:
    return _max_diff(a.coefficients, b.coefficients) > 1e-6


def _check_class_members(label, a, cls, fresh):
    """Membership of a's LU class, checked by decision rather than by label."""
    # a second draw of the same subfamily lies in another class
    if all(_distinct(fresh, m) for m in (a, *cls.members)):
        _check(not decide_lu_equivalence(a, fresh).equivalent,
               f"{label}: independent samples {a} and {fresh} decided equivalent")

    if label.family in SPLIT_FAMILIES:
        _check(cls.size == 'infinite', f"{label}: class size {cls.size}")
        turned = a.with_phase(a.phi + 1.0)
        _check(decide_lu_equivalence(a, turned).equivalent,
               f"{label}: {a} not equivalent to its phase-shifted copy")
        return

    others = [m for m in cls.members if _distinct(m, a)]
    _check(cls.size == str(1 + len(others)),
           f"{label}: class size {cls.size} but {1 + len(others)} distinct members")
    for other in others:
        _check(decide_lu_equivalence(a, other).equivalent,
               f"{label}: {a} not equivalent to its class partner {other}")

    if label.prime and label.family == 'C4':
        _check(len(others) == 1 and not _distinct(others[0], conjugate_asd(a)),
               f"C4' class of {a} is not {{a, a*}}")
        nudged = a.with_phase(a.phi + 0.1)
        _check(not decide_lu_equivalence(a, nudged).equivalent,
               f"C4' state {a} equivalent to its phase-nudged copy {nudged}")
    elif label.prime:
        _check(not others, f"{label}: prime class of {a} has partners {others}")
    else:
        _check(len(others) == 1, f"{label}: {a} has no distinct class partner")
        counts = sorted(lbps_count(m) for m in cls.members)
        if str(label) == "R2''":
            _check(counts == [4, 5], f"R2'' pair has LBPS counts {counts}")
        else:
            _check(counts[0] == counts[1], f"{label} pair has LBPS counts {counts}")


def check_subfamily_atlas(tol, sizes, seed):
    total = 0
    for index, label in enumerate(ALL_LABELS):
        for s in range(sizes['atlas_seeds']):
            a = sample_subfamily(label, [seed, index, s], tol)
            got = classify(a).label
            _check(got == label, f"sample {a} for {label} classified {got}")
            fresh = sample_subfamily(label, [seed, index, s, 1], tol)
            _check_class_members(label, a, lu_class_representatives(a), fresh)
            total += 1
    return f"{total} samples across {len(ALL_LABELS)} subfamilies"


def _partner(a: ASDState, rng):
    """An LU-equivalent ASD of ``a`` different from ``a`` where one exists."""
    label = classify(a).label
    if label.family in SPLIT_FAMILIES:
        return a.with_phase(rng.uniform(0.0, 2.0 * math.pi))
    if label.prime and label.family == 'C4':
        return conjugate_asd(a)
    if label.prime:
        return a
    return rho_iota_transform(a)


def check_oracle_agreement(tol, sizes, seed):
    rng = np.random.default_rng(seed)
    budget = sizes['oracle_budget']
    pairs = []
    for i in range(sizes['oracle_pairs']):
        label = ALL_LABELS[int(rng.integers(len(ALL_LABELS)))]
        a = sample_subfamily(label, rng, tol)
        if i % 2 == 0:
            b = _partner(a, rng)
        else:
            b = sample_subfamily(ALL_LABELS[int(rng.integers(len(ALL_LABELS)))], rng, tol)
        pairs.append((a, b))
    pairs.append((NCLU_ASD, conjugate_asd(NCLU_ASD)))

    for i, (a, b) in enumerate(pairs):
        decision = decide_lu_equivalence(a, b)
        state_b = apply_local_unitaries(reconstruct(b), haar_random_triple(rng))
        verdict = brute_force_lu_equivalent(reconstruct(a), state_b, budget,
                                            int(rng.integers(2 ** 31)), tol)
        if decision.equivalent:
            _check(verdict.best_fidelity >= 1.0 - tol.oracle,
                   f"pair {i} ({a}, {b}) analytic equivalent, oracle fidelity {verdict.best_fidelity!r}")
            check = apply_local_unitaries(reconstruct(a), verdict.witness)
            gap = float(np.max(np.abs(check.amp - state_b.amp)))
            _check(gap <= 1e-6, f"pair {i}: oracle witness misses by {gap:.3e}")
        else:
            _check(verdict.best_fidelity < 1.0 - tol.oracle_reject,
                   f"pair {i} ({a}, {b}) analytic inequivalent ({decision.reason}), "
                   f"oracle fidelity {verdict.best_fidelity!r}")
    return f"{len(pairs)} pairs agree (including the NCLU conjugate pair)"


def check_measure(tol, sizes, seed):
    ghz = compute_invariants(ASDState((_H, 0.0, 0.0, 0.0, _H), 0.0, tol)).measure
    _check(ghz == 1.0, f"GHZ measure {ghz!r}")
    phi = compute_invariants(PHI_ASD).measure
    expected = 1.0 / (1.0 + math.log(math.sqrt(2.0)))
    _check(abs(phi - expected) <= 1e-12, f"measure(|phi>) = {phi!r}, expected {expected!r}")
    return f"GHZ 1, |phi> {phi:.15f}"


def check_phase_shift(tol, sizes, seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for case in ('C1', 'C2'):
        for _ in range(sizes['phase_shift']):
            a = sample_subfamily(parse_label(case + "''"), rng, tol)
            target = rng.uniform(0.0, 2.0 * math.pi)
            moved = apply_local_unitaries(reconstruct(a), phase_shift_unitaries(a, target))
            err = float(np.max(np.abs(moved.amp - reconstruct(a.with_phase(target)).amp)))
            _check(err < 1e-10, f"phase retarget of {a} to {target} off by {err:.3e}")
            worst = max(worst, err)
    return f"{2 * sizes['phase_shift']} retargets, worst error {worst:.1e}"


def check_closed_forms(tol, sizes, seed):
    rng = np.random.default_rng(seed)
    positive = [label for label in ALL_LABELS if label.family.startswith('P')]
    split = [label for label in ALL_LABELS if label.family in SPLIT_FAMILIES]
    worst = 0.0
    for i in range(sizes['closed_forms']):
        for labels, closed_form in ((positive, closed_form_positive), (split, closed_form_split)):
            a = sample_subfamily(labels[i % len(labels)], rng, tol)
            inv = compute_invariants(a)
            rho, iota = closed_form(a)
            err = max(abs(rho - inv.rho), abs(iota - inv.iota))
            _check(err <= 1e-10, f"closed form for {a} off by {err:.3e}")
            worst = max(worst, err)
    return f"{2 * sizes['closed_forms']} states, worst error {worst:.1e}"


CRITERIA: Dict[str, Callable] = {
    'hadamard_pair': check_hadamard_pair,
    'rho_values': check_rho_values,
    'involution': check_involution,
    'lu_invariance': check_lu_invariance,
    'rho_one_corpus': check_rho_one_corpus,
    'subfamily_atlas': check_subfamily_atlas,
    'oracle_agreement': check_oracle_agreement,
    'measure': check_measure,
    'phase_shift': check_phase_shift,
    'closed_forms': check_closed_forms,
}


def run_acceptance(mode: str = 'quick', tolerances: Optional[Tolerances] = None,
                   seed: int = 0, only=None) -> AcceptanceSummary:
    """
    Run the acceptance criteria in ``mode`` ('quick' or 'full').

    Each criterion runs in isolation; any exception it raises is recorded as a
    failure of that criterion only. Criteria listed in TIME_LIMITS also fail
    when they overrun their limit.
    """
    if mode not in SIZES:
        raise ValueError(f"unknown self-test mode {mode!r}")
    tol = tolerances or DEFAULT_TOLERANCES
    sizes = SIZES[mode]
    summary = AcceptanceSummary(mode)
    for name, check in CRITERIA.items():
        if only and name not in only:
            continue
        start = time.perf_counter()
        try:
            detail, passed = check(tol, sizes, seed), True
        except Exception as e:
            detail, passed = f"{type(e).__name__}: {e}", False
        elapsed = time.perf_counter() - start
        limit = TIME_LIMITS.get(name)
        if passed and limit is not None and elapsed > limit:
            detail, passed = f"took {elapsed:.3f}s, over the {limit:g}s limit ({detail})", False
        if passed:
            logger.info(f"criterion {name} passed in {elapsed:.3f}s: {detail}")
        else:
            logger.error(f"criterion {name} failed: {detail}")
        summary.results.append(CriterionResult(name, passed, detail, elapsed))
    return summary
