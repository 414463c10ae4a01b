"""
LU classification of the GHZ SLOCC class into ten families and twenty
subfamilies, analytic LU-equivalence decisions, ASD uniqueness and the
canonical ASD.
"""
import math
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from ghzlu.exceptions import ConsistencyError, UnknownLabelError
from ghzlu.services.asd import ASDState, conjugate_asd, lbps_count
from ghzlu.services.invariants import (
    GhzInvariants,
    compute_invariants,
    phase_shift_unitaries,
    rho_iota_transform,
    uniqueness_residual,
)
from ghzlu.services.qstate import LocalUnitaryTriple

logger = logging.getLogger(__name__)

FAMILIES = ('P1', 'P2', 'P3', 'P4', 'R1', 'R2', 'C1', 'C2', 'C3', 'C4')
SUBFAMILIES = ('prime', 'double_prime')
SPLIT_FAMILIES = ('C1', 'C2', 'C3')

MODALITY_STRICT = 'strict'
MODALITY_UP_TO_PHASE = 'up_to_phase'
MODALITY_UP_TO_CONJUGATE = 'up_to_conjugate'

# a margin within this factor of its threshold (either side) marks the label fragile
_FRAGILE_FACTOR = 1e3


@dataclass(frozen=True)
class FamilyLabel:
    family: str
    subfamily: str

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnknownLabelError(f"unknown family {self.family!r}")
        if self.subfamily not in SUBFAMILIES:
            raise UnknownLabelError(f"unknown subfamily {self.subfamily!r}")

    @property
    def prime(self) -> bool:
        return self.subfamily == 'prime'

    def __str__(self):
        return self.family + ("'" if self.prime else "''")


ALL_LABELS = tuple(FamilyLabel(f, s) for f in FAMILIES for s in SUBFAMILIES)

_PRIME_MARKS = {
    "'": 'prime', '′': 'prime', '-prime': 'prime', '_prime': 'prime',
    "''": 'double_prime', '″': 'double_prime', '"': 'double_prime',
    '′′': 'double_prime', '-double_prime': 'double_prime',
    '_double_prime': 'double_prime',
}


def parse_label(text: str) -> FamilyLabel:
    """Parse ``P1'``, ``C4''``, ``R2″``, ``P1-prime`` and similar spellings."""
    raw = (text or '').strip()
    family, mark = raw[:2].upper(), raw[2:]
    if family not in FAMILIES or mark not in _PRIME_MARKS:
        raise UnknownLabelError(
            f"unknown subfamily label {text!r}; expected e.g. P1' or C4''")
    return FamilyLabel(family, _PRIME_MARKS[mark])


@dataclass(frozen=True)
class ClassificationReport:
    label: FamilyLabel
    invariants: GhzInvariants
    lbps: int
    margins: Dict[str, float]
    unique_asd: bool
    uniqueness_modality: str
    fragile_conditions: Tuple[str, ...] = ()

    def as_dict(self):
        return {
            'family': self.label.family,
            'subfamily': self.label.subfamily,
            'label': str(self.label),
            'lbps': self.lbps,
            'unique_asd': self.unique_asd,
            'uniqueness_modality': self.uniqueness_modality,
            'fragile_conditions': list(self.fragile_conditions),
            'margins': dict(self.margins),
            **self.invariants.as_dict(),
        }


def _modality(family: str) -> str:
    if family in SPLIT_FAMILIES:
        return MODALITY_UP_TO_PHASE
    if family == 'C4':
        return MODALITY_UP_TO_CONJUGATE
    return MODALITY_STRICT


def _fragile(value: float, eps: float) -> bool:
    return eps / _FRAGILE_FACTOR < abs(value) <= eps * _FRAGILE_FACTOR


def _phase_to_real(phi: float) -> float:
    return min(abs(phi), abs(phi - math.pi), abs(2.0 * math.pi - phi))


def classify(asd: ASDState) -> ClassificationReport:
    """Assign one of the twenty subfamilies to a GHZ-class ASD."""
    tol = asd.tol
    inv = compute_invariants(asd)
    l0, l1, l2, l3, l4 = asd.lambdas
    eps = tol.zero
    nz1, nz2, nz3 = l1 > eps, l2 > eps, l3 > eps
    phase_gap = _phase_to_real(asd.phi)
    margins = {
        'gamma_abs': abs(inv.gamma),
        'rho_minus_one': inv.rho - 1.0,
        'lambda_1': l1,
        'lambda_2': l2,
        'lambda_3': l3,
        'phase_to_real': phase_gap,
        'iota_abs': abs(inv.iota),
    }

    tested = [('gamma_abs', tol.gamma)]
    if abs(inv.gamma) <= tol.gamma:
        tested += [('lambda_1', eps), ('lambda_2', eps), ('lambda_3', eps)]
        if nz1:
            family = 'P1'
        elif nz2 and not nz3:
            family = 'P3'
        elif nz3 and not nz2:
            family = 'P2'
        else:
            family = 'P4'
    elif nz2 and nz3 and phase_gap <= tol.phase:
        tested += [('lambda_2', eps), ('lambda_3', eps), ('lambda_1', eps),
                   ('iota_abs', eps)]
        family = 'R1' if nz1 and abs(inv.iota) > eps else 'R2'
    elif not nz2 or not nz3:
        tested += [('lambda_2', eps), ('lambda_3', eps)]
        if nz3:
            family = 'C1'
        elif nz2:
            family = 'C2'
        else:
            family = 'C3'
    else:
        tested += [('lambda_2', eps), ('lambda_3', eps)]
        family = 'C4'
    tested.append(('rho_minus_one', tol.rho))
    if family in ('R1', 'R2', 'C4'):
        tested.append(('phase_to_real', tol.phase))

    prime = abs(inv.rho - 1.0) <= tol.rho
    label = FamilyLabel(family, 'prime' if prime else 'double_prime')
    fragile = tuple(name for name, threshold in tested if _fragile(margins[name], threshold))
    if fragile:
        logger.info(f"label {label} of {asd} is close to the boundary of {', '.join(fragile)}")
    logger.debug(f"classified {asd} as {label} (rho={inv.rho:.12g}, |gamma|={abs(inv.gamma):.3e})")
    return ClassificationReport(
        label=label,
        invariants=inv,
        lbps=lbps_count(asd),
        margins=margins,
        unique_asd=prime,
        uniqueness_modality=_modality(family),
        fragile_conditions=fragile,
    )


def is_asd_unique(asd: ASDState) -> Tuple[bool, str]:
    """
    (ASD unique, modality). Unique means rho = 1: strictly for P and R families,
    ignoring phases for C1-C3, identifying a state with its conjugate for C4.

    The family closed form of the rho = 1 condition is cross-checked against
    rho itself; a disagreement raises ConsistencyError.
    """
    report = classify(asd)
    family = report.label.family
    l0, l1, l2, l3, l4 = asd.lambdas
    spread = (l2 * l2 + l4 * l4) * (l3 * l3 + l4 * l4) / (l4 * l4)
    residual = uniqueness_residual(asd, family)
    predicted = (report.invariants.rho ** 2 - 1.0) * spread / 2.0
    if abs(residual - predicted) > asd.tol.consistency * (1.0 + spread):
        raise ConsistencyError(
            f"closed-form uniqueness residual {residual:.3e} for {family} disagrees with "
            f"rho = {report.invariants.rho!r} (expected {predicted:.3e})")
    if report.unique_asd and abs(residual) > asd.tol.consistency * (1.0 + spread):
        raise ConsistencyError(
            f"rho = 1 but the {family} closed form is violated by {residual:.3e}")
    return report.unique_asd, report.uniqueness_modality


@dataclass(frozen=True)
class LUClass:
    """ASD members of one LU class (phase-free representatives for C1-C3)."""
    label: FamilyLabel
    members: Tuple[ASDState, ...]
    size: str
    lbps_invariant: bool


def lu_class_representatives(asd: ASDState) -> LUClass:
    label = classify(asd).label
    family = label.family
    if family in SPLIT_FAMILIES:
        base = asd.with_phase(0.0)
        members = (base,) if label.prime else (base, rho_iota_transform(asd).with_phase(0.0))
        size = 'infinite'
    elif label.prime and family == 'C4':
        members, size = (asd, conjugate_asd(asd)), '2'
    elif label.prime:
        members, size = (asd,), '1'
    else:
        members, size = (asd, rho_iota_transform(asd)), '2'
    return LUClass(label, members, size, lbps_invariant=str(label) != "R2''")


@dataclass(frozen=True)
class EquivalenceDecision:
    equivalent: bool
    rule: str
    reason: str
    witness: Optional[LocalUnitaryTriple] = field(default=None, compare=False)
    witness_source: Optional[str] = None

    def as_dict(self):
        return {
            'equivalent': self.equivalent,
            'rule': self.rule,
            'reason': self.reason,
            'witness_source': self.witness_source,
            'witness': self.witness.as_lists() if self.witness is not None else None,
        }


def _coefficient_distance(a: ASDState, b: ASDState, ignore_phase: bool) -> float:
    if ignore_phase:
        return max(abs(x - y) for x, y in zip(a.lambdas, b.lambdas))
    return max(abs(x - y) for x, y in zip(a.coefficients, b.coefficients))


def decide_lu_equivalence(a: ASDState, b: ASDState) -> EquivalenceDecision:
    """Decide whether two GHZ-class ASDs are LU-equivalent."""
    tol = a.tol
    ra, rb = classify(a), classify(b)
    ln_a, ln_b = ra.invariants.ln_rho_abs, rb.invariants.ln_rho_abs
    if abs(ln_a - ln_b) > tol.cmp:
        return EquivalenceDecision(
            False, 'ln_rho',
            f"|ln rho| differs ({ln_a:.12g} vs {ln_b:.12g}) and is an LU invariant")
    if ra.label.family != rb.label.family:
        return EquivalenceDecision(
            False, 'family',
            f"families {ra.label.family} and {rb.label.family} are LU-inequivalent")
    if ra.label != rb.label:
        return EquivalenceDecision(
            False, 'subfamily', f"subfamilies {ra.label} and {rb.label} are LU-inequivalent")

    label = ra.label
    split = label.family in SPLIT_FAMILIES
    if _coefficient_distance(a, b, ignore_phase=False) <= tol.cmp:
        return EquivalenceDecision(True, 'identity', 'identical ASD',
                                   LocalUnitaryTriple.identity(), 'identity')
    if split and _coefficient_distance(a, b, ignore_phase=True) <= tol.cmp:
        return EquivalenceDecision(
            True, 'phase', f"{label}: phase variant of the same ASD (phases are free when "
                           f"lambda_2 lambda_3 = 0)",
            phase_shift_unitaries(a, b.phi), 'phase_shift')

    if label.prime and label.family == 'C4':
        if _coefficient_distance(conjugate_asd(a), b, ignore_phase=False) <= tol.cmp:
            return EquivalenceDecision(
                True, 'conjugate', f"{label}: complex conjugate of the first state", None, 'oracle')
    elif not label.prime:
        image = rho_iota_transform(a)
        if _coefficient_distance(image, b, ignore_phase=split) <= tol.cmp:
            return EquivalenceDecision(
                True, 'rho_iota', f"{label}: rho-iota image of the first state", None, 'oracle')

    if label.family == 'C4' and not label.prime and \
            _coefficient_distance(conjugate_asd(a), b, ignore_phase=False) <= tol.cmp:
        return EquivalenceDecision(
            False, 'nclu', f"{label} NCLU: the state is not LU-equivalent to its complex conjugate")
    return EquivalenceDecision(
        False, 'membership', f"{label}: second state is not a member of the first state's LU class")


def canonical_asd(asd: ASDState) -> ASDState:
    """Canonical member of the LU class: rho <= 1, phi in [0, pi] for C4', phi = 0 for C1-C3."""
    report = classify(asd)
    out = asd
    if report.invariants.rho > 1.0 + asd.tol.rho:
        out = rho_iota_transform(asd)
    family = report.label.family
    if family == 'C4' and report.label.prime and out.phi > math.pi:
        out = conjugate_asd(out)
    if family in SPLIT_FAMILIES:
        out = out.with_phase(0.0)
    return out
