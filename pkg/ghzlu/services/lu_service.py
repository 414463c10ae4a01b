"""
LU service: the layer between the command line and the numerical modules
"""
import logging
from typing import Any, Dict, Optional

from ghzlu import __version__
from ghzlu.config import Config, DEFAULT_TOLERANCES, Tolerances
from ghzlu.exceptions import GhzluError, NotGhzClassError
from ghzlu.services.acceptance import run_acceptance
from ghzlu.services.asd import ASDState, compute_asd, lbps_count, reconstruct
from ghzlu.services.classify import (
    canonical_asd,
    classify,
    decide_lu_equivalence,
    is_asd_unique,
    parse_label,
)
from ghzlu.services.invariants import compute_invariants, rho_iota_transform
from ghzlu.services.oracle import brute_force_lu_equivalent, sample_subfamily
from ghzlu.services.qstate import (
    apply_local_unitaries,
    hyperdeterminant,
    slocc_class,
    three_tangle,
)
from ghzlu.utils.state_files import StateRecord, jsonable, load_state_file

logger = logging.getLogger(__name__)


def asd_dict(asd: ASDState) -> Dict[str, Any]:
    return {'lambda': list(asd.lambdas), 'phi': asd.phi}


class LUService:
    """Service class exposing decomposition, classification and equivalence as result dictionaries."""

    def __init__(self, tolerances: Optional[Tolerances] = None, seed: Optional[int] = None):
        self.tol = tolerances or DEFAULT_TOLERANCES
        self.seed = Config.DEFAULT_SEED if seed is None else seed
        logger.info(f"LU service ready (seed {self.seed})")
        logger.debug(f"tolerances: {self.tol.as_dict()}")

    @staticmethod
    def _failure(action: str, e: Exception) -> Dict[str, Any]:
        error_type = getattr(e, 'error_type', 'error')
        if isinstance(e, GhzluError):
            logger.error(f"Error {action}: {str(e)}")
        else:
            logger.exception(f"Unexpected error {action}")
        return {
            'success': False,
            'error_type': error_type,
            'message': f'Error {action}: {str(e)}',
        }

    def load(self, path) -> Dict[str, Any]:
        """Read every record of a state file."""
        try:
            records = load_state_file(path, self.tol)
            return {'success': True, 'records': records,
                    'message': f'Loaded {len(records)} record(s) from {path}'}
        except Exception as e:
            return self._failure(f'loading {path}', e)

    def _asd_of(self, record: StateRecord):
        if record.format == 'asd':
            return record.asd, None
        return compute_asd(record.state, self.tol)

    def decompose(self, record: StateRecord) -> Dict[str, Any]:
        """
        ASD of a state together with the witness unitaries.

        Args:
            record: Amplitude or ASD record

        Returns:
            Dictionary with the ASD, witness, reconstruction residual and SLOCC class
        """
        try:
            state = record.as_state()
            asd, witness = self._asd_of(record)
            result = {
                'success': True,
                'asd': asd_dict(asd),
                'lbps': lbps_count(asd),
                'slocc_class': slocc_class(state, self.tol),
                'records': [StateRecord.from_asd(asd, record.name)],
            }
            if witness is not None:
                image = apply_local_unitaries(state, witness)
                result['witness'] = witness.as_lists()
                result['residual'] = float(abs(image.amp - reconstruct(asd).amp).max())
            return result
        except Exception as e:
            return self._failure('computing the ASD', e)

    def _not_ghz(self, record: StateRecord, e: NotGhzClassError) -> Dict[str, Any]:
        state = record.as_state()
        logger.info(f"input {record.name or ''} is outside the GHZ class: {e}")
        return {
            'success': False,
            'error_type': e.error_type,
            'message': 'not GHZ class',
            'detail': str(e),
            'slocc_class': slocc_class(state, self.tol),
            'three_tangle': three_tangle(state),
        }

    def describe(self, record: StateRecord) -> Dict[str, Any]:
        """Full classification report of one state."""
        try:
            asd, _ = self._asd_of(record)
            report = classify(asd)
            unique, modality = is_asd_unique(asd)
            out = {
                'success': True,
                'tool': 'ghzlu',
                'version': __version__,
                'tolerances': self.tol.as_dict(),
                'name': record.name,
                'asd': asd_dict(asd),
                'canonical_asd': asd_dict(canonical_asd(asd)),
                **report.as_dict(),
                'unique_asd': unique,
                'uniqueness_modality': modality,
            }
            return jsonable(out)
        except NotGhzClassError as e:
            return jsonable(self._not_ghz(record, e))
        except Exception as e:
            return self._failure('classifying the state', e)

    def invariant_summary(self, record: StateRecord) -> Dict[str, Any]:
        """gamma, J1, J4, rho, iota, |ln rho| and the measure."""
        try:
            asd, _ = self._asd_of(record)
            inv = compute_invariants(asd)
            return jsonable({
                'success': True,
                'name': record.name,
                **inv.as_dict(),
                'hyperdeterminant': hyperdeterminant(record.as_state()),
                'three_tangle': three_tangle(record.as_state()),
            })
        except NotGhzClassError as e:
            return jsonable(self._not_ghz(record, e))
        except Exception as e:
            return self._failure('computing invariants', e)

    def transform(self, record: StateRecord) -> Dict[str, Any]:
        """The rho-iota partner ASD."""
        try:
            asd, _ = self._asd_of(record)
            image = rho_iota_transform(asd)
            return {
                'success': True,
                'asd': asd_dict(image),
                'rho': compute_invariants(image).rho,
                'records': [StateRecord.from_asd(image, record.name)],
            }
        except NotGhzClassError as e:
            return jsonable(self._not_ghz(record, e))
        except Exception as e:
            return self._failure('applying the rho-iota transformation', e)

    def equivalence(self, a: StateRecord, b: StateRecord, oracle: bool = False,
                    budget: Optional[int] = None) -> Dict[str, Any]:
        """Analytic LU-equivalence decision, optionally backed by the brute-force search."""
        try:
            asd_a, _ = self._asd_of(a)
            asd_b, _ = self._asd_of(b)
            decision = decide_lu_equivalence(asd_a, asd_b)
            logger.info(f"equivalence decision: {decision.equivalent} ({decision.reason})")
            out = {
                'success': True,
                'labels': [str(classify(asd_a).label), str(classify(asd_b).label)],
                **decision.as_dict(),
            }
            if oracle:
                verdict = brute_force_lu_equivalent(a.as_state(), b.as_state(), budget,
                                                    self.seed, self.tol)
                out['oracle'] = verdict.as_dict()
            return jsonable(out)
        except NotGhzClassError as e:
            return jsonable({'success': False, 'error_type': e.error_type,
                             'message': 'not GHZ class', 'detail': str(e)})
        except Exception as e:
            return self._failure('deciding LU equivalence', e)

    def sample(self, label_text: str, count: int = 1, seed: Optional[int] = None) -> Dict[str, Any]:
        """``count`` deterministic samples of a subfamily."""
        try:
            label = parse_label(label_text)
            base = self.seed if seed is None else seed
            records = [StateRecord.from_asd(sample_subfamily(label, [base, i], self.tol),
                                            f"{label}#{i}")
                       for i in range(count)]
            return {'success': True, 'label': str(label), 'records': records,
                    'message': f'Sampled {count} state(s) of {label}'}
        except Exception as e:
            return self._failure(f'sampling {label_text}', e)

    def selftest(self, mode: str = 'quick') -> Dict[str, Any]:
        try:
            summary = run_acceptance(mode, self.tol, self.seed)
            out = summary.as_dict()
            out['success'] = summary.passed
            if not summary.passed:
                out['error_type'] = 'selftest_failed'
                out['message'] = f"failed criteria: {', '.join(summary.failed)}"
            return out
        except Exception as e:
            return self._failure('running the self-test', e)
