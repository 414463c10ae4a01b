import pytest

from ghzlu import create_toolkit
from ghzlu.config import TestingConfig
from ghzlu.exceptions import ConfigError
from ghzlu.services.asd import reconstruct
from ghzlu.services.lu_service import LUService
from ghzlu.services.qstate import W_STATE
from ghzlu.utils.state_files import StateRecord


@pytest.fixture
def service(tol):
    return LUService(tol, seed=TestingConfig.DEFAULT_SEED)


def test_create_toolkit_testing_config():
    service = create_toolkit('testing')
    assert isinstance(service, LUService)
    assert service.seed == TestingConfig.DEFAULT_SEED


def test_create_toolkit_rejects_unknown_config():
    with pytest.raises(ConfigError):
        create_toolkit('staging')


def test_tolerance_scale_applies_uniformly():
    service = create_toolkit('testing', tolerance_scale=10.0)
    assert service.tol.zero == pytest.approx(1e-8)
    assert service.tol.gamma == pytest.approx(1e-8)


def test_describe_reports_label_and_uniqueness(service, phi_asd):
    result = service.describe(StateRecord.from_asd(phi_asd, 'phi'))
    assert result['success']
    assert result['label'] == "R2''"
    assert result['unique_asd'] is False
    assert result['name'] == 'phi'
    assert result['canonical_asd']['lambda'] == pytest.approx(list(phi_asd.lambdas))


def test_describe_outside_ghz_class(service):
    result = service.describe(StateRecord.from_state(W_STATE))
    assert not result['success']
    assert result['error_type'] == 'not_ghz_class'
    assert result['slocc_class'] == 'W'
    assert result['three_tangle'] == pytest.approx(0.0, abs=1e-12)


def test_decompose_amplitudes(service, ghz_asd):
    result = service.decompose(StateRecord.from_state(reconstruct(ghz_asd)))
    assert result['success']
    assert result['residual'] <= 1e-12
    assert result['lbps'] == 2


def test_equivalence_with_oracle(service, phi_asd, phi_prime_asd):
    result = service.equivalence(StateRecord.from_asd(phi_asd), StateRecord.from_asd(phi_prime_asd),
                                 oracle=True, budget=64)
    assert result['success']
    assert result['equivalent']
    assert result['oracle']['equivalent']


def test_sample_names_and_determinism(service):
    first = service.sample("C1''", count=2, seed=3)
    second = service.sample("C1''", count=2, seed=3)
    assert [r.name for r in first['records']] == ["C1''#0", "C1''#1"]
    assert [r.asd for r in first['records']] == [r.asd for r in second['records']]


def test_sample_unknown_label(service):
    result = service.sample('Z9')
    assert not result['success']
    assert result['error_type'] == 'input_error'


def test_load_missing_file(service, tmp_path):
    result = service.load(tmp_path / 'absent.state')
    assert not result['success']
    assert result['error_type'] == 'input_error'
