"""
Shared fixtures: worked-example states, tolerances and a CLI runner.
"""
import math

import pytest
from click.testing import CliRunner

from ghzlu.config import TestingConfig, Tolerances
from ghzlu.services.asd import ASDState

H = math.sqrt(0.5)
Q = 1.0 / (2.0 * math.sqrt(2.0))


@pytest.fixture
def tol():
    return Tolerances.from_config(TestingConfig)


@pytest.fixture
def ghz_asd():
    return ASDState((H, 0.0, 0.0, 0.0, H), 0.0)


@pytest.fixture
def phi_asd():
    """(|000> + |101> + |110> + |111>) / 2."""
    return ASDState((0.5, 0.0, 0.5, 0.5, 0.5), 0.0)


@pytest.fixture
def phi_prime_asd():
    """H (x) H (x) H applied to phi_asd."""
    return ASDState((math.sqrt(2) / 2, math.sqrt(2) / 4, math.sqrt(2) / 4,
                     math.sqrt(2) / 4, math.sqrt(2) / 4), math.pi)


@pytest.fixture
def nclu_asd():
    """(|000> + i|100> + |101> + |110> + |111>) / sqrt(5); rho = sqrt(3)/2."""
    return ASDState.from_coefficients([x / math.sqrt(5) for x in (1, 1j, 1, 1, 1)])


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def write_state(tmp_path):
    """Write state-file text to a temporary file and return its path."""
    def _write(text, name='input.state'):
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return str(path)
    return _write
