"""
Configuration settings for the GHZ-class LU toolkit
"""
import os
import math
import logging
from dataclasses import dataclass, fields, replace

from ghzlu.exceptions import ConfigError

basedir = os.path.abspath(os.path.dirname(__file__))


class Config:
    """Base configuration class."""
    DEBUG = False
    TESTING = False
    LOG_LEVEL = logging.INFO

    # State validation
    EPS_NORM = 1e-12
    EPS_UNITARY = 1e-12
    EPS_FILE_NORM = 1e-9  # accepted on load, renormalized afterwards

    # Decomposition
    EPS_ZERO = 1e-9
    EPS_PHASE = 1e-9
    EPS_ASD_RESIDUAL = 1e-8

    # Classification
    EPS_GAMMA = 1e-9
    EPS_RHO = 1e-9
    EPS_CMP = 1e-9
    EPS_TANGLE = 1e-9  # compared against sqrt(tau) / 2 = lambda_0 lambda_4
    EPS_CONSISTENCY = 1e-8

    # Brute-force oracle
    EPS_ORACLE = 1e-8
    ORACLE_REJECT = 1e-6
    ORACLE_BUDGET = 64

    DEFAULT_SEED = int(os.environ.get('GHZLU_SEED') or 20240607)
    LOG_FILE = os.environ.get('GHZLU_LOG_FILE') or os.path.join(
        basedir, '..', 'logs', 'ghzlu.log')


class DevelopmentConfig(Config):
    """Development configuration."""
    DEBUG = True
    TESTING = False

    LOG_LEVEL = logging.INFO


class ProductionConfig(Config):
    """Production configuration."""
    DEBUG = False
    TESTING = False

    # Production logging
    LOG_LEVEL = logging.INFO


class TestingConfig(Config):
    """Testing configuration."""
    DEBUG = True
    TESTING = True

    LOG_LEVEL = logging.WARNING
    DEFAULT_SEED = 12345


config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}


@dataclass(frozen=True)
class Tolerances:
    """Runtime tolerance record shared by the library, the CLI and the tests."""
    norm: float = Config.EPS_NORM
    unitary: float = Config.EPS_UNITARY
    file_norm: float = Config.EPS_FILE_NORM
    zero: float = Config.EPS_ZERO
    phase: float = Config.EPS_PHASE
    asd_residual: float = Config.EPS_ASD_RESIDUAL
    gamma: float = Config.EPS_GAMMA
    rho: float = Config.EPS_RHO
    cmp: float = Config.EPS_CMP
    tangle: float = Config.EPS_TANGLE
    consistency: float = Config.EPS_CONSISTENCY
    oracle: float = Config.EPS_ORACLE
    oracle_reject: float = Config.ORACLE_REJECT

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value) or value <= 0.0 or value >= 0.5:
                raise ConfigError(
                    f"tolerance '{f.name}' must lie in (0, 0.5), got {value!r}")

    @classmethod
    def from_config(cls, config_class=Config, scale=1.0):
        """Build the record from a configuration class, scaling every epsilon."""
        base = cls(
            norm=config_class.EPS_NORM,
            unitary=config_class.EPS_UNITARY,
            file_norm=config_class.EPS_FILE_NORM,
            zero=config_class.EPS_ZERO,
            phase=config_class.EPS_PHASE,
            asd_residual=config_class.EPS_ASD_RESIDUAL,
            gamma=config_class.EPS_GAMMA,
            rho=config_class.EPS_RHO,
            cmp=config_class.EPS_CMP,
            tangle=config_class.EPS_TANGLE,
            consistency=config_class.EPS_CONSISTENCY,
            oracle=config_class.EPS_ORACLE,
            oracle_reject=config_class.ORACLE_REJECT,
        )
        return base.scaled(scale) if scale != 1.0 else base

    def scaled(self, factor):
        """Return a copy with every epsilon multiplied by ``factor``."""
        if not math.isfinite(factor) or factor <= 0.0:
            raise ConfigError(f"tolerance scale must be positive, got {factor!r}")
        return replace(self, **{f.name: getattr(self, f.name) * factor
                                for f in fields(self)})

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_TOLERANCES = Tolerances()
