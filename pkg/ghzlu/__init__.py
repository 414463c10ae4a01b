"""
GHZ-class LU toolkit - application factory
"""
import os
import logging

__version__ = '1.0.0'


def create_toolkit(config_name=None, tolerance_scale=1.0, seed=None):
    """
    Configure logging and build the service used by the command line.

    Args:
        config_name: 'development', 'production' or 'testing'; defaults to GHZLU_ENV
        tolerance_scale: Factor applied uniformly to every epsilon
        seed: Default seed; falls back to the configured DEFAULT_SEED

    Returns:
        LUService instance
    """
    if config_name is None:
        config_name = os.environ.get('GHZLU_ENV', 'development')

    from ghzlu.config import Tolerances, config
    from ghzlu.exceptions import ConfigError
    if config_name not in config:
        raise ConfigError(f"unknown configuration {config_name!r}; "
                          f"expected one of {', '.join(sorted(config))}")
    config_class = config[config_name]

    setup_logging(config_class)

    tolerances = Tolerances.from_config(config_class, tolerance_scale)

    from ghzlu.services.lu_service import LUService
    service = LUService(tolerances, config_class.DEFAULT_SEED if seed is None else seed)

    logging.getLogger('ghzlu').debug(f"ghzlu {__version__} configured in {config_name} mode")
    return service


def setup_logging(config_class):
    """Configure logging for the toolkit."""
    if not config_class.DEBUG and not config_class.TESTING:
        # Production logging
        log_dir = os.path.dirname(os.path.abspath(config_class.LOG_FILE))
        os.makedirs(log_dir, exist_ok=True)

        package_logger = logging.getLogger('ghzlu')
        if not package_logger.handlers:
            file_handler = logging.FileHandler(config_class.LOG_FILE)
            file_handler.setFormatter(logging.Formatter(
                '%(asctime)s %(levelname)s: %(message)s [in %(pathname)s:%(lineno)d]'
            ))
            file_handler.setLevel(config_class.LOG_LEVEL)
            package_logger.addHandler(file_handler)

        package_logger.setLevel(config_class.LOG_LEVEL)
        package_logger.info('ghzlu startup')
    else:
        # Development logging goes to stderr; stdout carries command output only
        logging.basicConfig(
            level=config_class.LOG_LEVEL,
            format='%(asctime)s %(name)s %(levelname)s: %(message)s'
        )

        for name in ('ghzlu', 'ghzlu.services', 'ghzlu.cli', 'ghzlu.utils'):
            logging.getLogger(name).setLevel(config_class.LOG_LEVEL)
