"""
Exception hierarchy for the GHZ-class LU toolkit
"""


class GhzluError(Exception):
    """Base class for every error raised by ghzlu."""
    error_type = 'error'


class ConfigError(GhzluError):
    """Invalid tolerance or configuration value."""
    error_type = 'config_error'


class InvalidInputError(GhzluError, ValueError):
    """Input rejected before any computation."""
    error_type = 'input_error'


class NotNormalizedError(InvalidInputError):
    """State or ASD coefficients are not unit norm."""


class NotUnitaryError(InvalidInputError):
    """A local factor deviates from unitarity."""


class UnknownLabelError(InvalidInputError):
    """Subfamily label string could not be parsed."""


class StateFileError(InvalidInputError):
    """Malformed state or report file; carries the offending position."""

    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = path or '<input>'
        if line is not None:
            where = f"{where}:{line}"
            if column is not None:
                where = f"{where}:{column}"
        super().__init__(f"{where}: {message}")


class DomainError(GhzluError, ValueError):
    """A mathematical precondition of an operation does not hold."""
    error_type = 'domain_error'


class NotGhzClassError(DomainError):
    """The state is outside the GHZ SLOCC class (lambda_0 * lambda_4 vanishes)."""
    error_type = 'not_ghz_class'


class PhaseShiftDomainError(DomainError):
    """Phase retargeting requested outside lambda_2 lambda_3 = 0, lambda_0 lambda_1 lambda_4 != 0."""


class NumericalFailureError(GhzluError, ArithmeticError):
    """A numerical procedure failed on every branch it tried."""
    error_type = 'numerical_failure'

    def __init__(self, message, residuals=None):
        self.residuals = list(residuals or [])
        super().__init__(message)


class ConsistencyError(GhzluError, RuntimeError):
    """Two independent evaluations of the same fact disagree."""
    error_type = 'consistency_error'
