"""
Custom exceptions
"""
from typing import Optional


class FarFieldError(Exception):
    """Base class for all toolkit errors"""

    code: str = "error"


class DomainError(FarFieldError, ValueError):
    """Argument outside the mathematical domain of an operation"""

    code = "domain"


class SingularityError(DomainError):
    """Evaluation point coincides with a source or image point"""

    code = "singularity"


class DegenerateGridError(DomainError):
    """Grid too small for the requested quadrature or window"""

    code = "degenerate-grid"


class ConfigurationError(DomainError):
    """Invalid numerical configuration (harmonic count, lattice)"""

    code = "configuration"


class PropagationError(DomainError):
    """Requested points lie behind the measurement plane"""

    code = "propagation"


class OutOfBandError(DomainError):
    """Direction maps outside the filtered wavenumber band"""

    code = "out-of-band"


class LatticeMismatchError(DomainError):
    """Curves or scans do not share a common lattice"""

    code = "lattice-mismatch"


class NormalizationError(DomainError):
    """Reference value is zero and cannot normalize a scan"""

    code = "zero-reference"


class FieldFileError(FarFieldError):
    """Malformed field file"""

    code = "parse"

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UsageError(FarFieldError):
    """Bad command-line usage"""

    code = "usage"
