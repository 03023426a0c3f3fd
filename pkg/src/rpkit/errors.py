"""Exception hierarchy shared across the library."""


class RPKitError(Exception):
    """Base class for all rpkit errors."""


class DomainError(RPKitError, ValueError):
    """An argument lies outside the domain of a kernel, process or function."""


class IngestionError(RPKitError, ValueError):
    """A file or table fails validation on ingestion (asymmetry, shape, parse)."""


class EigensolveError(RPKitError, RuntimeError):
    """A symmetric eigensolve failed; carries condition diagnostics."""

    def __init__(self, message: str, *, size: int | None = None,
                 max_abs_entry: float | None = None):
        super().__init__(message)
        self.size = size
        self.max_abs_entry = max_abs_entry


class DefinitenessError(RPKitError, ValueError):
    """A matrix violates a required positive-semidefiniteness precondition."""

    def __init__(self, message: str, min_eigenvalue: float | None = None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class ReflectionPositivityError(RPKitError, ValueError):
    """A reflected Gram matrix is not positive semidefinite beyond tolerance."""

    def __init__(self, message: str, min_eigenvalue: float):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class QuotientDescentError(RPKitError, RuntimeError):
    """The shift map does not descend to the quotient within tolerance."""


class SamplingError(RPKitError, RuntimeError):
    """Covariance factorization failed even after the jitter escalation."""

    def __init__(self, message: str, min_eigenvalue: float | None = None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue
