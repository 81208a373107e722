# src/errors.py
"""Exception hierarchy shared by all gvkit modules."""


class GvkitError(ValueError):
    pass


class InvalidTruncationError(GvkitError):
    """A t-order is too small for the requested coefficients."""


class UnsupportedBackendError(GvkitError):
    """Genus 0 requested from the exact Q backend."""


class SymmetryViolationError(GvkitError):
    pass


class DomainError(GvkitError):
    """Argument outside the mathematical domain (zero class, c1 <= 0, ...)."""


class IncompatibleContextError(GvkitError):
    """Series over different lattices or area weights were combined."""


class TruncationUnsoundError(GvkitError):
    """The energy/genus window does not support the requested inversion."""


class IncompleteLocalDataError(GvkitError):
    pass


class SchemaError(GvkitError):
    """Input document failed validation."""


class InternalConsistencyError(RuntimeError):
    """An identity that must hold exactly was violated."""
