"""Exception hierarchy shared by all macdof modules."""


class MacdofError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(MacdofError):
    """Inconsistent network geometry, scheme dimensions, or config input."""


class FactorizationError(MacdofError):
    """A matrix factorization failed to converge or produced unusable output."""


class ContractViolationError(MacdofError):
    """An input violated a structural precondition (e.g. non-Hermitian matrix)."""


class VerificationError(MacdofError):
    """A numerical verification that should hold with probability one failed."""
