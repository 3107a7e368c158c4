"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InvalidStateError(ValueError):
    """A profile or state object violates its branch/modulus constraints."""


class InadmissibleStrengthError(InvalidStateError):
    """Vertex strength Z is outside the admissible range for kink states."""


class ConfigurationError(ValueError):
    """A run configuration violates a hard constraint (e.g. the CFL bound)."""


class NumericalError(RuntimeError):
    """A numerical routine failed to converge or produced unusable output."""
