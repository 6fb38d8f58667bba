"""Exception types shared across the package."""


class InvariantError(ValueError):
    """A structural invariant failed during construction or verification.

    Raised when a produced object violates one of its defining checks
    (unitarity, trace orthogonality, POVM completeness, PPT positivity, ...).
    The CLI maps this to exit code 2.
    """


class UnsupportedConfigurationError(ValueError):
    """The requested construction is outside the supported templates."""
