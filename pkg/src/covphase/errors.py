"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inconsistent input (bad shape, window mismatch, non-finite angles)."""


class ValidationError(InputError):
    """A matrix failed the unit-diagonal / Hermitian / positivity conditions."""
