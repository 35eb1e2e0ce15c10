"""Exception types shared across the package."""


class FormatError(ValueError):
    """An input file or stream does not match the expected format."""


class NumericalError(RuntimeError):
    """A numerical routine failed: overflow, non-convergence, or a broken
    contract that only floating point can break."""
