"""Exception types shared across the package."""


class NumericalError(RuntimeError):
    """A numerical routine failed to converge to its contracted tolerance.

    Raised instead of returning a silent approximation; the CLI maps it to
    exit code 3.
    """
