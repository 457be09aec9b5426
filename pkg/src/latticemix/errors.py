"""Error types shared across the package."""


class ParityError(ValueError):
    """Raised when an operation defined only for odd cycle lengths gets an even one."""


class SizeError(ValueError):
    """Raised when a lattice is too large for the requested dense computation."""


class ResolutionError(ValueError):
    """Raised when a quadrature step is too coarse for the integrand's bandwidth."""
