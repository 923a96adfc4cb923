"""Exception types shared across the package."""


class PhasesimError(Exception):
    """Base class for all errors raised by phasesim."""


class ValidationError(PhasesimError):
    """Invalid parameters, incompatible grids, or violated preconditions."""


class GridMismatchError(ValidationError):
    """Two fields that must share a grid do not."""


class InstabilityError(PhasesimError):
    """Numerical blow-up detected during time integration."""


class FormatError(PhasesimError):
    """Malformed PSFIELD / config / CSV input."""
