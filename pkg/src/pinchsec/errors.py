"""Exception types shared across the package."""


class PinchSecError(Exception):
    """Base class for all domain errors raised by this package."""


class GeometryError(PinchSecError, ValueError):
    """A geometric quantity is degenerate or out of its physical domain."""


class InfeasibleLayoutError(PinchSecError, ValueError):
    """No antenna layout can satisfy spacing and box constraints."""


class DegenerateGeometryError(PinchSecError, ValueError):
    """Users sit at mirror-symmetric bearings; the fine-tuning step is undefined."""


class SearchExhaustedError(PinchSecError, RuntimeError):
    """A bounded search ended without a feasible candidate."""


class ConfigError(PinchSecError, ValueError):
    """A config file is malformed or fails validation."""
