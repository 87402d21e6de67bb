"""Exception types shared across the library.

ConfigError maps to CLI exit code 1, NumericalError subclasses to exit
code 2, and I/O problems (plain OSError) to exit code 3.
"""


class ConfigError(ValueError):
    """Invalid configuration value or unknown configuration key."""


class NumericalError(RuntimeError):
    """Base class for numerical failures."""


class DegenerateMetricError(NumericalError):
    """EG - F^2 <= 0 at a point that should be an immersion point."""


class UmbilicError(NumericalError):
    """Principal directions requested where L, M, N all vanish."""


class AmbiguousBranchError(NumericalError):
    """Branch continuation cannot decide between the two directions."""


class TangencyError(NumericalError):
    """Orbit meets a section with transversality margin below tolerance."""


class NoBracketError(NumericalError):
    """No sign change brackets the requested section crossing."""


class StepCollapseError(NumericalError):
    """Integrator step size collapsed below 1e-14."""


class PoleProximityError(NumericalError):
    """Point too close to the stereographic pole."""
