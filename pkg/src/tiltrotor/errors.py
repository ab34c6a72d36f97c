"""Exception types shared across the toolkit."""


class TiltrotorError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(TiltrotorError):
    """A config file is missing a key or holds an invalid value."""


class DesignError(TiltrotorError):
    """A sizing relation produced an infeasible design (e.g. p < 2, S_fi < 0)."""


class DomainError(TiltrotorError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(TiltrotorError):
    """An iterative solver failed to converge; carries the last residual."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class AllocationError(TiltrotorError):
    """The control-allocation linear system is singular or infeasible."""


class FeasibilityError(TiltrotorError):
    """A flight-envelope constraint (stall rate, tilt schedule) cannot be met."""


class IntegrationError(TiltrotorError):
    """State integration aborted (non-finite state or attitude singularity)."""

    def __init__(self, message: str, step: int = -1, t: float = float("nan")):
        super().__init__(message)
        self.step = step
        self.t = t
