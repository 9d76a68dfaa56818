"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A parameter violates its documented domain (e.g. negative intensity)."""


class InsufficientPointsError(ValueError):
    """A query needs more points than the pattern contains."""


class WindowTooSmallError(ValueError):
    """A trajectory (plus guard margin) does not fit inside the window."""


class DivergentIntegralError(InvalidParameterError):
    """The requested integral diverges (path-loss exponent <= 2)."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message: str, achieved_tolerance: float):
        super().__init__(f"{message} (achieved tolerance {achieved_tolerance:.3e})")
        self.achieved_tolerance = achieved_tolerance
