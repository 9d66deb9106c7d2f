"""Exception types shared across the package."""


class LongwaveError(Exception):
    pass


class GridError(LongwaveError, ValueError):
    pass


class NonZeroMean(LongwaveError, ValueError):
    """Raised when a field that must be a perfect derivative has a nonzero mean."""


class InvertibilityViolation(LongwaveError, ValueError):
    pass


class EllipticityViolation(LongwaveError, ValueError):
    pass


class NegativeEnergy(LongwaveError, ArithmeticError):
    """The energy square became negative: the small-amplitude regime was left."""

    def __init__(self, value):
        super().__init__(f"energy squared is negative ({value:.3e})")
        self.value = value


class BlowUp(LongwaveError, RuntimeError):
    """A solution exceeded the L-infinity threshold or became non-finite.

    ``trajectory`` holds every snapshot recorded before the failure.
    """

    def __init__(self, time, trajectory=None, threshold=None):
        msg = f"solution blew up at t={time:.6g}"
        if threshold is not None:
            msg += f" (threshold {threshold:g})"
        super().__init__(msg)
        self.time = time
        self.trajectory = trajectory


class DegenerateFit(LongwaveError, ValueError):
    pass


class ConfigError(LongwaveError, ValueError):
    pass
