"""Exception hierarchy shared across the pipeline.

Each error carries an ``exit_code`` used by the command line front end:
2 for configuration problems, 3 for degenerate coefficient signs and 4 for
numerical failures.
"""


class DynTransError(Exception):
    exit_code = 4


class ConfigError(DynTransError, ValueError):
    exit_code = 2


class WindowError(ConfigError):
    """Model parameter outside the two-mode admissible window."""


class InvalidIndices(ConfigError):
    pass


class MultiplicityError(DynTransError):
    """More than two modes tie for criticality."""

    exit_code = 3


class DegenerateError(DynTransError):
    """The critical set is not one rectangle mode plus one roll mode."""

    exit_code = 3


class PESViolation(DynTransError):
    def __init__(self, index, beta):
        self.index = tuple(index)
        self.beta = beta
        super().__init__(f"mode {self.index} is not strictly stable at criticality (beta={beta:.6g})")


class ZeroNormError(DynTransError):
    pass


class SingularManifoldError(DynTransError):
    """A stable-space mode has a non-negative growth rate."""


class QuadraticDegeneracyError(DynTransError):
    """a1 or b1 vanishes; the transition is not decided by the quadratic part."""

    exit_code = 3


class TruncationError(DynTransError):
    """Lattice truncation did not converge."""


class StepSizeError(DynTransError):
    pass


class NotApplicable(DynTransError):
    pass


class BlowupError(DynTransError):
    def __init__(self, t, norm):
        self.t = t
        self.norm = norm
        super().__init__(f"field norm {norm:.3g} exceeded ceiling at t={t:.6g}")
