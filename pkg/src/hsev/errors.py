"""Exception types shared across the simulator.

The CLI maps these onto exit codes: validation and input-domain problems
exit 1, I/O problems exit 2.
"""


class SimulatorError(Exception):
    """Base class for all simulator errors."""


class InputDomainError(SimulatorError):
    """An argument lies outside the documented domain of an operation."""


class CalibrationError(SimulatorError):
    """A parameter fit produced a value outside its physical range."""


class ConfigurationError(SimulatorError):
    """One or more configuration fields are invalid.

    Carries every violation found so callers can report them all at once.
    """

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))
