"""Exception hierarchy shared by all jumpkit modules.

The command-line front end maps these onto process exit codes, so every
failure mode raised by the library should derive from one of the classes
below:

* ``ParameterError``          -- bad arguments or malformed configuration
* ``NumericalError``          -- a computation failed (blowup, singular
                                 system, non-convergent iteration)
* ``HypothesisViolationError``-- inputs fall outside the assumptions a
                                 closed-form result requires
"""


class JumpkitError(Exception):
    """Base class for all library errors."""


class ParameterError(JumpkitError, ValueError):
    """Invalid argument values (negative rates, empty grids, ...)."""


class ConfigError(ParameterError):
    """Malformed or incomplete scenario configuration."""


class NumericalError(JumpkitError):
    """A numerical procedure failed to produce a trustworthy result."""


class NumericalBlowupError(NumericalError):
    """A simulated state exceeded the blowup threshold.

    Carries the simulation time at which the path was abandoned.
    """

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class DistributionError(NumericalError):
    """A sampler produced a value its declared role cannot accept."""


class ChatteringError(NumericalError):
    """A controlled path exceeded the intervention-count cap."""


class DegeneratePolicyError(NumericalError):
    """Policy synthesis produced an empty continuation region."""


class HypothesisViolationError(JumpkitError):
    """The inputs violate the hypotheses of the requested closed form."""
