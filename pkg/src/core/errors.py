"""
Errors Module
=============

One exception hierarchy for the whole package. The CLI maps these to exit
codes (see src/cli.py):

    SupremaError
         |
         +-- ParameterError          -> exit 2
         |      +-- RejectRange
         |      +-- RejectSubordinator
         |      +-- RejectAsymmetricCauchy
         +-- ConfigError             -> exit 2
         +-- NumericalError          -> exit 1
         |      +-- QuadratureFailure
         |      +-- NonNormalizable
         |      +-- WindowTooNarrow
         |      +-- InsufficientSamples
         |      +-- NonMonotoneBias
         |      +-- RejectionStarvation
         +-- WrongRegime             -> exit 1
         +-- MissingLaw              -> exit 1

"""


class SupremaError(Exception):
    """Base class for every error raised by this package."""


# =============================================================================
# PARAMETER ERRORS
# =============================================================================

class ParameterError(SupremaError):
    """The (alpha, c_plus, c_minus) triple is not admissible."""


class RejectRange(ParameterError):
    """alpha outside (0, 2), a negative intensity, or both intensities zero."""


class RejectSubordinator(ParameterError):
    """alpha < 1 with one-sided jumps: X or -X is a subordinator."""


class RejectAsymmetricCauchy(ParameterError):
    """alpha = 1 is only strictly stable here when c_plus = c_minus."""


class ConfigError(SupremaError):
    """Malformed run configuration (unknown key, bad value, missing key)."""


# =============================================================================
# NUMERICAL ERRORS
# =============================================================================

class NumericalError(SupremaError):
    """A numerical procedure could not meet its contract."""


class QuadratureFailure(NumericalError):
    """A quadrature missed its error target."""


class NonNormalizable(NumericalError):
    """A weighted density has numerically divergent mass."""


class WindowTooNarrow(NumericalError):
    """Fewer points or less than one decade inside a fit window."""


class InsufficientSamples(NumericalError):
    """Monte Carlo sample too small or degenerate for a density estimate."""


class NonMonotoneBias(NumericalError):
    """Level estimates do not move monotonically with the skeleton size."""


class RejectionStarvation(NumericalError):
    """Meander rejection sampling accepted too few paths."""


# =============================================================================
# OTHER
# =============================================================================

class WrongRegime(SupremaError):
    """An operation was called outside the parameter regime it is exact in."""


class MissingLaw(SupremaError):
    """A requested constant belongs to a law that was skipped or failed."""
