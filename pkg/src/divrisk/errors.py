"""Semantic exception hierarchy for divrisk."""


class DivriskError(Exception):
    """Base class for all divrisk errors."""


class UnsupportedDivergenceError(DivriskError):
    """Requested divergence is unknown or lacks a required capability."""


class InvalidParameterError(DivriskError, ValueError):
    """A numeric parameter is outside its admissible range."""


class DataError(DivriskError, ValueError):
    """Input data is malformed: empty, non-finite, mismatched or unparsable."""


class SpectrumError(DivriskError, ValueError):
    """A spectral weight function fails validation."""


class OracleSizeError(DivriskError, ValueError):
    """A brute-force oracle was called outside its supported problem size."""


class StaleMultiplierError(DivriskError, ValueError):
    """Supplied optimizers do not solve the characterizing equations."""


class NumericsError(DivriskError, RuntimeError):
    """A bracket expansion or iterative search was exhausted."""
