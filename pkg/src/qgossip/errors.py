"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: validation problems exit 1,
failed certificates or internal consistency faults exit 2, resource-cap
violations exit 3.
"""


class QGossipError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(QGossipError, ValueError):
    """An operator or vector has an incompatible shape."""


class ValidationError(QGossipError, ValueError):
    """An input violates a documented precondition."""


class ScenarioError(ValidationError):
    """A scenario file is malformed; the message names the offending field."""


class CertificateError(QGossipError, RuntimeError):
    """A spectral or convergence certificate failed."""


class ConsistencyError(QGossipError, RuntimeError):
    """Two independent computations of the same quantity disagree.

    This always indicates an internal numerical fault, never bad user input.
    """


class ResourceLimitError(QGossipError, RuntimeError):
    """The requested computation exceeds a hard resource cap."""
